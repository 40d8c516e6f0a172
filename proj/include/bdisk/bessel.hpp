#ifndef BDISK_BESSEL_HPP_
#define BDISK_BESSEL_HPP_

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bdisk/errors.hpp"
#include "bdisk/grid_path.hpp"
#include "bdisk/random.hpp"

namespace bdisk {

// Norm of `dim` independent Brownian motions on [0, horizon]; exact in law at
// the grid points. The grid is 0, step, ..., ceil(horizon / step) * step.
GridPath sample_bessel_process(int dim, double horizon, double step, RandomStream& rng);

// Norm of `dim` independent Brownian bridges of the given length from 0 to 0.
// The step is adjusted to length / round(length / step); both endpoints are 0.
GridPath sample_bessel_bridge(int dim, double length, double step, RandomStream& rng);

// Left-point Riemann sum: step * #{i < size - 1 : values[i] < level}.
double occupation_time_below(const GridPath& path, double level);

struct LastPassage {
  double time = 0.0;
  bool censored = false;  // the path is still <= level at the final grid point
};

// Last grid time with value <= level.
LastPassage last_passage_time(const GridPath& path, double level);

// Densities of X_{1/2} (rho) and R_{1/2} (rho_bar) for the 5-dimensional
// Bessel process and bridge of length 1, and f = rho_bar / rho.
template <typename Scalar>
struct HalfTimeDensities {
  Scalar rho;
  Scalar rho_bar;
  Scalar f;
};

template <typename Scalar>
HalfTimeDensities<Scalar> bessel_half_time_densities(Scalar x) {
  if (!(x >= Scalar(0))) throw DomainError("bessel_half_time_densities: x must be >= 0");
  const Scalar sqrt_pi = std::sqrt(std::numbers::pi_v<Scalar>);
  const Scalar sqrt2 = std::numbers::sqrt2_v<Scalar>;
  const Scalar x4 = x * x * x * x;
  const Scalar x2 = x * x;
  return {Scalar(8) / (Scalar(3) * sqrt_pi) * x4 * std::exp(-x2),
          Scalar(32) * sqrt2 / (Scalar(3) * sqrt_pi) * x4 * std::exp(-Scalar(2) * x2),
          Scalar(4) * sqrt2 * std::exp(-x2)};
}

// P(chi^2_5 <= y) in closed form.
double chi_square5_cdf(double y);
inline double chi_square5_sf(double y) { return 1.0 - chi_square5_cdf(y); }

// P(|G| <= x) for G centred Gaussian in R^5 with covariance variance * Id.
inline double gaussian_norm5_cdf(double x, double variance) {
  if (x <= 0.0) return 0.0;
  return chi_square5_cdf(x * x / variance);
}

// ---------------------------------------------------------------------------
// Adaptively refined paths.
//
// Occupation times below 2^-k scale like 4^-k, so resolving levels down to
// 2^-12 on a uniform grid is out of reach. The refined samplers bisect grid
// intervals with exact Brownian-bridge midpoints (Levy construction) wherever
// the path is close to zero, which keeps every sampled point exact in law.

struct RefinementPlan {
  double floor_level = 1.0 / 4096;  // smallest level that must be resolved
  double resolution = 400.0;        // intervals near level a have length <= a^2 / resolution
  double value_scale = 1.0;         // levels are compared against value_scale * |B|
  int base_intervals = 64;
  int max_depth = 40;
};

struct RefinedPath {
  std::vector<double> times;   // strictly increasing, times.front() == 0
  std::vector<double> values;  // Euclidean norm at each time (unscaled)

  std::size_t size() const { return times.size(); }
  double end_time() const { return times.back(); }
};

RefinedPath sample_refined_bessel_process(int dim, double horizon,
                                          const RefinementPlan& plan, RandomStream& rng);
RefinedPath sample_refined_bessel_bridge(int dim, double length,
                                         const RefinementPlan& plan, RandomStream& rng);

// Left-point Riemann sum of 1{scale * value < level} over [0, min(until, end)].
double occupation_time_below(const RefinedPath& path, double level, double scale = 1.0,
                             double until = std::numeric_limits<double>::infinity());

LastPassage last_passage_time(const RefinedPath& path, double level, double scale = 1.0);

}  // namespace bdisk

#endif  // BDISK_BESSEL_HPP_
