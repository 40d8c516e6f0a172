#ifndef BDISK_HAUSDORFF_HPP_
#define BDISK_HAUSDORFF_HPP_

#include <functional>
#include <vector>

#include "bdisk/bessel.hpp"
#include "bdisk/gauge.hpp"
#include "bdisk/grid_path.hpp"

namespace bdisk {

struct DyadicInterval {
  int level;       // p
  long long index; // i, covering [i 2^-p, (i + 1) 2^-p]

  double lo() const;
  double hi() const;
};

// Upper bound on the D-diameter of a dyadic boundary interval.
using DiameterFn = std::function<double(const DyadicInterval&)>;

struct CoveringEstimate {
  int level = 0;                 // scale exponent p
  std::vector<double> diameters; // one per dyadic interval of level p inside A
  double value = 0.0;            // sum of h(diam)
  int clamped = 0;               // intervals whose diameter exceeded the gauge domain
};

// Single-level dyadic covers of A = [a, b] for p in [p_min, p_max]. Only
// intervals contained in A are used. Diameters above the gauge clamp are
// evaluated at the clamp and counted in `clamped`.
std::vector<CoveringEstimate> covering_upper_estimate(const DiameterFn& diam,
                                                      const Gauge<double>& gauge, int p_min,
                                                      int p_max, double a = 0.0, double b = 1.0);

// Infimum over hierarchical dyadic covers using levels p_stage..p_max: each
// level-p_stage interval is either kept or replaced by the best cover of its
// two halves. Intervals whose diameter exceeds the gauge clamp are kept only
// at p_max. Adding finer levels can only lower the result.
double dyadic_cover_infimum(const DiameterFn& diam, const Gauge<double>& gauge, int p_stage,
                            int p_max, double a = 0.0, double b = 1.0);

struct DensityRatioSeries {
  std::vector<int> exponents;  // k
  std::vector<double> radii;   // 2^-k, decreasing
  std::vector<double> ratios;  // mu(B_r) / h(r)
  std::vector<double> tail_max;  // max over ratios at k' >= k
  double running_limsup = 0.0;   // max over the recorded tail
};

// Ratios ball_volume(2^-k) / h(2^-k) for k in [k_min, k_max].
DensityRatioSeries density_ratio_series(const std::function<double(double)>& ball_volume,
                                        const Gauge<double>& gauge, int k_min, int k_max);

// True iff, for every k in [n, 2n], the occupation time of scale * path below
// 2^-k is at most gamma * h(2^-k).
bool bad_event_indicator(const GridPath& path, int n, double gamma, double scale,
                         const Gauge<double>& gauge);
bool bad_event_indicator(const RefinedPath& path, int n, double gamma, double scale,
                         const Gauge<double>& gauge,
                         double until = std::numeric_limits<double>::infinity());

// Occupation times below 2^-k for k in [k_lo, k_hi] from one path.
std::vector<double> dyadic_occupations(const RefinedPath& path, int k_lo, int k_hi,
                                       double scale, double until);
// Same event from precomputed occupations (index 0 is k_lo).
bool bad_event_from_occupations(const std::vector<double>& occupations, int k_lo, int n, int m,
                                double gamma, const Gauge<double>& gauge);

// (1 + log(1 / gap)) * sqrt(gap), the modulus-of-continuity envelope.
inline double modulus_envelope(double gap) {
  if (!(gap > 0.0 && gap <= 1.0)) throw DomainError("modulus_envelope: gap must lie in (0, 1]");
  return (1.0 + std::log(1.0 / gap)) * std::sqrt(gap);
}

struct KappaSeries {
  std::vector<double> epsilons;
  std::vector<std::vector<double>> ratios;  // [replica][epsilon index]
  std::vector<double> mean, standard_error, min, max, spread;  // per epsilon
};

// proxies[r][j] is the m^h proxy of [0, epsilons[j]] for replica r.
KappaSeries kappa_estimate(const std::vector<std::vector<double>>& proxies,
                           const std::vector<double>& epsilons);

}  // namespace bdisk

#endif  // BDISK_HAUSDORFF_HPP_
