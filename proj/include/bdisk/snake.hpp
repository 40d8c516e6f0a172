#ifndef BDISK_SNAKE_HPP_
#define BDISK_SNAKE_HPP_

#include <functional>
#include <iosfwd>
#include <vector>

#include "bdisk/grid_path.hpp"
#include "bdisk/random.hpp"

namespace bdisk {

// One discretized snake trajectory: lifetime zeta and head labels on a shared
// grid. w_star is the minimum of head (<= 0 since head(0) = 0).
struct SnakeExcursion {
  GridPath zeta;
  GridPath head;
  double sigma = 0.0;
  double w_star = 0.0;
  double epsilon = 0.0;  // height cutoff the excursion was drawn under
};

struct ExcursionOptions {
  double step = 1e-4;  // upper bound on the contour-time step
  // Each excursion gets at least about `min_points` grid points: the step is
  // reduced to height^2 / min_points for small excursions.
  int min_points = 32;
  // Very tall excursions are coarsened so their grid never exceeds roughly
  // this many points. They are almost always thinned away.
  int max_points = 20000;
};

// Ito excursion conditioned on sup zeta >= epsilon. The height is drawn from
// P(M >= m) = epsilon / m, and the path given its height is two independent
// 3-dimensional Bessel processes run up to M, the second one time-reversed.
GridPath sample_excursion_lifetime(double epsilon, double step, RandomStream& rng);
GridPath sample_excursion_lifetime(double epsilon, const ExcursionOptions& options,
                                   RandomStream& rng);

// Same construction with a prescribed height.
GridPath sample_excursion_with_height(double height, const ExcursionOptions& options,
                                      RandomStream& rng);

// Centred Gaussian labels with Cov(head(i), head(j)) = min_{[i, j]} zeta on
// the grid. Each step assigns one Gaussian increment per new tree edge; the
// label at a branch point below the current lineage is interpolated by a
// Brownian bridge between the two bracketing lineage entries.
GridPath sample_snake_head(const GridPath& zeta, RandomStream& rng);

SnakeExcursion make_excursion(GridPath zeta, GridPath head, double epsilon);

// d(s, t) = zeta(s) + zeta(t) - 2 min_{[s, t]} zeta for grid indices s, t.
double tree_distance(const GridPath& zeta, Eigen::Index s, Eigen::Index t);

struct ForestAtom {
  double t = 0.0;  // attachment position on the boundary
  SnakeExcursion excursion;
};

struct PoissonForest {
  std::vector<ForestAtom> atoms;  // survivors, sorted by t
  std::size_t proposed = 0;       // atom count before thinning
};

// Poisson atoms on [t_lo, t_hi] with intensity 2 dt N_0 restricted to
// sup zeta >= epsilon, i.e. rate 1 / epsilon. An atom at t survives when
// w_star + base_label(t) >= 0 (or > 0 when `strict`).
PoissonForest sample_forest(double t_lo, double t_hi,
                            const std::function<double(double)>& base_label, bool strict,
                            double epsilon, const ExcursionOptions& options,
                            RandomStream& rng);

// Forest attached to a Bessel bridge R on [0, 1] with base label sqrt(3) R(t).
PoissonForest sample_poisson_forest(const GridPath& bridge, double epsilon,
                                    const ExcursionOptions& options, RandomStream& rng);

// Two aligned value arrays (zeta, head) with a header (sigma, w_star, epsilon).
void write_excursion(std::ostream& os, const SnakeExcursion& excursion);

}  // namespace bdisk

#endif  // BDISK_SNAKE_HPP_
