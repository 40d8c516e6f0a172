#include "bdisk/snake.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

#include "bdisk/errors.hpp"

namespace bdisk {

namespace {

// Norms of a 3-dimensional Brownian motion sampled every `step` up to and
// including the first grid time where the norm reaches `height`.
std::vector<double> bes3_until(double height, double step, RandomStream& rng) {
  std::vector<double> out{0.0};
  const double sd = std::sqrt(step);
  double x = 0.0, y = 0.0, z = 0.0;
  for (;;) {
    x += sd * rng.normal();
    y += sd * rng.normal();
    z += sd * rng.normal();
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r >= height) {
      out.push_back(height);
      return out;
    }
    out.push_back(r);
  }
}

}  // namespace

GridPath sample_excursion_with_height(double height, const ExcursionOptions& options,
                                      RandomStream& rng) {
  if (!(height > 0.0) || !(options.step > 0.0) || options.min_points < 1 ||
      options.max_points < options.min_points) {
    throw ParameterError("sample_excursion_with_height: invalid parameters");
  }
  const double h2 = height * height;
  double step = std::min(options.step, h2 / options.min_points);
  // Expected grid size is about 2 height^2 / (3 step).
  step = std::max(step, 2.0 * h2 / (3.0 * options.max_points));

  const std::vector<double> up = bes3_until(height, step, rng);
  const std::vector<double> down = bes3_until(height, step, rng);

  GridPath zeta;
  zeta.start_time = 0.0;
  zeta.step = step;
  zeta.values.resize(static_cast<Eigen::Index>(up.size() + down.size() - 1));
  Eigen::Index k = 0;
  for (double v : up) zeta.values[k++] = v;
  for (std::size_t i = down.size() - 1; i-- > 0;) zeta.values[k++] = down[i];
  return zeta;
}

GridPath sample_excursion_lifetime(double epsilon, const ExcursionOptions& options,
                                   RandomStream& rng) {
  if (!(epsilon > 0.0)) throw ParameterError("sample_excursion_lifetime: epsilon must be > 0");
  if (!(options.step > 0.0)) throw ParameterError("sample_excursion_lifetime: step must be > 0");
  const double height = epsilon / rng.uniform();
  return sample_excursion_with_height(height, options, rng);
}

GridPath sample_excursion_lifetime(double epsilon, double step, RandomStream& rng) {
  ExcursionOptions options;
  options.step = step;
  return sample_excursion_lifetime(epsilon, options, rng);
}

GridPath sample_snake_head(const GridPath& zeta, RandomStream& rng) {
  zeta.validate();
  const Eigen::Index n = zeta.size();
  if (zeta.values[0] != 0.0 || zeta.values[n - 1] != 0.0 || (zeta.values.array() < 0.0).any()) {
    throw ParameterError("sample_snake_head: zeta must be >= 0 and vanish at both ends");
  }

  GridPath head;
  head.start_time = zeta.start_time;
  head.step = zeta.step;
  head.values.resize(n);
  head.values[0] = 0.0;

  // Current lineage: (height, label) with strictly increasing heights; the
  // top is always (zeta[i], head[i]).
  struct Mark {
    double height;
    double label;
  };
  std::vector<Mark> lineage{{0.0, 0.0}};
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double cur = zeta.values[i];
    const double next = zeta.values[i + 1];
    double label;
    if (next > cur) {
      label = head.values[i] + std::sqrt(next - cur) * rng.normal();
      lineage.push_back({next, label});
    } else if (next == cur) {
      label = head.values[i];
    } else {
      Mark above = lineage.back();
      while (lineage.back().height > next) {
        above = lineage.back();
        lineage.pop_back();
      }
      const Mark below = lineage.back();
      if (below.height == next) {
        label = below.label;
      } else {
        const double gap = above.height - below.height;
        const double w = (next - below.height) / gap;
        const double var = (next - below.height) * (above.height - next) / gap;
        label = below.label + w * (above.label - below.label) + std::sqrt(var) * rng.normal();
        lineage.push_back({next, label});
      }
    }
    head.values[i + 1] = label;
  }
  return head;
}

SnakeExcursion make_excursion(GridPath zeta, GridPath head, double epsilon) {
  if (zeta.size() != head.size()) throw ParameterError("make_excursion: grid mismatch");
  SnakeExcursion out;
  out.sigma = zeta.span();
  out.w_star = head.values.minCoeff();
  out.epsilon = epsilon;
  out.zeta = std::move(zeta);
  out.head = std::move(head);
  return out;
}

double tree_distance(const GridPath& zeta, Eigen::Index s, Eigen::Index t) {
  if (s < 0 || t < 0 || s >= zeta.size() || t >= zeta.size()) {
    throw ParameterError("tree_distance: grid index out of range");
  }
  const Eigen::Index lo = std::min(s, t);
  const Eigen::Index hi = std::max(s, t);
  const double low = zeta.values.segment(lo, hi - lo + 1).minCoeff();
  return zeta.values[s] + zeta.values[t] - 2.0 * low;
}

PoissonForest sample_forest(double t_lo, double t_hi,
                            const std::function<double(double)>& base_label, bool strict,
                            double epsilon, const ExcursionOptions& options,
                            RandomStream& rng) {
  if (!(epsilon > 0.0)) throw ParameterError("sample_forest: epsilon must be > 0");
  if (!(t_hi > t_lo)) throw ParameterError("sample_forest: empty interval");
  PoissonForest forest;
  const double rate = 1.0 / epsilon;
  double t = t_lo;
  for (;;) {
    t += rng.exponential(rate);
    if (t >= t_hi) break;
    ++forest.proposed;
    GridPath zeta = sample_excursion_lifetime(epsilon, options, rng);
    GridPath head = sample_snake_head(zeta, rng);
    SnakeExcursion excursion = make_excursion(std::move(zeta), std::move(head), epsilon);
    const double slack = excursion.w_star + base_label(t);
    if (strict ? slack > 0.0 : slack >= 0.0) {
      forest.atoms.push_back({t, std::move(excursion)});
    }
  }
  return forest;
}

PoissonForest sample_poisson_forest(const GridPath& bridge, double epsilon,
                                    const ExcursionOptions& options, RandomStream& rng) {
  bridge.validate();
  if (std::abs(bridge.start_time) > 1e-12 || std::abs(bridge.end_time() - 1.0) > 1e-9) {
    throw ParameterError("sample_poisson_forest: bridge must live on [0, 1]");
  }
  const double sqrt3 = std::sqrt(3.0);
  return sample_forest(
      0.0, 1.0, [&](double t) { return sqrt3 * bridge.value_at(t); }, false, epsilon,
      options, rng);
}

void write_excursion(std::ostream& os, const SnakeExcursion& excursion) {
  const auto old_precision = os.precision(17);
  os << "excursion sigma=" << excursion.sigma << " w_star=" << excursion.w_star
     << " epsilon=" << excursion.epsilon << " step=" << excursion.zeta.step
     << " count=" << excursion.zeta.size() << '\n';
  for (Eigen::Index i = 0; i < excursion.zeta.size(); ++i) {
    os << excursion.zeta.values[i] << ' ' << excursion.head.values[i] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace bdisk
