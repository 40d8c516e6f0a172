#include "bdisk/bessel.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace bdisk {

namespace {

void check_dim(int dim) {
  if (dim < 1) throw ParameterError("Bessel sampling: dim must be >= 1");
}

}  // namespace

GridPath sample_bessel_process(int dim, double horizon, double step, RandomStream& rng) {
  check_dim(dim);
  if (!(horizon > 0.0) || !(step > 0.0)) {
    throw ParameterError("sample_bessel_process: horizon and step must be > 0");
  }
  const auto n = static_cast<Eigen::Index>(std::ceil(horizon / step - 1e-9));
  GridPath path;
  path.start_time = 0.0;
  path.step = step;
  path.values.resize(n + 1);
  path.values[0] = 0.0;

  const double sd = std::sqrt(step);
  Eigen::VectorXd position = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index i = 1; i <= n; ++i) {
    for (int d = 0; d < dim; ++d) position[d] += sd * rng.normal();
    path.values[i] = position.norm();
  }
  return path;
}

GridPath sample_bessel_bridge(int dim, double length, double step, RandomStream& rng) {
  check_dim(dim);
  if (!(length > 0.0) || !(step > 0.0)) {
    throw ParameterError("sample_bessel_bridge: length and step must be > 0");
  }
  const auto n = std::max<Eigen::Index>(1, std::llround(length / step));
  GridPath path;
  path.start_time = 0.0;
  path.step = length / static_cast<double>(n);
  path.values.resize(n + 1);

  // Brownian motions first, then B(t) - (t / L) B(L) coordinate by coordinate.
  const double sd = std::sqrt(path.step);
  Eigen::MatrixXd motion(dim, n + 1);
  motion.col(0).setZero();
  for (Eigen::Index i = 1; i <= n; ++i) {
    for (int d = 0; d < dim; ++d) motion(d, i) = motion(d, i - 1) + sd * rng.normal();
  }
  const Eigen::VectorXd terminal = motion.col(n);
  for (Eigen::Index i = 0; i <= n; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n);
    path.values[i] = (motion.col(i) - frac * terminal).norm();
  }
  path.values[0] = 0.0;
  path.values[n] = 0.0;
  return path;
}

double occupation_time_below(const GridPath& path, double level) {
  if (!(level > 0.0)) throw ParameterError("occupation_time_below: level must be > 0");
  const Eigen::Index n = path.size() - 1;
  return path.step * static_cast<double>((path.values.head(n).array() < level).count());
}

LastPassage last_passage_time(const GridPath& path, double level) {
  if (path.size() == 0) throw ParameterError("last_passage_time: empty path");
  if (!(level > 0.0)) throw ParameterError("last_passage_time: level must be > 0");
  LastPassage out;
  for (Eigen::Index i = path.size() - 1; i >= 0; --i) {
    if (path.values[i] <= level) {
      out.time = path.time(i);
      out.censored = (i == path.size() - 1);
      return out;
    }
  }
  out.time = path.start_time;
  return out;
}

double chi_square5_cdf(double y) {
  if (y <= 0.0) return 0.0;
  const double root = std::sqrt(y);
  return std::erf(std::sqrt(0.5 * y)) -
         std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * y) * (root + y * root / 3.0);
}

void write_grid_path_csv(std::ostream& os, const GridPath& path, const std::string& name) {
  const auto old_precision = os.precision(17);
  os << "# grid_path " << name << "\n# start_time = " << path.start_time
     << "\n# step = " << path.step << "\n# count = " << path.size() << "\ntime,value\n";
  for (Eigen::Index i = 0; i < path.size(); ++i) {
    os << path.time(i) << ',' << path.values[i] << '\n';
  }
  os.precision(old_precision);
}

// --------------------------------------------------------------------------
// Refined sampling.

namespace {

constexpr int kMaxRefinedDim = 8;
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxRefinedDim, 1>;

struct Node {
  double time;
  Point position;
};

void check_refined_dim(int dim) {
  check_dim(dim);
  if (dim > kMaxRefinedDim) throw ParameterError("refined Bessel sampling: dim must be <= 8");
}

class Refiner {
 public:
  Refiner(const RefinementPlan& plan, RandomStream& rng) : plan_(plan), rng_(rng) {
    if (!(plan.floor_level > 0.0) || !(plan.resolution > 0.0) ||
        !(plan.value_scale > 0.0) || plan.base_intervals < 1 || plan.max_depth < 0) {
      throw ParameterError("RefinementPlan: invalid parameters");
    }
  }

  // Emits `left` and every refinement point strictly inside (left, right).
  void refine(const Node& left, const Node& right, RefinedPath& out) {
    struct Pending {
      Node left, right;
      int depth;
    };
    std::vector<Pending> stack;
    stack.push_back({left, right, 0});
    while (!stack.empty()) {
      Pending cur = std::move(stack.back());
      stack.pop_back();
      if (cur.depth < plan_.max_depth && needs_split(cur.left, cur.right)) {
        Node mid{0.5 * (cur.left.time + cur.right.time), {}};
        const double sd = std::sqrt(0.25 * (cur.right.time - cur.left.time));
        mid.position = 0.5 * (cur.left.position + cur.right.position);
        for (Eigen::Index d = 0; d < mid.position.size(); ++d) mid.position[d] += sd * rng_.normal();
        stack.push_back({mid, std::move(cur.right), cur.depth + 1});
        stack.push_back({std::move(cur.left), std::move(mid), cur.depth + 1});
      } else {
        out.times.push_back(cur.left.time);
        out.values.push_back(cur.left.position.norm());
      }
    }
  }

 private:
  bool needs_split(const Node& a, const Node& b) const {
    const double nearest =
        plan_.value_scale * std::min(a.position.norm(), b.position.norm());
    const double level = std::max(nearest, plan_.floor_level);
    return (b.time - a.time) > level * level / plan_.resolution;
  }

  const RefinementPlan& plan_;
  RandomStream& rng_;
};

RefinedPath refine_base(const std::vector<Node>& base, const RefinementPlan& plan,
                        RandomStream& rng) {
  Refiner refiner(plan, rng);
  RefinedPath out;
  for (std::size_t i = 0; i + 1 < base.size(); ++i) refiner.refine(base[i], base[i + 1], out);
  out.times.push_back(base.back().time);
  out.values.push_back(base.back().position.norm());
  return out;
}

}  // namespace

RefinedPath sample_refined_bessel_process(int dim, double horizon,
                                          const RefinementPlan& plan, RandomStream& rng) {
  check_refined_dim(dim);
  if (!(horizon > 0.0)) throw ParameterError("sample_refined_bessel_process: horizon must be > 0");
  const int m = plan.base_intervals;
  if (m < 1) throw ParameterError("RefinementPlan: base_intervals must be >= 1");
  const double h = horizon / m;
  const double sd = std::sqrt(h);
  std::vector<Node> base(m + 1);
  base[0] = {0.0, Point::Zero(dim)};
  for (int i = 1; i <= m; ++i) {
    base[i].time = (i == m) ? horizon : h * i;
    base[i].position = base[i - 1].position;
    for (int d = 0; d < dim; ++d) base[i].position[d] += sd * rng.normal();
  }
  return refine_base(base, plan, rng);
}

RefinedPath sample_refined_bessel_bridge(int dim, double length,
                                         const RefinementPlan& plan, RandomStream& rng) {
  check_refined_dim(dim);
  if (!(length > 0.0)) throw ParameterError("sample_refined_bessel_bridge: length must be > 0");
  const int m = plan.base_intervals;
  if (m < 1) throw ParameterError("RefinementPlan: base_intervals must be >= 1");
  const double h = length / m;
  const double sd = std::sqrt(h);
  std::vector<Node> base(m + 1);
  base[0] = {0.0, Point::Zero(dim)};
  for (int i = 1; i <= m; ++i) {
    base[i].time = (i == m) ? length : h * i;
    base[i].position = base[i - 1].position;
    for (int d = 0; d < dim; ++d) base[i].position[d] += sd * rng.normal();
  }
  const Point terminal = base[m].position;
  for (int i = 1; i < m; ++i) {
    base[i].position -= (static_cast<double>(i) / m) * terminal;
  }
  base[m].position.setZero();
  return refine_base(base, plan, rng);
}

double occupation_time_below(const RefinedPath& path, double level, double scale,
                             double until) {
  if (!(level > 0.0)) throw ParameterError("occupation_time_below: level must be > 0");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double t0 = path.times[i];
    if (t0 >= until) break;
    const double t1 = std::min(path.times[i + 1], until);
    if (scale * path.values[i] < level) total += t1 - t0;
  }
  return total;
}

LastPassage last_passage_time(const RefinedPath& path, double level, double scale) {
  if (path.size() == 0) throw ParameterError("last_passage_time: empty path");
  LastPassage out;
  for (std::size_t i = path.size(); i-- > 0;) {
    if (scale * path.values[i] <= level) {
      out.time = path.times[i];
      out.censored = (i + 1 == path.size());
      return out;
    }
  }
  return out;
}

}  // namespace bdisk
