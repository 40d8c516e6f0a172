#include "bdisk/disk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "bdisk/bessel.hpp"
#include "bdisk/errors.hpp"

namespace bdisk {

namespace {

const double kSqrt3 = std::sqrt(3.0);

void check_entry(const ContourSequence& c, EntryIndex e) {
  if (e < 0 || e >= c.size()) throw ParameterError("contour entry index out of range");
}

}  // namespace

ContourSequence assemble_contour(const GridPath& boundary, const std::vector<ForestAtom>& atoms,
                                 Eigen::Index stride, Eigen::Index root_grid_index) {
  boundary.validate();
  const Eigen::Index n = boundary.size();
  if (stride < 1) throw ParameterError("assemble_contour: stride must be >= 1");
  if (root_grid_index < 0 || root_grid_index >= n) {
    throw ParameterError("assemble_contour: root grid index out of range");
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double t = atoms[i].t;
    if (!(t > boundary.start_time) || !(t < boundary.end_time())) {
      throw ParameterError("assemble_contour: atom position outside the boundary range");
    }
    if (i > 0 && !(atoms[i - 1].t < t)) {
      throw ParameterError("assemble_contour: atoms must be sorted strictly by position");
    }
  }

  std::vector<Eigen::Index> included;
  for (Eigen::Index g = root_grid_index % stride; g < n; g += stride) included.push_back(g);
  if (included.front() != 0) included.insert(included.begin(), 0);
  if (included.back() != n - 1) included.push_back(n - 1);

  Eigen::Index total = static_cast<Eigen::Index>(included.size());
  for (const auto& atom : atoms) total += atom.excursion.head.size();

  ContourSequence c;
  c.labels.resize(total);
  c.position.resize(total);
  c.atom.reserve(static_cast<std::size_t>(total));
  c.node.reserve(static_cast<std::size_t>(total));
  c.boundary_weight = boundary.step * static_cast<double>(stride);

  Eigen::Index k = 0;
  std::size_t next_atom = 0;
  for (std::size_t b = 0; b < included.size(); ++b) {
    const Eigen::Index g = included[b];
    if (g == root_grid_index) c.root_index = k;
    c.boundary.push_back(k);
    c.labels[k] = kSqrt3 * boundary.values[g];
    c.position[k] = boundary.time(g);
    c.atom.push_back(-1);
    c.node.push_back(g);
    ++k;
    const Eigen::Index host_limit =
        (b + 1 < included.size()) ? included[b + 1] : std::numeric_limits<Eigen::Index>::max();
    while (next_atom < atoms.size()) {
      const ForestAtom& atom = atoms[next_atom];
      const Eigen::Index anchor = boundary.index_at(atom.t);
      if (anchor >= host_limit) break;
      const double base = kSqrt3 * boundary.values[anchor];
      const Eigen::VectorXd& head = atom.excursion.head.values;
      for (Eigen::Index j = 0; j < head.size(); ++j) {
        c.labels[k] = head[j] + base;
        c.position[k] = atom.t;
        c.atom.push_back(static_cast<int>(next_atom));
        c.node.push_back(j);
        ++k;
      }
      ++next_atom;
    }
  }
  c.rmq.build(c.labels);
  return c;
}

DiskComplex build_complex(GridPath bridge, std::vector<ForestAtom> atoms, double contour_step) {
  bridge.validate();
  if (std::abs(bridge.start_time) > 1e-12 || std::abs(bridge.end_time() - 1.0) > 1e-9) {
    throw ParameterError("build_complex: bridge must live on [0, 1]");
  }
  if (!(contour_step > 0.0)) throw ParameterError("build_complex: contour_step must be > 0");
  const auto stride = std::max<Eigen::Index>(1, std::llround(contour_step / bridge.step));

  DiskComplex out;
  out.contour = assemble_contour(bridge, atoms, stride, 0);
  out.sigma_total = 0.0;
  for (const auto& atom : atoms) out.sigma_total += atom.excursion.sigma;
  out.boundary = std::move(bridge);
  out.atoms = std::move(atoms);
  return out;
}

DiskComplex sample_disk_complex(const DiskParams& params, RandomStream& rng) {
  GridPath bridge = sample_bessel_bridge(5, 1.0, params.bridge_step, rng);
  PoissonForest forest = sample_poisson_forest(bridge, params.epsilon, params.excursion, rng);
  DiskComplex out = build_complex(std::move(bridge), std::move(forest.atoms), params.contour_step);
  out.proposed_atoms = forest.proposed;
  return out;
}

double interval_min_label(const ContourSequence& c, EntryIndex u, EntryIndex v) {
  check_entry(c, u);
  check_entry(c, v);
  if (u <= v) return c.rmq.min(u, v);
  return std::min(c.rmq.min(u, c.size() - 1), c.rmq.min(0, v));
}

double d_circ(const ContourSequence& c, EntryIndex u, EntryIndex v) {
  const double forward = interval_min_label(c, u, v);
  const double backward = interval_min_label(c, v, u);
  return c.labels[u] + c.labels[v] - 2.0 * std::max(forward, backward);
}

Eigen::Index MetricApprox::local_index(EntryIndex entry) const {
  const auto it = std::find(points.begin(), points.end(), entry);
  if (it == points.end()) throw ParameterError("MetricApprox: entry is not a sampled point");
  return static_cast<Eigen::Index>(it - points.begin());
}

void close_shortest_paths(Eigen::MatrixXd& weights) {
  const Eigen::Index m = weights.rows();
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double via = weights(k, j);
      weights.col(j).array() = weights.col(j).array().min(weights.col(k).array() + via);
    }
  }
}

MetricApprox metric_shortest_path(const ContourSequence& c, std::span<const EntryIndex> points,
                                  const MetricOptions& options) {
  if (points.size() > options.point_cap) {
    throw ResourceError("metric_shortest_path: " + std::to_string(points.size()) +
                        " points exceed the cap of " + std::to_string(options.point_cap) +
                        "; subsample the contour or raise point_cap (memory and time grow "
                        "quadratically and cubically)");
  }
  MetricApprox out;
  out.points.assign(points.begin(), points.end());
  const auto m = static_cast<Eigen::Index>(points.size());
  out.dist.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.dist(j, j) = 0.0;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double w = d_circ(c, points[i], points[j]);
      out.dist(i, j) = w;
      out.dist(j, i) = w;
    }
  }
  close_shortest_paths(out.dist);
  return out;
}

Eigen::VectorXd distances_from(const ContourSequence& c, std::span<const EntryIndex> vertices,
                               Eigen::Index source, double radius, Eigen::Index target) {
  const auto m = static_cast<Eigen::Index>(vertices.size());
  if (source < 0 || source >= m) throw ParameterError("distances_from: bad source");
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(m, inf);
  std::vector<char> done(static_cast<std::size_t>(m), 0);
  dist[source] = 0.0;
  for (;;) {
    Eigen::Index best = -1;
    double best_dist = inf;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!done[i] && dist[i] < best_dist) {
        best_dist = dist[i];
        best = i;
      }
    }
    if (best < 0 || best_dist > radius) break;
    done[best] = 1;
    if (best == target) break;
    const EntryIndex from = vertices[best];
    for (Eigen::Index j = 0; j < m; ++j) {
      if (done[j]) continue;
      const double candidate = best_dist + d_circ(c, from, vertices[j]);
      if (candidate < dist[j] && candidate <= radius) dist[j] = candidate;
    }
  }
  return dist;
}

double boundary_ball_volume_root(const GridPath& bridge, double r) {
  return occupation_time_below(scaled(bridge, std::sqrt(3.0)), r);
}

RerootedBoundary::RerootedBoundary(const DiskComplex& complex, double u, int tree_block)
    : complex_(complex), u_(u) {
  if (!(u >= 0.0 && u <= 1.0)) throw ParameterError("RerootedBoundary: u must lie in [0, 1]");
  if (tree_block < 1) throw ParameterError("RerootedBoundary: tree_block must be >= 1");
  const ContourSequence& c = complex.contour;
  const auto n = static_cast<std::size_t>(c.size());
  vertex_.assign(n, 0);
  for (std::size_t e = 0; e < n; ++e) {
    if (c.atom[e] < 0) {
      vertex_[e] = 1;
      continue;
    }
    const bool opens = e == 0 || c.atom[e - 1] != c.atom[e] || c.node[e] % tree_block == 0;
    if (!opens) continue;
    vertex_[e] = 1;
    // Mark the lowest entry of the block that starts here.
    std::size_t low = e;
    for (std::size_t f = e + 1; f < n && c.atom[f] == c.atom[e] && c.node[f] % tree_block != 0;
         ++f) {
      if (c.labels[static_cast<Eigen::Index>(f)] < c.labels[static_cast<Eigen::Index>(low)]) low = f;
    }
    vertex_[low] = 1;
  }
}

EntryIndex RerootedBoundary::entry_at(double t) const {
  double tau = t + u_;
  tau -= std::floor(tau);
  const ContourSequence& c = complex_.contour;
  const Eigen::Index g = complex_.boundary.index_at(tau);
  // Last boundary entry whose grid index is <= g.
  const auto it = std::upper_bound(c.boundary.begin(), c.boundary.end(), g,
                                   [&](Eigen::Index grid, EntryIndex e) {
                                     return grid < c.node[static_cast<std::size_t>(e)];
                                   });
  return *(it - 1);
}

double RerootedBoundary::distance(double s, double t) const {
  const ContourSequence& c = complex_.contour;
  const EntryIndex a = entry_at(s);
  const EntryIndex b = entry_at(t);
  if (a == b) return 0.0;
  const double bound = d_circ(c, a, b);
  const double la = c.labels[a];
  const double lb = c.labels[b];
  std::vector<EntryIndex> vertices;
  Eigen::Index source = -1, target = -1;
  for (EntryIndex x = 0; x < c.size(); ++x) {
    const double lx = c.labels[x];
    if (x == a || x == b || (is_vertex(x) && std::abs(lx - la) + std::abs(lx - lb) <= bound)) {
      if (x == a) source = static_cast<Eigen::Index>(vertices.size());
      if (x == b) target = static_cast<Eigen::Index>(vertices.size());
      vertices.push_back(x);
    }
  }
  const Eigen::VectorXd dist = distances_from(c, vertices, source, bound, target);
  return std::min(dist[target], bound);
}

double RerootedBoundary::ball_volume(double r) const {
  if (!(r > 0.0)) throw ParameterError("ball_volume: radius must be > 0");
  const ContourSequence& c = complex_.contour;
  const EntryIndex a = entry_at(0.0);
  const double la = c.labels[a];
  std::vector<EntryIndex> vertices;
  Eigen::Index source = -1;
  for (EntryIndex x = 0; x < c.size(); ++x) {
    if (x == a || (is_vertex(x) && std::abs(c.labels[x] - la) < r)) {
      if (x == a) source = static_cast<Eigen::Index>(vertices.size());
      vertices.push_back(x);
    }
  }
  const Eigen::VectorXd dist = distances_from(c, vertices, source, r);
  // The far-end entry is the same boundary point as time 0; count it once.
  const EntryIndex far_end = c.boundary.back();
  Eigen::Index inside = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] != far_end && c.is_boundary(vertices[i]) &&
        dist[static_cast<Eigen::Index>(i)] < r) {
      ++inside;
    }
  }
  return c.boundary_weight * static_cast<double>(inside);
}

void write_glued_body(std::ostream& os, const GridPath& R, const std::vector<ForestAtom>& atoms,
                      const ContourSequence& c) {
  const auto old_precision = os.precision(17);
  os << "boundary start=" << R.start_time << " step=" << R.step << " count=" << R.size() << '\n';
  for (Eigen::Index i = 0; i < R.size(); ++i) os << R.values[i] << '\n';
  double sigma_total = 0.0;
  for (const auto& atom : atoms) sigma_total += atom.excursion.sigma;
  os << "atoms " << atoms.size() << " sigma_total=" << sigma_total << '\n';
  for (const auto& atom : atoms) {
    os << "atom t=" << atom.t << " anchor=" << R.index_at(atom.t) << '\n';
    write_excursion(os, atom.excursion);
  }
  os << "contour " << c.size() << " root=" << c.root_index << '\n';
  for (EntryIndex e = 0; e < c.size(); ++e) {
    os << c.atom[static_cast<std::size_t>(e)] << ' ' << c.node[static_cast<std::size_t>(e)]
       << ' ' << c.position[e] << ' ' << c.labels[e] << '\n';
  }
  os.precision(old_precision);
}

void write_complex(std::ostream& os, const DiskComplex& complex) {
  os << "bdisk-complex 1\n";
  write_glued_body(os, complex.boundary, complex.atoms, complex.contour);
}

void write_distance_matrix_csv(std::ostream& os, const MetricApprox& metric) {
  const auto old_precision = os.precision(17);
  os << "entry";
  for (EntryIndex p : metric.points) os << ',' << p;
  os << '\n';
  for (Eigen::Index i = 0; i < metric.dist.rows(); ++i) {
    os << metric.points[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < metric.dist.cols(); ++j) os << ',' << metric.dist(i, j);
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace bdisk
