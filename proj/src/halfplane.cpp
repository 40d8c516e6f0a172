#include "bdisk/halfplane.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "bdisk/bessel.hpp"
#include "bdisk/errors.hpp"

namespace bdisk {

HalfPlaneComplex assemble_halfplane(GridPath two_sided, std::vector<ForestAtom> atoms) {
  two_sided.validate();
  const double window = -two_sided.start_time;
  if (!(window > 0.0) || std::abs(two_sided.end_time() - window) > 1e-9 * window) {
    throw ParameterError("assemble_halfplane: path must live on a symmetric window [-T, T]");
  }
  const Eigen::Index root = two_sided.index_at(0.0);
  if (std::abs(two_sided.time(root)) > 1e-9 * window) {
    throw ParameterError("assemble_halfplane: time 0 must be a grid point");
  }
  HalfPlaneComplex out;
  out.window = window;
  out.contour = assemble_contour(two_sided, atoms, 1, root);
  out.boundary = std::move(two_sided);
  out.atoms = std::move(atoms);
  return out;
}

HalfPlaneComplex build_halfplane(double window, const HalfPlaneOptions& options,
                                 RandomStream& rng) {
  if (!(window > 0.0) || !(options.step > 0.0) || !(options.epsilon > 0.0)) {
    throw ParameterError("build_halfplane: window, step and epsilon must be > 0");
  }
  const auto half = std::max<Eigen::Index>(1, std::llround(window / options.step));
  const double step = window / static_cast<double>(half);
  const GridPath right = sample_bessel_process(5, window, step, rng);
  const GridPath left = sample_bessel_process(5, window, step, rng);

  GridPath x;
  x.start_time = -window;
  x.step = step;
  x.values.resize(2 * half + 1);
  for (Eigen::Index i = 0; i <= half; ++i) {
    x.values[half - i] = left.values[i];
    x.values[half + i] = right.values[i];
  }

  const double sqrt3 = std::sqrt(3.0);
  ExcursionOptions excursion = options.excursion;
  PoissonForest forest = sample_forest(
      -window, window, [&](double t) { return sqrt3 * x.value_at(t); }, true, options.epsilon,
      excursion, rng);
  return assemble_halfplane(std::move(x), std::move(forest.atoms));
}

MetricApprox metric_infty(const HalfPlaneComplex& h, std::span<const EntryIndex> points,
                          const MetricOptions& options) {
  return metric_shortest_path(h.contour, points, options);
}

double omega_eta(const HalfPlaneComplex& h, double eta) {
  double out = std::numeric_limits<double>::infinity();
  for (EntryIndex e = 0; e < h.contour.size(); ++e) {
    if (std::abs(h.contour.position[e]) > eta) out = std::min(out, h.contour.labels[e]);
  }
  return out;
}

MetricApprox truncated_metric(const HalfPlaneComplex& h, double eta,
                              std::span<const EntryIndex> points,
                              const MetricOptions& options) {
  if (!(eta > 0.0) || eta > h.window) {
    throw ParameterError("truncated_metric: eta must lie in (0, T]");
  }
  const ContourSequence& full = h.contour;
  // Entries attached inside [-eta, eta] form one contiguous block.
  EntryIndex first = -1, last = -1;
  for (EntryIndex e = 0; e < full.size(); ++e) {
    if (std::abs(full.position[e]) <= eta) {
      if (first < 0) first = e;
      last = e;
    }
  }
  if (first < 0) throw ParameterError("truncated_metric: empty sub-contour");

  ContourSequence sub;
  const Eigen::Index m = last - first + 1;
  sub.labels = full.labels.segment(first, m);
  sub.position = full.position.segment(first, m);
  sub.atom.assign(full.atom.begin() + first, full.atom.begin() + last + 1);
  sub.node.assign(full.node.begin() + first, full.node.begin() + last + 1);
  sub.root_index = full.root_index - first;
  sub.boundary_weight = full.boundary_weight;
  sub.rmq.build(sub.labels);

  std::vector<EntryIndex> local(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const EntryIndex p = points[i];
    if (p < first || p > last) {
      throw ParameterError("truncated_metric: point attached outside [-eta, eta]");
    }
    local[i] = p - first;
  }
  MetricApprox out = metric_shortest_path(sub, local, options);
  out.points.assign(points.begin(), points.end());
  return out;
}

void write_halfplane(std::ostream& os, const HalfPlaneComplex& h) {
  const auto old_precision = os.precision(17);
  os << "bdisk-halfplane 1\nwindow T=" << h.window << '\n';
  os.precision(old_precision);
  write_glued_body(os, h.boundary, h.atoms, h.contour);
}

}  // namespace bdisk
