#ifndef BDISK_DISK_HPP_
#define BDISK_DISK_HPP_

#include <Eigen/Core>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "bdisk/grid_path.hpp"
#include "bdisk/rmq.hpp"
#include "bdisk/snake.hpp"

namespace bdisk {

using EntryIndex = Eigen::Index;

// Labelled contour of the glued space: boundary entries in order, each
// atom's full tree contour spliced in right after the boundary entry at its
// attachment point. Boundary times 0 and the far end are distinct entries.
struct ContourSequence {
  Eigen::VectorXd labels;
  Eigen::VectorXd position;           // boundary time, or the atom's t for tree entries
  std::vector<int> atom;              // -1 for boundary entries
  std::vector<Eigen::Index> node;     // boundary grid index or tree grid index
  std::vector<EntryIndex> boundary;   // contour index of each boundary entry, in order
  double boundary_weight = 0.0;       // Lebesgue weight carried by one boundary entry
  EntryIndex root_index = 0;
  SparseTableMin<double> rmq;

  EntryIndex size() const { return labels.size(); }
  bool is_boundary(EntryIndex e) const { return atom[static_cast<std::size_t>(e)] < 0; }
};

// Builds the contour from boundary base labels sqrt(3) * boundary and atoms
// attached at boundary.index_at(t). Boundary entries are every `stride`-th
// grid point counted from `root_grid_index`, plus both ends.
ContourSequence assemble_contour(const GridPath& boundary, const std::vector<ForestAtom>& atoms,
                                 Eigen::Index stride, Eigen::Index root_grid_index);

struct DiskComplex {
  GridPath boundary;  // the Bessel bridge R on [0, 1]
  std::vector<ForestAtom> atoms;
  ContourSequence contour;
  double sigma_total = 0.0;
  std::size_t proposed_atoms = 0;  // Poisson atoms before thinning
};

struct DiskParams {
  double bridge_step = 1.0 / 4096;
  double contour_step = 1.0 / 2048;
  double epsilon = 0.01;
  ExcursionOptions excursion;
};

// Bridge, thinned forest and contour in one go.
DiskComplex sample_disk_complex(const DiskParams& params, RandomStream& rng);

// contour_step is the spacing of boundary entries (rounded to a multiple of
// the bridge step).
DiskComplex build_complex(GridPath bridge, std::vector<ForestAtom> atoms, double contour_step);

// Minimum label over the cyclic contour interval from u to v inclusive;
// for u > v the interval wraps through the end of the contour.
double interval_min_label(const ContourSequence& c, EntryIndex u, EntryIndex v);

// l(u) + l(v) - 2 max(min over [|u, v|], min over [|v, u|]).
double d_circ(const ContourSequence& c, EntryIndex u, EntryIndex v);

// Shortest-path closure of d_circ on a finite point set.
struct MetricApprox {
  std::vector<EntryIndex> points;
  Eigen::MatrixXd dist;

  Eigen::Index local_index(EntryIndex entry) const;
};

struct MetricOptions {
  std::size_t point_cap = 4096;
};

// Complete graph over the d_circ edge weights, closed under Floyd-Warshall.
MetricApprox metric_shortest_path(const ContourSequence& c, std::span<const EntryIndex> points,
                                  const MetricOptions& options = {});
// Same closure over a caller-supplied edge matrix.
void close_shortest_paths(Eigen::MatrixXd& weights);

// Dense Dijkstra from `source` over the contour entries admitted by `keep`,
// with d_circ edges. Entries farther than `radius` are left at +infinity.
// When `target` >= 0 the search stops once the target is settled.
Eigen::VectorXd distances_from(const ContourSequence& c, std::span<const EntryIndex> vertices,
                               Eigen::Index source, double radius,
                               Eigen::Index target = -1);

// Lebesgue volume of the boundary ball of radius r at the root:
// occupation time of sqrt(3) R below r.
double boundary_ball_volume_root(const GridPath& bridge, double r);

// Boundary statistics of a complex with the boundary parameterization shifted
// by u (cyclically). Distances go through the label-pruned contour graph.
class RerootedBoundary {
 public:
  // Dijkstra runs over boundary entries and a subset of tree entries: within
  // each tree, blocks of `tree_block` consecutive nodes contribute their first
  // entry and their lowest-label entry. Interval minima still use every entry.
  RerootedBoundary(const DiskComplex& complex, double u, int tree_block = 1);

  double shift() const { return u_; }
  // Boundary entry for rerooted time t (left grid point of (t + u) mod 1).
  EntryIndex entry_at(double t) const;
  // D-proxy between rerooted boundary times s and t.
  double distance(double s, double t) const;
  // Lebesgue volume of {t : D(Gamma(u), Gamma(t)) < r}.
  double ball_volume(double r) const;

 private:
  bool is_vertex(EntryIndex e) const { return vertex_[static_cast<std::size_t>(e)] != 0; }

  const DiskComplex& complex_;
  double u_;
  std::vector<char> vertex_;
};

// Text dump with a version tag: boundary path, atoms, contour labels.
void write_complex(std::ostream& os, const DiskComplex& complex);
// The part after the header line, shared with the half-plane export.
void write_glued_body(std::ostream& os, const GridPath& boundary,
                      const std::vector<ForestAtom>& atoms, const ContourSequence& contour);
void write_distance_matrix_csv(std::ostream& os, const MetricApprox& metric);

}  // namespace bdisk

#endif  // BDISK_DISK_HPP_
