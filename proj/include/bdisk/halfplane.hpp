#ifndef BDISK_HALFPLANE_HPP_
#define BDISK_HALFPLANE_HPP_

#include <iosfwd>
#include <span>
#include <vector>

#include "bdisk/disk.hpp"

namespace bdisk {

// Windowed half-plane: X on [-T, T] built from two independent Bessel
// processes glued at 0, with a forest thinned by W* > -sqrt(3) X_t.
struct HalfPlaneComplex {
  double window = 0.0;
  GridPath boundary;  // X, start_time = -T
  std::vector<ForestAtom> atoms;
  ContourSequence contour;  // root_index is the boundary entry at time 0
};

struct HalfPlaneOptions {
  double step = 1.0 / 4096;  // coarser grids leave the root neighbourhood unresolved
  double epsilon = 0.01;
  ExcursionOptions excursion;
};

HalfPlaneComplex build_halfplane(double window, const HalfPlaneOptions& options,
                                 RandomStream& rng);
// Assembles a half-plane complex from a given two-sided path and atoms.
HalfPlaneComplex assemble_halfplane(GridPath two_sided, std::vector<ForestAtom> atoms);

// Line intervals truncated to the window coincide with the cyclic convention
// on the contour array, so these are the disk formulas.
inline double d_circ_infty(const HalfPlaneComplex& h, EntryIndex u, EntryIndex v) {
  return d_circ(h.contour, u, v);
}
MetricApprox metric_infty(const HalfPlaneComplex& h, std::span<const EntryIndex> points,
                          const MetricOptions& options = {});

// inf of labels over contour entries attached outside [-eta, eta]
// (+infinity when there are none).
double omega_eta(const HalfPlaneComplex& h, double eta);

// Metric using only the sub-contour attached inside [-eta, eta]. Every point
// must satisfy |position| <= eta.
MetricApprox truncated_metric(const HalfPlaneComplex& h, double eta,
                              std::span<const EntryIndex> points,
                              const MetricOptions& options = {});

// Same layout as write_complex plus a window line after the version tag.
void write_halfplane(std::ostream& os, const HalfPlaneComplex& h);

}  // namespace bdisk

#endif  // BDISK_HALFPLANE_HPP_
