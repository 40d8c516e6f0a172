#ifndef BDISK_GRID_PATH_HPP_
#define BDISK_GRID_PATH_HPP_

#include <Eigen/Core>
#include <cmath>
#include <iosfwd>
#include <string>

#include "bdisk/errors.hpp"

namespace bdisk {

// A real function sampled on the uniform grid start_time + i * step.
template <typename Scalar>
struct BasicGridPath {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar start_time = Scalar(0);
  Scalar step = Scalar(1);
  Vector values;

  Eigen::Index size() const { return values.size(); }
  Scalar time(Eigen::Index i) const { return start_time + step * Scalar(i); }
  Scalar end_time() const { return time(values.size() - 1); }
  Scalar span() const { return step * Scalar(values.size() - 1); }

  // Index of the grid point at or left of t, clamped to the grid.
  Eigen::Index index_at(Scalar t) const {
    const Scalar x = std::floor((t - start_time) / step + Scalar(1e-9));
    if (x <= Scalar(0)) return 0;
    const auto i = static_cast<Eigen::Index>(x);
    return i >= values.size() ? values.size() - 1 : i;
  }
  // Left-continuous step interpolation.
  Scalar value_at(Scalar t) const { return values[index_at(t)]; }

  void validate() const {
    if (!(step > Scalar(0))) throw ParameterError("GridPath: step must be > 0");
    if (values.size() < 2) throw ParameterError("GridPath: needs at least 2 values");
    if (!values.allFinite()) throw ParameterError("GridPath: non-finite value");
  }
};

using GridPath = BasicGridPath<double>;

template <typename Scalar>
BasicGridPath<Scalar> scaled(const BasicGridPath<Scalar>& path, Scalar factor) {
  BasicGridPath<Scalar> out = path;
  out.values *= factor;
  return out;
}

// CSV: commented header with the grid description, then "time,value" rows.
void write_grid_path_csv(std::ostream& os, const GridPath& path,
                         const std::string& name = "path");

}  // namespace bdisk

#endif  // BDISK_GRID_PATH_HPP_
