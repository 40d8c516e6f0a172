#ifndef BDISK_RMQ_HPP_
#define BDISK_RMQ_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "bdisk/errors.hpp"

namespace bdisk {

// Static range-minimum table: O(n log n) build, O(1) inclusive queries.
template <typename Scalar>
class SparseTableMin {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SparseTableMin() = default;
  explicit SparseTableMin(const Vector& values) { build(values); }

  void build(const Vector& values) {
    n_ = values.size();
    levels_.clear();
    if (n_ == 0) return;
    levels_.push_back(values);
    for (Eigen::Index width = 1; 2 * width <= n_; width *= 2) {
      const Vector& prev = levels_.back();
      const Eigen::Index count = prev.size() - width;
      Vector next(count);
      next = prev.head(count).cwiseMin(prev.segment(width, count));
      levels_.push_back(std::move(next));
    }
  }

  Eigen::Index size() const { return n_; }

  Scalar min(Eigen::Index lo, Eigen::Index hi) const {
    if (lo < 0 || hi >= n_ || lo > hi) throw ParameterError("SparseTableMin: bad range");
    const auto len = static_cast<std::uint64_t>(hi - lo + 1);
    const int level = std::bit_width(len) - 1;
    const Vector& row = levels_[level];
    return std::min(row[lo], row[hi - (Eigen::Index(1) << level) + 1]);
  }

 private:
  Eigen::Index n_ = 0;
  std::vector<Vector> levels_;
};

}  // namespace bdisk

#endif  // BDISK_RMQ_HPP_
