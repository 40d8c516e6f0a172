#ifndef BDISK_GAUGE_HPP_
#define BDISK_GAUGE_HPP_

#include <cmath>
#include <numbers>
#include <string>

#include "bdisk/errors.hpp"

namespace bdisk {

// h(s) = s^2 log log(1/s) on [0, clamp_point], extended by h(0) = 0.
// Calls above the clamp raise DomainError instead of extending the formula.
template <typename Scalar = double>
class Gauge {
 public:
  static Scalar default_clamp() { return std::exp(Scalar(-2)); }

  explicit Gauge(Scalar clamp_point = default_clamp()) : clamp_(clamp_point) {
    if (!(clamp_ > Scalar(0)) || !(clamp_ < std::exp(Scalar(-1)))) {
      throw ParameterError("Gauge: clamp_point must lie in (0, 1/e)");
    }
  }

  Scalar clamp_point() const { return clamp_; }
  bool in_domain(Scalar s) const { return s >= Scalar(0) && s <= clamp_; }

  Scalar operator()(Scalar s) const {
    if (!in_domain(s)) {
      throw DomainError("gauge h: argument " + std::to_string(double(s)) +
                        " outside [0, " + std::to_string(double(clamp_)) + "]");
    }
    if (s == Scalar(0)) return Scalar(0);
    return s * s * std::log(std::log(Scalar(1) / s));
  }

  // h(2r) / h(r); both arguments must be in the domain.
  Scalar doubling_ratio(Scalar r) const { return (*this)(Scalar(2) * r) / (*this)(r); }

 private:
  Scalar clamp_;
};

inline double gauge_h(double s) { return Gauge<double>()(s); }

}  // namespace bdisk

#endif  // BDISK_GAUGE_HPP_
