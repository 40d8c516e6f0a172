// Reference implementations for tests. Nothing here calls into the library
// beyond plain data access.
#ifndef BDISK_TEST_ORACLES_HPP_
#define BDISK_TEST_ORACLES_HPP_

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

// P(|G| <= x) for a standard Gaussian in R^d scaled by sqrt(variance).
inline double chi_norm_cdf(int d, double x, double variance) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(0.5 * d, 0.5 * x * x / variance);
}

inline double chi_norm_sf(int d, double x, double variance) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * d, 0.5 * x * x / variance);
}

// Linear scan over the cyclic range u..v of a label array.
template <typename Vec>
double cyclic_min(const Vec& labels, long u, long v) {
  const long n = static_cast<long>(labels.size());
  double m = std::numeric_limits<double>::infinity();
  for (long i = u;; i = (i + 1) % n) {
    m = std::min(m, static_cast<double>(labels[i]));
    if (i == v) break;
  }
  return m;
}

template <typename Vec>
double d_circ(const Vec& labels, long u, long v) {
  const double a = cyclic_min(labels, u, v);
  const double b = cyclic_min(labels, v, u);
  return labels[u] + labels[v] - 2.0 * std::max(a, b);
}

template <typename F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Plain Box-Muller on std::mt19937_64 style engines.
template <typename Engine>
double gaussian(Engine& eng) {
  const double u1 = (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace oracle

#endif  // BDISK_TEST_ORACLES_HPP_
