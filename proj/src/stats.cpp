#include "bdisk/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "bdisk/errors.hpp"

namespace bdisk {

MeanEstimate mean_estimate(const std::vector<double>& xs) {
  MeanEstimate out;
  out.count = xs.size();
  if (xs.empty()) return out;
  const Eigen::Map<const Eigen::VectorXd> v(xs.data(), static_cast<Eigen::Index>(xs.size()));
  out.mean = v.mean();
  if (xs.size() > 1) {
    const double var = (v.array() - out.mean).square().sum() / static_cast<double>(xs.size() - 1);
    out.standard_error = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return out;
}

MeanEstimate proportion_estimate(std::size_t successes, std::size_t trials) {
  if (trials == 0 || successes > trials) throw ParameterError("proportion_estimate: bad counts");
  MeanEstimate out;
  out.count = trials;
  out.mean = static_cast<double>(successes) / static_cast<double>(trials);
  out.standard_error = std::sqrt(out.mean * (1.0 - out.mean) / static_cast<double>(trials));
  return out;
}

double kolmogorov_sf(double lambda) {
  // The alternating series is slow there and the tail is 1 to double precision.
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

// Stephens' finite-sample correction of the Kolmogorov statistic.
double corrected_lambda(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return (root + 0.12 + 0.11 / root) * d;
}

}  // namespace

KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw ParameterError("ks_one_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_sf(corrected_lambda(d, n))};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, kolmogorov_sf(corrected_lambda(d, na * nb / (na + nb)))};
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("linear_fit: need >= 2 pairs");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::Map<const Eigen::VectorXd> rhs(y.data(), n);
  if (design.col(1).maxCoeff() == design.col(1).minCoeff()) {
    throw ParameterError("linear_fit: x values must not all coincide");
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(rhs);
  LinearFit out;
  out.intercept = beta[0];
  out.slope = beta[1];
  const double ss_res = (rhs - design * beta).squaredNorm();
  const double ss_tot = (rhs.array() - rhs.mean()).square().sum();
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw ParameterError("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("quantile: q must lie in [0, 1]");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

}  // namespace bdisk
