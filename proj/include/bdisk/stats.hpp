#ifndef BDISK_STATS_HPP_
#define BDISK_STATS_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace bdisk {

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;
};

MeanEstimate mean_estimate(const std::vector<double>& xs);
// Bernoulli proportion with the plug-in standard error sqrt(p (1 - p) / n).
MeanEstimate proportion_estimate(std::size_t successes, std::size_t trials);

struct KsResult {
  double statistic = 0.0;  // sup distance between the distribution functions
  double p_value = 1.0;
};

// Asymptotic Kolmogorov tail P(K > lambda).
double kolmogorov_sf(double lambda);

KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = intercept + slope * x. Needs two distinct x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double quantile(std::vector<double> xs, double q);

}  // namespace bdisk

#endif  // BDISK_STATS_HPP_
