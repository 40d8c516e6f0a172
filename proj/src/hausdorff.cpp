#include "bdisk/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdisk/errors.hpp"

namespace bdisk {

double DyadicInterval::lo() const { return std::ldexp(static_cast<double>(index), -level); }
double DyadicInterval::hi() const { return std::ldexp(static_cast<double>(index + 1), -level); }

namespace {

// Index range of level-p dyadic intervals contained in [a, b].
std::pair<long long, long long> contained_range(int p, double a, double b) {
  const double scale = std::ldexp(1.0, p);
  const auto first = static_cast<long long>(std::ceil(a * scale - 1e-9));
  const auto last = static_cast<long long>(std::floor(b * scale + 1e-9)) - 1;
  return {first, last};
}

void check_levels(int p_min, int p_max, double a, double b) {
  if (p_min < 0 || p_max < p_min || p_max > 40) {
    throw ParameterError("dyadic covers: need 0 <= p_min <= p_max <= 40");
  }
  if (!(a < b)) throw ParameterError("dyadic covers: need a < b");
}

double best_cover(const DiameterFn& diam, const Gauge<double>& gauge, DyadicInterval I,
                  int p_max) {
  const double d = diam(I);
  if (I.level == p_max) return gauge(std::min(d, gauge.clamp_point()));
  const double keep = gauge.in_domain(d) ? gauge(d) : std::numeric_limits<double>::infinity();
  const double split = best_cover(diam, gauge, {I.level + 1, 2 * I.index}, p_max) +
                       best_cover(diam, gauge, {I.level + 1, 2 * I.index + 1}, p_max);
  return std::min(keep, split);
}

}  // namespace

std::vector<CoveringEstimate> covering_upper_estimate(const DiameterFn& diam,
                                                      const Gauge<double>& gauge, int p_min,
                                                      int p_max, double a, double b) {
  check_levels(p_min, p_max, a, b);
  std::vector<CoveringEstimate> out;
  for (int p = p_min; p <= p_max; ++p) {
    CoveringEstimate est;
    est.level = p;
    const auto [first, last] = contained_range(p, a, b);
    for (long long i = first; i <= last; ++i) {
      const double d = diam({p, i});
      if (!(d >= 0.0)) throw ParameterError("covering_upper_estimate: negative diameter");
      est.diameters.push_back(d);
      if (!gauge.in_domain(d)) ++est.clamped;
      est.value += gauge(std::min(d, gauge.clamp_point()));
    }
    out.push_back(std::move(est));
  }
  return out;
}

double dyadic_cover_infimum(const DiameterFn& diam, const Gauge<double>& gauge, int p_stage,
                            int p_max, double a, double b) {
  check_levels(p_stage, p_max, a, b);
  const auto [first, last] = contained_range(p_stage, a, b);
  double total = 0.0;
  for (long long i = first; i <= last; ++i) total += best_cover(diam, gauge, {p_stage, i}, p_max);
  return total;
}

DensityRatioSeries density_ratio_series(const std::function<double(double)>& ball_volume,
                                        const Gauge<double>& gauge, int k_min, int k_max) {
  if (k_min < 0 || k_max < k_min) throw ParameterError("density_ratio_series: bad k range");
  DensityRatioSeries out;
  for (int k = k_min; k <= k_max; ++k) {
    const double r = std::ldexp(1.0, -k);
    const double volume = ball_volume(r);
    out.exponents.push_back(k);
    out.radii.push_back(r);
    out.ratios.push_back(volume / gauge(r));
  }
  out.tail_max.resize(out.ratios.size());
  double running = 0.0;
  for (std::size_t i = out.ratios.size(); i-- > 0;) {
    running = std::max(running, out.ratios[i]);
    out.tail_max[i] = running;
  }
  out.running_limsup = running;
  return out;
}

namespace {

void check_event_args(int n, double gamma, double scale, const Gauge<double>& gauge) {
  if (n < 1) throw ParameterError("bad_event_indicator: n must be >= 1");
  if (!(gamma >= 0.0) || !(scale > 0.0)) {
    throw ParameterError("bad_event_indicator: need gamma >= 0 and scale > 0");
  }
  if (!gauge.in_domain(std::ldexp(1.0, -n))) {
    throw DomainError("bad_event_indicator: 2^-n lies above the gauge clamp point");
  }
}

}  // namespace

bool bad_event_indicator(const GridPath& path, int n, double gamma, double scale,
                         const Gauge<double>& gauge) {
  check_event_args(n, gamma, scale, gauge);
  const GridPath scaled_path = scaled(path, scale);
  for (int k = n; k <= 2 * n; ++k) {
    const double level = std::ldexp(1.0, -k);
    if (occupation_time_below(scaled_path, level) > gamma * gauge(level)) return false;
  }
  return true;
}

bool bad_event_indicator(const RefinedPath& path, int n, double gamma, double scale,
                         const Gauge<double>& gauge, double until) {
  check_event_args(n, gamma, scale, gauge);
  for (int k = n; k <= 2 * n; ++k) {
    const double level = std::ldexp(1.0, -k);
    if (occupation_time_below(path, level, scale, until) > gamma * gauge(level)) return false;
  }
  return true;
}

std::vector<double> dyadic_occupations(const RefinedPath& path, int k_lo, int k_hi,
                                       double scale, double until) {
  if (k_lo < 0 || k_hi < k_lo) throw ParameterError("dyadic_occupations: bad k range");
  // One pass: each interval contributes to every level above its left value.
  std::vector<double> out(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double t0 = path.times[i];
    if (t0 >= until) break;
    const double dt = std::min(path.times[i + 1], until) - t0;
    const double v = scale * path.values[i];
    for (int k = k_hi; k >= k_lo; --k) {
      if (v < std::ldexp(1.0, -k)) {
        // Levels 2^-k' for k' <= k are all above v.
        for (int j = k; j >= k_lo; --j) out[static_cast<std::size_t>(j - k_lo)] += dt;
        break;
      }
    }
  }
  return out;
}

bool bad_event_from_occupations(const std::vector<double>& occupations, int k_lo, int n, int m,
                                double gamma, const Gauge<double>& gauge) {
  if (n < k_lo || m < n || m - k_lo >= static_cast<int>(occupations.size())) {
    throw ParameterError("bad_event_from_occupations: k range not covered");
  }
  for (int k = n; k <= m; ++k) {
    const double level = std::ldexp(1.0, -k);
    if (occupations[static_cast<std::size_t>(k - k_lo)] > gamma * gauge(level)) return false;
  }
  return true;
}

KappaSeries kappa_estimate(const std::vector<std::vector<double>>& proxies,
                           const std::vector<double>& epsilons) {
  KappaSeries out;
  out.epsilons = epsilons;
  const std::size_t nr = proxies.size();
  const std::size_t ne = epsilons.size();
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw ParameterError("kappa_estimate: epsilons must be > 0");
  }
  out.ratios.assign(nr, std::vector<double>(ne, 0.0));
  for (std::size_t r = 0; r < nr; ++r) {
    if (proxies[r].size() != ne) throw ParameterError("kappa_estimate: ragged proxies");
    for (std::size_t j = 0; j < ne; ++j) out.ratios[r][j] = proxies[r][j] / epsilons[j];
  }
  for (std::size_t j = 0; j < ne; ++j) {
    double sum = 0.0, sum2 = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t r = 0; r < nr; ++r) {
      const double x = out.ratios[r][j];
      sum += x;
      sum2 += x * x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double n = static_cast<double>(nr);
    const double mean = nr > 0 ? sum / n : 0.0;
    const double var = nr > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
    out.mean.push_back(mean);
    out.spread.push_back(std::sqrt(var));
    out.standard_error.push_back(nr > 0 ? std::sqrt(var / n) : 0.0);
    out.min.push_back(lo);
    out.max.push_back(hi);
  }
  return out;
}

}  // namespace bdisk
