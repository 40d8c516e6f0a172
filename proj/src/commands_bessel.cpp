#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bdisk/bessel.hpp"
#include "bdisk/commands.hpp"
#include "bdisk/disk.hpp"
#include "bdisk/errors.hpp"
#include "bdisk/gauge.hpp"
#include "bdisk/hausdorff.hpp"
#include "bdisk/parallel.hpp"
#include "bdisk/stats.hpp"

namespace bdisk {

namespace {

std::string str(double x) { return format_number(x); }
std::string str(long long x) { return std::to_string(x); }
std::string str(std::size_t x) { return std::to_string(x); }

int config_int(const RunConfig& config, const std::string& s, const std::string& key, int lo,
               int hi) {
  const long long v = config.get_int(s, key);
  if (v < lo || v > hi) {
    throw ParameterError(s + "." + key + " must lie in [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

RefinementPlan refinement(const RunConfig& config, const std::string& s, int finest_k,
                          double value_scale) {
  RefinementPlan plan;
  plan.floor_level = std::ldexp(1.0, -finest_k);
  plan.resolution = config.get_double(s, "resolution");
  plan.base_intervals = config_int(config, s, "base_intervals", 1, 1 << 20);
  plan.value_scale = value_scale;
  // The finest grid step near level a is a^2 / resolution; the smallest level
  // must span at least ten steps.
  if (!(plan.resolution >= 10.0)) {
    throw ParameterError(s + ": resolution " + str(plan.resolution) +
                         " cannot resolve level 2^-" + std::to_string(finest_k) +
                         " (need 2^-2n >= 10 * step); set resolution >= 10");
  }
  return plan;
}

std::string joined(const std::vector<int>& ns) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ns.size(); ++i) os << (i ? "," : "") << ns[i];
  return os.str();
}

}  // namespace

CommandOutput cmd_verify_bessel_bound(const RunConfig& config) {
  const std::string s = "verify-bessel-bound";
  const std::size_t replicas = config.replicas_for(s);
  const int n_min = config_int(config, s, "n_min", 1, 14);
  const int n_max = config_int(config, s, "n_max", n_min, 14);
  const double gamma = config.get_double(s, "gamma");
  if (!(gamma >= 0.0)) throw ParameterError(s + ".gamma must be >= 0");
  const Gauge<double> gauge(config.get_double(s, "gauge_clamp"));
  if (!gauge.in_domain(std::ldexp(1.0, -n_min))) {
    throw DomainError(s + ": 2^-n_min lies above gauge_clamp");
  }
  const double horizon = config.get_double(s, "horizon_factor") * std::ldexp(1.0, -2 * n_min);
  if (!(horizon > 0.0)) throw ParameterError(s + ".horizon_factor must be > 0");
  const int k_hi = 2 * n_max;
  const RefinementPlan plan = refinement(config, s, k_hi, 1.0);

  std::vector<std::vector<double>> occ(replicas);
  std::vector<double> censored(replicas, 0.0);
  parallel_for(replicas, config.threads, [&](std::size_t i) {
    RandomStream rng = replica_stream(config, s, i);
    const RefinedPath path = sample_refined_bessel_process(5, horizon, plan, rng);
    occ[i] = dyadic_occupations(path, n_min, k_hi, 1.0, std::numeric_limits<double>::infinity());
    // Given X_H = x > a, the path returns to a with probability (a / x)^3.
    const double a = std::ldexp(1.0, -n_min);
    const double x = path.values.back();
    censored[i] = x <= a ? 1.0 : std::pow(a / x, 3);
  });

  CommandOutput out;
  out.command = s;
  const MeanEstimate censor = mean_estimate(censored);
  std::map<std::string, std::string> meta = {{"horizon", str(horizon)},
                                             {"floor_level", str(plan.floor_level)},
                                             {"resolution", str(plan.resolution)},
                                             {"replicas", str(replicas)},
                                             {"censored_fraction", str(censor.mean)}};

  std::vector<int> ns;
  std::vector<double> p;
  bool nested_ok = true;
  std::string nested_detail;
  for (int n = n_min; n <= n_max; ++n) {
    std::size_t previous = replicas;
    for (int m = n; m <= 2 * n; ++m) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < replicas; ++i) {
        hits += bad_event_from_occupations(occ[i], n_min, n, m, gamma, gauge) ? 1 : 0;
      }
      const MeanEstimate est = proportion_estimate(hits, replicas);
      ExperimentRecord r{m == 2 * n ? "bessel_bound" : "bessel_bound_nested",
                         {{"n", str(static_cast<long long>(n))},
                          {"m", str(static_cast<long long>(m))},
                          {"gamma", str(gamma)}},
                         config.seed, est.mean, est.standard_error, meta};
      r.metadata["successes"] = str(hits);
      out.records.push_back(r);
      if (m == 2 * n) {
        ns.push_back(n);
        p.push_back(est.mean);
      }
      if (hits > previous) {
        nested_ok = false;
        nested_detail += " n=" + std::to_string(n) + " m=" + std::to_string(m);
      }
      previous = hits;
    }
  }
  out.records.push_back({"censoring", {{"level", str(std::ldexp(1.0, -n_min))}}, config.seed,
                         censor.mean, censor.standard_error, meta});

  out.checks.push_back({"censoring", censor.mean < config.get_double(s, "max_censored"),
                        "P(last passage at 2^-n_min after the horizon) = " + str(censor.mean)});
  out.checks.push_back({"nested_in_m", nested_ok,
                        nested_ok ? "P over [n, m] nonincreasing in m" : "violations at" + nested_detail});

  std::vector<int> zero_ns;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    if (!(p[j] > 0.0)) zero_ns.push_back(ns[j]);
  }
  out.checks.push_back({"positive", zero_ns.empty(),
                        zero_ns.empty() ? "all p_n > 0" : "p_n = 0 at n = " + joined(zero_ns)});
  bool decreasing = true;
  for (std::size_t j = 1; j < p.size(); ++j) decreasing = decreasing && p[j] < p[j - 1];
  out.checks.push_back({"decreasing", decreasing, "p_n strictly decreasing in n"});

  if (zero_ns.empty() && ns.size() >= 2) {
    std::vector<double> x, y;
    for (std::size_t j = 0; j < ns.size(); ++j) {
      x.push_back(std::sqrt(static_cast<double>(ns[j])));
      y.push_back(std::log(p[j]));
    }
    const LinearFit fit = linear_fit(x, y);
    const double alpha = -fit.slope;
    ExperimentRecord r{"bessel_bound_fit", {{"gamma", str(gamma)}}, config.seed, alpha, 0.0, meta};
    r.metadata["intercept"] = str(fit.intercept);
    r.metadata["r_squared"] = str(fit.r_squared);
    out.records.push_back(r);
    const bool ok = alpha > 0.0 && fit.r_squared >= config.get_double(s, "min_fit_r2");
    out.checks.push_back(
        {"fit", ok, "alpha = " + str(alpha) + ", R^2 = " + str(fit.r_squared)});
  } else {
    out.checks.push_back({"fit", false, "log p_n is undefined where p_n = 0; no fit possible"});
  }
  return out;
}

CommandOutput cmd_verify_ball_volume(const RunConfig& config) {
  const std::string s = "verify-ball-volume";
  const std::size_t replicas = config.replicas_for(s);
  const int n_min = config_int(config, s, "n_min", 1, 14);
  const int n_max = config_int(config, s, "n_max", n_min, 14);
  const double gamma = config.get_double(s, "gamma");
  if (!(gamma >= 0.0)) throw ParameterError(s + ".gamma must be >= 0");
  const Gauge<double> gauge(config.get_double(s, "gauge_clamp"));
  if (!gauge.in_domain(std::ldexp(1.0, -n_min))) {
    throw DomainError(s + ": 2^-n_min lies above gauge_clamp");
  }
  const int k_hi = 2 * n_max;
  const double sqrt3 = std::sqrt(3.0);
  const RefinementPlan plan = refinement(config, s, k_hi, sqrt3);
  const double threshold = gamma / 3.0;
  const double inf = std::numeric_limits<double>::infinity();

  struct Sample {
    std::vector<double> bridge_full, bridge_half, process_half;
    double weight = 0.0;
  };
  std::vector<Sample> samples(replicas);
  parallel_for(replicas, config.threads, [&](std::size_t i) {
    RandomStream rng = replica_stream(config, s, i);
    const RefinedPath bridge = sample_refined_bessel_bridge(5, 1.0, plan, rng);
    const RefinedPath process = sample_refined_bessel_process(5, 0.5, plan, rng);
    Sample& out = samples[i];
    out.bridge_full = dyadic_occupations(bridge, n_min, k_hi, sqrt3, inf);
    out.bridge_half = dyadic_occupations(bridge, n_min, k_hi, sqrt3, 0.5);
    out.process_half = dyadic_occupations(process, n_min, k_hi, sqrt3, 0.5);
    const double x = process.values.back();
    out.weight = bessel_half_time_densities(x).f;
  });

  CommandOutput out;
  out.command = s;
  std::size_t restriction_violations = 0;
  for (const auto& smp : samples) {
    for (std::size_t k = 0; k < smp.bridge_full.size(); ++k) {
      if (smp.bridge_full[k] < smp.bridge_half[k]) ++restriction_violations;
    }
  }
  const std::map<std::string, std::string> meta = {{"floor_level", str(plan.floor_level)},
                                                   {"resolution", str(plan.resolution)},
                                                   {"replicas", str(replicas)}};
  const double c = 4.0 * std::numbers::sqrt2;
  const double joint_se = config.get_double(s, "joint_se");
  bool abs_ok = true, weighted_ok = true, event_restriction_ok = true;
  std::string abs_detail, weighted_detail;
  for (int n = n_min; n <= n_max; ++n) {
    std::size_t full = 0, half = 0, proc = 0;
    std::vector<double> weighted(replicas);
    for (std::size_t i = 0; i < replicas; ++i) {
      const Sample& smp = samples[i];
      const bool ef = bad_event_from_occupations(smp.bridge_full, n_min, n, 2 * n, threshold, gauge);
      const bool eh = bad_event_from_occupations(smp.bridge_half, n_min, n, 2 * n, threshold, gauge);
      const bool ep = bad_event_from_occupations(smp.process_half, n_min, n, 2 * n, threshold, gauge);
      full += ef;
      half += eh;
      proc += ep;
      if (ef && !eh) event_restriction_ok = false;
      weighted[i] = ep ? smp.weight : 0.0;
    }
    const MeanEstimate pf = proportion_estimate(full, replicas);
    const MeanEstimate ph = proportion_estimate(half, replicas);
    const MeanEstimate pp = proportion_estimate(proc, replicas);
    const MeanEstimate pw = mean_estimate(weighted);
    const std::map<std::string, std::string> params = {{"n", str(static_cast<long long>(n))},
                                                       {"gamma", str(gamma)}};
    out.records.push_back({"ball_volume_bridge", params, config.seed, pf.mean, pf.standard_error, meta});
    out.records.push_back({"ball_volume_bridge_half", params, config.seed, ph.mean, ph.standard_error, meta});
    out.records.push_back({"ball_volume_process_half", params, config.seed, pp.mean, pp.standard_error, meta});
    out.records.push_back({"ball_volume_weighted", params, config.seed, pw.mean, pw.standard_error, meta});

    const double se = std::hypot(pf.standard_error, c * pp.standard_error);
    const double margin = c * pp.mean + joint_se * se - pf.mean;
    out.records.push_back({"abs_continuity_margin", params, config.seed, margin, se, meta});
    if (margin < 0.0) {
      abs_ok = false;
      abs_detail += " n=" + std::to_string(n);
    }
    const double wse = std::hypot(ph.standard_error, pw.standard_error);
    if (std::abs(pw.mean - ph.mean) > joint_se * wse) {
      weighted_ok = false;
      weighted_detail += " n=" + std::to_string(n);
    }
  }
  out.checks.push_back({"abs_continuity", abs_ok,
                        abs_ok ? "bridge p_n <= 4 sqrt(2) process p_n + joint slack"
                               : "violated at" + abs_detail});
  out.checks.push_back({"restriction", restriction_violations == 0 && event_restriction_ok,
                        "occupation over [0,1] >= over [0,1/2]: " + str(restriction_violations) +
                            " violations"});
  out.checks.push_back({"weighted_identity", weighted_ok,
                        weighted_ok ? "E[f(X_1/2) 1_A(X)] matches the bridge [0,1/2] estimate"
                                    : "mismatch at" + weighted_detail});
  return out;
}

CommandOutput cmd_modulus(const RunConfig& config) {
  const std::string s = "modulus";
  const std::size_t replicas = config.replicas_for(s);
  const int n_min = config_int(config, s, "n_min", 1, 20);
  const int n_max = config_int(config, s, "n_max", n_min, 20);
  const int bound_n_max = config_int(config, s, "bound_n_max", n_max, 200);
  const double mult = config.get_double(s, "se_multiplier");
  const double sqrt3 = std::sqrt(3.0);

  // (a) Tail of sqrt(3) R at dyadic times against the exact chi(5) law.
  const double step = std::ldexp(1.0, -n_max);
  std::vector<std::vector<char>> exceed(replicas);
  parallel_for(replicas, config.threads, [&](std::size_t i) {
    RandomStream rng = replica_stream(config, s, i);
    const GridPath bridge = sample_bessel_bridge(5, 1.0, step, rng);
    auto& row = exceed[i];
    for (int n = n_min; n <= n_max; ++n) {
      const double x = n * std::pow(2.0, -0.5 * n);
      row.push_back(sqrt3 * bridge.values[Eigen::Index(1) << (n_max - n)] > x ? 1 : 0);
    }
  });
  auto exact_tail = [](int n) {
    const double t = std::ldexp(1.0, -n);
    return chi_square5_sf(double(n) * n / (3.0 * (1.0 - t)));
  };
  double c_tilde = 0.0;
  for (int n = n_min; n <= bound_n_max; ++n) c_tilde = std::max(c_tilde, exact_tail(n) * std::exp(n));

  CommandOutput out;
  out.command = s;
  out.records.push_back({"modulus_c_tilde", {{"n_range", std::to_string(n_min) + ".." + std::to_string(bound_n_max)}},
                         config.seed, c_tilde, 0.0, {}});
  bool match_ok = true, bound_ok = true;
  std::string match_detail, bound_detail;
  for (int n = n_min; n <= n_max; ++n) {
    std::size_t hits = 0;
    for (const auto& row : exceed) hits += row[static_cast<std::size_t>(n - n_min)];
    const MeanEstimate est = proportion_estimate(hits, replicas);
    const double q = exact_tail(n);
    const double se_exact = std::sqrt(q * (1.0 - q) / static_cast<double>(replicas));
    const double bound = c_tilde * std::exp(-n);
    ExperimentRecord r{"modulus_tail",
                       {{"n", str(static_cast<long long>(n))},
                        {"threshold", str(n * std::pow(2.0, -0.5 * n))}},
                       config.seed, est.mean, est.standard_error,
                       {{"exact", str(q)}, {"exact_se", str(se_exact)}, {"bound", str(bound)},
                        {"replicas", str(replicas)}}};
    out.records.push_back(r);
    if (std::abs(est.mean - q) > mult * se_exact) {
      match_ok = false;
      match_detail += " n=" + std::to_string(n);
    }
    if (est.mean > bound + mult * est.standard_error) {
      bound_ok = false;
      bound_detail += " n=" + std::to_string(n);
    }
  }
  out.checks.push_back({"tail_matches_exact", match_ok,
                        match_ok ? "MC tail within the stderr band of the chi(5) tail"
                                 : "outside band at" + match_detail});
  out.checks.push_back({"tail_bound", bound_ok,
                        "MC tail <= c~ e^-n with c~ = " + str(c_tilde) + bound_detail});

  // (b) Sup over dyadic pairs of D-proxy / envelope, on full complexes.
  const std::size_t complexes = static_cast<std::size_t>(config_int(config, s, "complexes", 1, 1 << 20));
  const int level = config_int(config, s, "ratio_level", 1, 11);
  const auto extra = static_cast<std::size_t>(config_int(config, s, "extra_points", 0, 1 << 16));
  DiskParams dp;
  dp.bridge_step = config.get_double(s, "bridge_step");
  dp.contour_step = config.get_double(s, "contour_step");
  dp.epsilon = config.get_double(s, "epsilon");
  dp.excursion.min_points = config_int(config, s, "min_points", 2, 1 << 20);
  std::vector<double> sup_ratio(complexes), sup_ratio_shifted(complexes);
  parallel_for(complexes, config.threads, [&](std::size_t i) {
    RandomStream rng = replica_stream(config, s + "/complex", i);
    const DiskComplex complex = sample_disk_complex(dp, rng);
    const ContourSequence& c = complex.contour;
    for (int pass = 0; pass < 2; ++pass) {
      const RerootedBoundary rb(complex, pass == 0 ? 0.0 : 0.5);
      const std::size_t count = (std::size_t(1) << level) + 1;
      std::vector<EntryIndex> points;
      for (std::size_t j = 0; j < count; ++j) {
        points.push_back(rb.entry_at(std::ldexp(double(j), -level)));
      }
      // Index 2^level maps to time 1, i.e. back to the start of the loop.
      RandomStream pick = rng.substream(static_cast<std::uint64_t>(pass));
      for (std::size_t j = 0; j < extra && c.size() > 0; ++j) {
        const auto e = static_cast<EntryIndex>(pick.uniform() * static_cast<double>(c.size()));
        points.push_back(std::min<EntryIndex>(e, c.size() - 1));
      }
      const MetricApprox metric = metric_shortest_path(c, points);
      double sup = 0.0;
      for (int n = 1; n <= level; ++n) {
        const std::size_t stride = std::size_t(1) << (level - n);
        const double env = modulus_envelope(std::ldexp(1.0, -n));
        for (std::size_t j = stride; j < count; j += stride) {
          const double d = metric.dist(static_cast<Eigen::Index>(j - stride), static_cast<Eigen::Index>(j));
          sup = std::max(sup, d / env);
        }
      }
      (pass == 0 ? sup_ratio : sup_ratio_shifted)[i] = sup;
    }
  });
  bool finite = true;
  for (std::size_t i = 0; i < complexes; ++i) {
    finite = finite && std::isfinite(sup_ratio[i]) && sup_ratio[i] > 0.0;
    out.records.push_back({"modulus_ratio", {{"complex", str(i)}, {"level", str(static_cast<long long>(level))}},
                           config.seed, sup_ratio[i], 0.0, {{"shifted_0.5", str(sup_ratio_shifted[i])}}});
  }
  const MeanEstimate m = mean_estimate(sup_ratio);
  const KsResult ks = ks_two_sample(sup_ratio, sup_ratio_shifted);
  out.records.push_back({"modulus_ratio_summary", {{"level", str(static_cast<long long>(level))}},
                         config.seed, m.mean, m.standard_error,
                         {{"median", str(quantile(sup_ratio, 0.5))},
                          {"q90", str(quantile(sup_ratio, 0.9))},
                          {"max", str(*std::max_element(sup_ratio.begin(), sup_ratio.end()))},
                          {"reroot_ks_p", str(ks.p_value)},
                          {"complexes", str(complexes)}}});
  out.checks.push_back({"ratio_finite", finite, "sup ratio finite and positive on every complex"});
  return out;
}

}  // namespace bdisk
