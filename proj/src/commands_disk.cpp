#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

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
std::string str(std::size_t x) { return std::to_string(x); }

DiskParams disk_params(const RunConfig& config, const std::string& s) {
  DiskParams dp;
  dp.bridge_step = config.get_double(s, "bridge_step");
  dp.contour_step = config.get_double(s, "contour_step");
  dp.epsilon = config.get_double(s, "epsilon");
  const long long min_points = config.get_int(s, "min_points");
  if (min_points < 2) throw ParameterError(s + ".min_points must be >= 2");
  dp.excursion.min_points = static_cast<int>(min_points);
  if (!(dp.bridge_step > 0.0 && dp.bridge_step <= 0.5) || !(dp.contour_step >= dp.bridge_step) ||
      !(dp.epsilon > 0.0)) {
    throw ParameterError(s + ": need 0 < bridge_step <= contour_step and epsilon > 0");
  }
  return dp;
}

std::uint64_t name_hash(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

RandomStream replica_stream(const RunConfig& config, const std::string& command,
                            std::size_t replica) {
  return RandomStream(config.seed, replica).substream(name_hash(command));
}

CommandOutput cmd_reroot_test(const RunConfig& config) {
  const std::string s = "reroot-test";
  const std::size_t replicas = config.replicas_for(s);
  const std::vector<double> shifts = config.get_doubles(s, "shifts");
  for (double u : shifts) {
    if (!(u > 0.0 && u < 1.0)) throw ParameterError(s + ".shifts must lie in (0, 1)");
  }
  const double radius = config.get_double(s, "radius");
  const double delta = config.get_double(s, "delta");
  const double alpha = config.get_double(s, "alpha");
  if (!(radius > 0.0) || !(delta > 0.0 && delta < 1.0) || !(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError(s + ": need radius > 0, delta in (0, 1), alpha in (0, 1)");
  }
  const DiskParams dp = disk_params(config, s);
  const long long tree_block = config.get_int(s, "tree_block");
  if (tree_block < 1) throw ParameterError(s + ".tree_block must be >= 1");

  // Column 0 is the unshifted boundary, then one column per shift.
  const std::size_t cols = shifts.size() + 1;
  std::vector<std::vector<double>> ball(replicas), dproxy(replicas), corrupted(replicas);
  std::vector<std::size_t> contour_size(replicas);
  parallel_for(replicas, config.threads, [&](std::size_t i) {
    RandomStream rng = replica_stream(config, s, i);
    const DiskComplex complex = sample_disk_complex(dp, rng);
    contour_size[i] = static_cast<std::size_t>(complex.contour.size());
    for (std::size_t j = 0; j < cols; ++j) {
      const RerootedBoundary rb(complex, j == 0 ? 0.0 : shifts[j - 1],
                                static_cast<int>(tree_block));
      ball[i].push_back(rb.ball_volume(radius));
      dproxy[i].push_back(rb.distance(0.0, delta));
      // Corrupted reroot: keep the labels measured from the original root.
      corrupted[i].push_back(complex.contour.labels[rb.entry_at(delta)]);
    }
  });

  auto column = [&](const std::vector<std::vector<double>>& table, std::size_t j) {
    std::vector<double> out(replicas);
    for (std::size_t i = 0; i < replicas; ++i) out[i] = table[i][j];
    return out;
  };
  const double tests = 2.0 * static_cast<double>(shifts.size());
  const MeanEstimate size = mean_estimate(std::vector<double>(contour_size.begin(), contour_size.end()));

  CommandOutput out;
  out.command = s;
  bool invariance_ok = true, control_ok = true;
  std::string invariance_detail, control_detail;
  const std::vector<std::pair<std::string, const std::vector<std::vector<double>>*>> stats = {
      {"ball_volume", &ball}, {"d_proxy", &dproxy}};
  for (const auto& [name, table] : stats) {
    const std::vector<double> base = column(*table, 0);
    const MeanEstimate m0 = mean_estimate(base);
    out.records.push_back({"reroot_mean", {{"statistic", name}, {"u", "0"}}, config.seed, m0.mean,
                           m0.standard_error, {}});
    for (std::size_t j = 1; j < cols; ++j) {
      const std::vector<double> shifted = column(*table, j);
      const KsResult ks = ks_two_sample(base, shifted);
      const double adjusted = std::min(1.0, ks.p_value * tests);
      const MeanEstimate m = mean_estimate(shifted);
      const std::string u = str(shifts[j - 1]);
      out.records.push_back({"reroot_ks", {{"statistic", name}, {"u", u}}, config.seed, ks.p_value,
                             0.0,
                             {{"ks_distance", str(ks.statistic)}, {"adjusted_p", str(adjusted)},
                              {"replicas", str(replicas)}}});
      out.records.push_back({"reroot_mean", {{"statistic", name}, {"u", u}}, config.seed, m.mean,
                             m.standard_error, {}});
      if (adjusted < alpha) {
        invariance_ok = false;
        invariance_detail += " " + name + "@" + u;
      }
    }
  }
  const std::vector<double> base = column(dproxy, 0);
  for (std::size_t j = 1; j < cols; ++j) {
    const KsResult ks = ks_two_sample(base, column(corrupted, j));
    const double adjusted = std::min(1.0, ks.p_value * static_cast<double>(shifts.size()));
    const std::string u = str(shifts[j - 1]);
    out.records.push_back({"reroot_negative_control", {{"statistic", "d_proxy"}, {"u", u}},
                           config.seed, ks.p_value, 0.0,
                           {{"ks_distance", str(ks.statistic)}, {"adjusted_p", str(adjusted)}}});
    if (!(adjusted < alpha)) {
      control_ok = false;
      control_detail += " u=" + u;
    }
  }
  out.records.push_back({"contour_size", {}, config.seed, size.mean, size.standard_error, {}});
  out.checks.push_back({"invariance", invariance_ok,
                        invariance_ok ? "no adjusted KS p-value below alpha"
                                      : "rejected:" + invariance_detail});
  out.checks.push_back({"negative_control", control_ok,
                        control_ok ? "corrupted reroot rejected at every shift"
                                   : "corruption not detected at" + control_detail});
  return out;
}

CommandOutput cmd_estimate_kappa(const RunConfig& config) {
  const std::string s = "estimate-kappa";
  const std::size_t replicas = config.replicas_for(s);
  const std::vector<double> epsilons = config.get_doubles(s, "epsilons");
  const long long p_max_ll = config.get_int(s, "p_max");
  if (p_max_ll < 1 || p_max_ll > 12) throw ParameterError(s + ".p_max must lie in [1, 12]");
  const int p_max = static_cast<int>(p_max_ll);
  std::vector<int> stages;
  for (double eps : epsilons) {
    const int q = static_cast<int>(std::lround(-std::log2(eps)));
    if (!(eps > 0.0) || std::ldexp(1.0, -q) != eps || q < 0 || q > p_max) {
      throw ParameterError(s + ".epsilons must be powers 2^-q with 0 <= q <= p_max");
    }
    stages.push_back(q);
  }
  const long long extra = config.get_int(s, "extra_points");
  const long long cap = config.get_int(s, "point_cap");
  if (extra < 0 || cap < 2) throw ParameterError(s + ": extra_points >= 0 and point_cap >= 2");
  const std::size_t n_points = (std::size_t(1) << p_max) + 1 + static_cast<std::size_t>(extra);
  if (n_points > static_cast<std::size_t>(cap)) {
    throw ResourceError(s + ": metric graph of " + str(n_points) + " points exceeds point_cap " +
                        std::to_string(cap) + "; lower p_max or extra_points");
  }
  const Gauge<double> gauge(config.get_double(s, "gauge_clamp"));
  const DiskParams dp = disk_params(config, s);
  MetricOptions mopt;
  mopt.point_cap = static_cast<std::size_t>(cap);
  const std::size_t boundary_points = (std::size_t(1) << p_max) + 1;

  std::vector<std::vector<double>> proxies(replicas);
  parallel_for(replicas, config.threads, [&](std::size_t i) {
    RandomStream rng = replica_stream(config, s, i);
    const DiskComplex complex = sample_disk_complex(dp, rng);
    const ContourSequence& c = complex.contour;
    const RerootedBoundary rb(complex, 0.0);
    std::vector<EntryIndex> points;
    for (std::size_t j = 0; j + 1 < boundary_points; ++j) {
      points.push_back(rb.entry_at(std::ldexp(double(j), -p_max)));
    }
    points.push_back(c.boundary.back());
    RandomStream pick = rng.substream(1);
    for (long long j = 0; j < extra; ++j) {
      const auto e = static_cast<EntryIndex>(pick.uniform() * static_cast<double>(c.size()));
      points.push_back(std::min<EntryIndex>(e, c.size() - 1));
    }
    const MetricApprox metric = metric_shortest_path(c, points, mopt);
    // Diameter of a dyadic interval: max distance among its grid points.
    std::map<std::pair<int, long long>, double> cache;
    const DiameterFn diam = [&](const DyadicInterval& I) {
      const auto key = std::make_pair(I.level, I.index);
      if (const auto it = cache.find(key); it != cache.end()) return it->second;
      const long long width = 1LL << (p_max - I.level);
      const auto lo = static_cast<Eigen::Index>(I.index * width);
      const auto len = static_cast<Eigen::Index>(width + 1);
      const double d = metric.dist.block(lo, lo, len, len).maxCoeff();
      cache.emplace(key, d);
      return d;
    };
    for (std::size_t j = 0; j < epsilons.size(); ++j) {
      proxies[i].push_back(dyadic_cover_infimum(diam, gauge, stages[j], p_max, 0.0, epsilons[j]));
    }
  });

  const KappaSeries series = kappa_estimate(proxies, epsilons);
  CommandOutput out;
  out.command = s;
  const double factor = config.get_double(s, "max_ratio_factor");
  bool positive = true, guard = true;
  std::string guard_detail;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < replicas; ++i) {
    for (std::size_t j = 0; j < epsilons.size(); ++j) {
      const double r = series.ratios[i][j];
      positive = positive && std::isfinite(r) && r > 0.0;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      out.records.push_back({"kappa_ratio", {{"replica", str(i)}, {"eps", str(epsilons[j])}},
                             config.seed, r, 0.0, {{"p_max", std::to_string(p_max)}}});
      if (j > 0) {
        const double a = series.ratios[i][j - 1];
        if (!(r <= factor * a && a <= factor * r)) {
          guard = false;
          guard_detail += " replica " + str(i) + " eps " + str(epsilons[j]);
        }
      }
    }
  }
  for (std::size_t j = 0; j < epsilons.size(); ++j) {
    out.records.push_back({"kappa_summary", {{"eps", str(epsilons[j])}}, config.seed,
                           series.mean[j], series.standard_error[j],
                           {{"min", str(series.min[j])}, {"max", str(series.max[j])},
                            {"spread", str(series.spread[j])}, {"replicas", str(replicas)},
                            {"p_max", std::to_string(p_max)}}});
  }
  out.records.push_back({"kappa_bracket", {}, config.seed, 0.5 * (lo + hi), 0.0,
                         {{"min", str(lo)}, {"max", str(hi)}}});
  out.checks.push_back({"ratios_positive", positive, "every ratio positive and finite"});
  out.checks.push_back({"ratio_guard", guard,
                        guard ? "consecutive eps ratios within the factor" : "outside at" + guard_detail});
  return out;
}

CommandOutput cmd_build_disk(const RunConfig& config) {
  const std::string s = "build-disk";
  const std::size_t replicas = config.replicas_for(s);
  DiskParams dp = disk_params(config, s);
  dp.excursion.step = config.get_double(s, "excursion_step");
  const long long max_points = config.get_int(s, "max_points");
  if (max_points < dp.excursion.min_points) {
    throw ParameterError(s + ".max_points must be >= min_points");
  }
  dp.excursion.max_points = static_cast<int>(max_points);

  std::vector<DiskComplex> kept(1);
  std::vector<ExperimentRecord> rows(replicas);
  std::vector<char> labels_ok(replicas, 1), root_ok(replicas, 1);
  parallel_for(replicas, config.threads, [&](std::size_t i) {
    RandomStream rng = replica_stream(config, s, i);
    DiskComplex complex = sample_disk_complex(dp, rng);
    const ContourSequence& c = complex.contour;
    labels_ok[i] = c.labels.minCoeff() >= 0.0;
    root_ok[i] = c.labels[c.root_index] == 0.0;
    rows[i] = {"disk_summary",
               {{"replica", str(i)}, {"epsilon", str(dp.epsilon)}},
               config.seed,
               static_cast<double>(complex.atoms.size()),
               0.0,
               {{"proposed_atoms", str(complex.proposed_atoms)},
                {"sigma_total", str(complex.sigma_total)},
                {"contour_length", str(static_cast<std::size_t>(c.size()))},
                {"boundary_entries", str(c.boundary.size())},
                {"max_label", str(c.labels.maxCoeff())}}};
    if (i == 0) kept[0] = std::move(complex);
  });

  CommandOutput out;
  out.command = s;
  out.records = std::move(rows);
  std::ostringstream dump;
  write_complex(dump, kept[0]);
  out.files["build-disk.complex"] = dump.str();
  out.checks.push_back({"labels_nonnegative",
                        std::all_of(labels_ok.begin(), labels_ok.end(), [](char b) { return b != 0; }),
                        "every contour label >= 0"});
  out.checks.push_back({"root_label_zero",
                        std::all_of(root_ok.begin(), root_ok.end(), [](char b) { return b != 0; }),
                        "root entry carries label 0"});
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"verify-bessel-bound", "verify-ball-volume",
                                                 "modulus",             "reroot-test",
                                                 "estimate-kappa",      "build-disk"};
  return names;
}

CommandOutput run_command(const std::string& name, const RunConfig& config) {
  if (name == "verify-bessel-bound") return cmd_verify_bessel_bound(config);
  if (name == "verify-ball-volume") return cmd_verify_ball_volume(config);
  if (name == "modulus") return cmd_modulus(config);
  if (name == "reroot-test") return cmd_reroot_test(config);
  if (name == "estimate-kappa") return cmd_estimate_kappa(config);
  if (name == "build-disk") return cmd_build_disk(config);
  throw ParameterError("unknown command '" + name + "'");
}

}  // namespace bdisk
