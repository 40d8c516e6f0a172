#include "bdisk/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bdisk/errors.hpp"

namespace bdisk {

namespace {

using Section = RunConfig::SectionSpec;

const std::vector<Section>& specs() {
  static const std::vector<Section> table = {
      {"verify-bessel-bound",
       {{"replicas", "100000", "process replicas"},
        {"n_min", "2", "smallest n"},
        {"n_max", "6", "largest n (levels down to 2^-2n_max are resolved)"},
        {"gamma", "0.01", "occupation threshold factor"},
        {"gauge_clamp", "0.3", "upper end of the gauge domain (n = 2 needs h(1/4))"},
        {"horizon_factor", "20", "horizon = horizon_factor * 4^-n_min"},
        {"resolution", "400", "refinement: intervals near level a are <= a^2 / resolution"},
        {"base_intervals", "64", "coarse grid size before refinement"},
        {"max_censored", "0.01", "allowed fraction of paths still below 2^-n_min at the horizon"},
        {"min_fit_r2", "0.9", "required R^2 of the log p_n ~ -alpha sqrt(n) fit"}}},
      {"verify-ball-volume",
       {{"replicas", "20000", "bridge and process replicas"},
        {"n_min", "2", "smallest n"},
        {"n_max", "4", "largest n"},
        {"gamma", "0.01", "the events use gamma / 3 * h"},
        {"gauge_clamp", "0.3", "upper end of the gauge domain"},
        {"resolution", "400", "refinement resolution"},
        {"base_intervals", "64", "coarse grid size before refinement"},
        {"joint_se", "3", "slack in joint standard errors for the 4 sqrt(2) comparison"}}},
      {"modulus",
       {{"replicas", "100000", "bridge replicas for the tail check"},
        {"n_min", "3", "smallest n"},
        {"n_max", "7", "largest n"},
        {"bound_n_max", "40", "c~ is the sup over n <= bound_n_max of the exact tail times e^n"},
        {"se_multiplier", "2", "allowed deviation from the exact tail in standard errors"},
        {"complexes", "16", "disk complexes for the ratio statistic"},
        {"ratio_level", "6", "dyadic pairs ((i-1) 2^-n, i 2^-n) for n <= ratio_level"},
        {"epsilon", "0.01", "forest height cutoff"},
        {"bridge_step", "0.000244140625", "bridge grid step"},
        {"contour_step", "0.0009765625", "spacing of boundary contour entries"},
        {"min_points", "32", "minimum grid points per tree"},
        {"extra_points", "256", "tree entries added to the metric point set"}}},
      {"reroot-test",
       {{"replicas", "1000", "disk complexes"},
        {"shifts", "0.25,0.37,0.5", "reroot shifts u"},
        {"radius", "0.3", "ball-volume radius r"},
        {"delta", "0.01", "D-proxy gap: D(u, u + delta)"},
        {"epsilon", "0.002", "forest height cutoff"},
        {"bridge_step", "0.00048828125", "bridge grid step"},
        {"contour_step", "0.00048828125", "spacing of boundary contour entries"},
        {"min_points", "256", "minimum grid points per tree"},
        {"tree_block", "16", "tree nodes per shortest-path vertex block"},
        {"alpha", "0.001", "family-wise level (Bonferroni) for the invariance tests"}}},
      {"estimate-kappa",
       {{"replicas", "8", "disk complexes"},
        {"epsilons", "1,0.5,0.25,0.125,0.0625", "interval lengths for m^h([0, eps]) / eps"},
        {"p_max", "9", "finest dyadic level"},
        {"epsilon", "0.01", "forest height cutoff"},
        {"bridge_step", "0.000244140625", "bridge grid step"},
        {"contour_step", "0.00048828125", "spacing of boundary contour entries"},
        {"min_points", "32", "minimum grid points per tree"},
        {"extra_points", "512", "tree entries added to the metric point set"},
        {"point_cap", "4096", "refuse metric graphs larger than this"},
        {"gauge_clamp", "0.1353352832366127", "upper end of the gauge domain"},
        {"max_ratio_factor", "4", "guard: ratios at eps and eps / 2 within this factor"}}},
      {"build-disk",
       {{"replicas", "1", "complexes to build (the first is exported)"},
        {"epsilon", "0.01", "forest height cutoff"},
        {"bridge_step", "0.000244140625", "bridge grid step"},
        {"contour_step", "0.00048828125", "spacing of boundary contour entries"},
        {"excursion_step", "0.0001", "contour-time step inside trees"},
        {"min_points", "32", "minimum grid points per tree"},
        {"max_points", "20000", "maximum grid points per tree"}}},
  };
  return table;
}

const Section& find_section(const std::string& name) {
  for (const auto& s : specs()) {
    if (s.name == name) return s;
  }
  throw ParameterError("config: unknown section [" + name + "]");
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParameterError("config: " + what + " = '" + text + "' is not a valid number");
  }
  return value;
}

}  // namespace

const RunConfig::SectionSpec& RunConfig::global_spec() {
  static const Section global = {
      "",
      {{"seed", "20240601", "global seed"},
       {"replicas", "0", "replica count for every command; 0 keeps the per-command default"},
       {"threads", "1", "worker threads (results do not depend on it)"},
       {"out", "results", "output directory"}}};
  return global;
}

const std::vector<RunConfig::SectionSpec>& RunConfig::command_specs() { return specs(); }

RunConfig::RunConfig() {
  for (const auto& s : specs()) {
    auto& dst = sections_[s.name];
    for (const auto& k : s.keys) dst[k.key] = k.default_value;
  }
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  return parse(in, path);
}

RunConfig RunConfig::parse(std::istream& is, const std::string& source) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParameterError("config " + source + ": " + e.message() + " (line " +
                         std::to_string(e.line()) + ")");
  }
  RunConfig config;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      const std::string value = node.data();
      if (name == "seed") {
        config.seed = parse_number<std::uint64_t>(value, name);
      } else if (name == "replicas") {
        config.replicas = parse_number<std::size_t>(value, name);
      } else if (name == "threads") {
        config.threads = parse_number<int>(value, name);
        if (config.threads < 1) throw ParameterError("config: threads must be >= 1");
      } else if (name == "out") {
        config.out = value;
      } else {
        throw ParameterError("config " + source + ": unknown key '" + name + "'");
      }
      continue;
    }
    find_section(name);
    for (const auto& [key, leaf] : node) config.set(name, key, leaf.data());
  }
  return config;
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  const Section& spec = find_section(section);
  for (const auto& k : spec.keys) {
    if (k.key == key) {
      sections_[section][key] = value;
      return;
    }
  }
  throw ParameterError("config: unknown key '" + key + "' in [" + section + "]");
}

const std::string& RunConfig::get(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) throw ParameterError("config: unknown section [" + section + "]");
  const auto k = s->second.find(key);
  if (k == s->second.end()) {
    throw ParameterError("config: unknown key '" + key + "' in [" + section + "]");
  }
  return k->second;
}

double RunConfig::get_double(const std::string& section, const std::string& key) const {
  return parse_number<double>(get(section, key), section + "." + key);
}

long long RunConfig::get_int(const std::string& section, const std::string& key) const {
  return parse_number<long long>(get(section, key), section + "." + key);
}

std::vector<double> RunConfig::get_doubles(const std::string& section,
                                           const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(section, key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(item, section + "." + key));
  if (out.empty()) throw ParameterError("config: " + section + "." + key + " is empty");
  return out;
}

std::size_t RunConfig::replicas_for(const std::string& section) const {
  if (replicas > 0) return replicas;
  const long long n = get_int(section, "replicas");
  if (n < 1) throw ParameterError("config: " + section + ".replicas must be >= 1");
  return static_cast<std::size_t>(n);
}

std::string RunConfig::echo(const std::string& section) const {
  std::ostringstream os;
  os << "seed = " << seed << '\n'
     << "replicas = " << replicas << '\n'
     << "out = " << out << '\n'
     << '[' << section << "]\n";
  for (const auto& k : find_section(section).keys) os << k.key << " = " << get(section, k.key) << '\n';
  return os.str();
}

void write_default_config(std::ostream& os) {
  for (const auto& k : RunConfig::global_spec().keys) {
    os << "; " << k.doc << '\n' << k.key << " = " << k.default_value << '\n';
  }
  for (const auto& s : specs()) {
    os << "\n[" << s.name << "]\n";
    for (const auto& k : s.keys) os << "; " << k.doc << '\n' << k.key << " = " << k.default_value << '\n';
  }
}

}  // namespace bdisk
