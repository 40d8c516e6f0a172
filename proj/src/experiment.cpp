#include "bdisk/experiment.hpp"

#include <charconv>
#include "json.hpp"
#include <ostream>
#include <set>
#include <sstream>

#include "bdisk/errors.hpp"

namespace bdisk {

bool CommandResult::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const CheckResult& CommandResult::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw ParameterError("no check named '" + name + "' in " + command);
}

std::vector<const ExperimentRecord*> CommandResult::rows(const std::string& experiment) const {
  std::vector<const ExperimentRecord*> out;
  for (const auto& r : records) {
    if (r.experiment == experiment) out.push_back(&r);
  }
  return out;
}

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

void write_records_csv(std::ostream& os, const CommandResult& result, const std::string& echo) {
  os << "# command = " << result.command << '\n';
  std::istringstream lines(echo);
  for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';

  std::set<std::string> param_keys, meta_keys;
  for (const auto& r : result.records) {
    for (const auto& [k, v] : r.parameters) param_keys.insert(k);
    for (const auto& [k, v] : r.metadata) meta_keys.insert(k);
  }
  os << "experiment,seed";
  for (const auto& k : param_keys) os << ',' << csv_field(k);
  os << ",estimate,standard_error";
  for (const auto& k : meta_keys) os << ',' << csv_field(k);
  os << '\n';
  for (const auto& r : result.records) {
    os << csv_field(r.experiment) << ',' << r.seed;
    for (const auto& k : param_keys) {
      const auto it = r.parameters.find(k);
      os << ',' << (it == r.parameters.end() ? "" : csv_field(it->second));
    }
    os << ',' << format_number(r.estimate) << ',' << format_number(r.standard_error);
    for (const auto& k : meta_keys) {
      const auto it = r.metadata.find(k);
      os << ',' << (it == r.metadata.end() ? "" : csv_field(it->second));
    }
    os << '\n';
  }
}

void write_sidecar_json(std::ostream& os, const CommandResult& result, const RunConfig& config,
                        double wall_seconds) {
  nlohmann::json doc;
  doc["command"] = result.command;
  doc["seed"] = config.seed;
  doc["threads"] = config.threads;
  doc["wall_time_seconds"] = wall_seconds;
  doc["records"] = result.records.size();
  doc["passed"] = result.passed();
  nlohmann::json params = nlohmann::json::object();
  for (const auto& spec : RunConfig::command_specs()) {
    if (spec.name != result.command) continue;
    for (const auto& k : spec.keys) params[k.key] = config.get(spec.name, k.key);
  }
  doc["parameters"] = params;
  doc["checks"] = nlohmann::json::array();
  for (const auto& c : result.checks) {
    doc["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  os << doc.dump(2) << '\n';
}

}  // namespace bdisk
