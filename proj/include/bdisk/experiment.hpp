#ifndef BDISK_EXPERIMENT_HPP_
#define BDISK_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bdisk/config.hpp"

namespace bdisk {

// One result row: reproducible from (experiment, parameters, seed).
struct ExperimentRecord {
  std::string experiment;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::map<std::string, std::string> metadata;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CommandResult {
  std::string command;
  std::vector<ExperimentRecord> records;
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult& check(const std::string& name) const;
  // Records of one experiment, in emission order.
  std::vector<const ExperimentRecord*> rows(const std::string& experiment) const;
};

// Shortest decimal form that round-trips.
std::string format_number(double x);

// CSV: "# " config echo lines, then a header row and one row per record.
// Parameter and metadata columns are the union over all records.
void write_records_csv(std::ostream& os, const CommandResult& result, const std::string& echo);

// Sidecar with checks, config and run-dependent fields such as wall time.
void write_sidecar_json(std::ostream& os, const CommandResult& result, const RunConfig& config,
                        double wall_seconds);

}  // namespace bdisk

#endif  // BDISK_EXPERIMENT_HPP_
