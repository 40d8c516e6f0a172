#ifndef BDISK_COMMANDS_HPP_
#define BDISK_COMMANDS_HPP_

#include <map>
#include <string>
#include <vector>

#include "bdisk/config.hpp"
#include "bdisk/experiment.hpp"
#include "bdisk/random.hpp"

namespace bdisk {

// Each command reads its [section] of the config and returns result rows plus
// named pass/fail checks. Files other than the CSV and sidecar (the exported
// complex of build-disk) are returned in `files`, keyed by file name.
struct CommandOutput : CommandResult {
  std::map<std::string, std::string> files;
};

CommandOutput cmd_verify_bessel_bound(const RunConfig& config);
CommandOutput cmd_verify_ball_volume(const RunConfig& config);
CommandOutput cmd_modulus(const RunConfig& config);
CommandOutput cmd_reroot_test(const RunConfig& config);
CommandOutput cmd_estimate_kappa(const RunConfig& config);
CommandOutput cmd_build_disk(const RunConfig& config);

const std::vector<std::string>& command_names();
CommandOutput run_command(const std::string& name, const RunConfig& config);

// Stream for replica i of a command; independent across commands.
RandomStream replica_stream(const RunConfig& config, const std::string& command,
                            std::size_t replica);

}  // namespace bdisk

#endif  // BDISK_COMMANDS_HPP_
