#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bdisk/commands.hpp"
#include "bdisk/config.hpp"
#include "bdisk/errors.hpp"
#include "bdisk/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kParameter = 1, kCheckFailed = 2, kIo = 3 };

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bdisk::IoError(path.string(), "cannot open for writing");
  out << contents;
  if (!out) throw bdisk::IoError(path.string(), "write failed");
}

int run(const std::string& command, const std::string& config_path,
        const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& replicas,
        const std::optional<int>& threads, const std::optional<std::string>& out_dir) {
  bdisk::RunConfig config = config_path.empty() ? bdisk::RunConfig() : bdisk::RunConfig::load(config_path);
  if (seed) config.seed = *seed;
  if (replicas) config.replicas = *replicas;
  if (threads) {
    if (*threads < 1) throw bdisk::ParameterError("--threads must be >= 1");
    config.threads = *threads;
  }
  if (out_dir) config.out = *out_dir;

  const auto start = std::chrono::steady_clock::now();
  const bdisk::CommandOutput result = bdisk::run_command(command, config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path dir(config.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw bdisk::IoError(dir.string(), ec.message());
  std::ostringstream csv, json;
  bdisk::write_records_csv(csv, result, config.echo(command));
  bdisk::write_sidecar_json(json, result, config, wall);
  write_file(dir / (command + ".csv"), csv.str());
  write_file(dir / (command + ".json"), json.str());
  for (const auto& [name, contents] : result.files) write_file(dir / name, contents);

  std::cout << command << ": " << result.records.size() << " records -> "
            << (dir / (command + ".csv")).string() << '\n';
  for (const auto& c : result.checks) {
    std::cout << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name << ": " << c.detail
              << '\n';
  }
  return result.passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments on Brownian disk boundaries"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  std::string selected;

  for (const auto& name : bdisk::command_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "global seed");
    sub->add_option("--replicas", replicas, "replica count for this command");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--out", out_dir, "output directory");
    sub->callback([&selected, name] { selected = name; });
  }
  CLI::App* print = app.add_subcommand("print-config", "print every config key with its default");
  print->callback([] { bdisk::write_default_config(std::cout); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParameter;
  }
  if (selected.empty()) return kOk;

  try {
    return run(selected, config_path, seed, replicas, threads, out_dir);
  } catch (const bdisk::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const bdisk::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParameter;
  } catch (const bdisk::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParameter;
  } catch (const bdisk::ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParameter;
  }
}
