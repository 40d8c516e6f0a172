#ifndef BDISK_CONFIG_HPP_
#define BDISK_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace bdisk {

// Contents of a run configuration file: global keys at the top level and one
// [section] per command. Every key has a documented default; unknown sections
// or keys are rejected.
class RunConfig {
 public:
  struct KeySpec {
    std::string key;
    std::string default_value;
    std::string doc;
  };
  struct SectionSpec {
    std::string name;
    std::vector<KeySpec> keys;
  };

  // Global keys: seed, replicas (0 = per-command default), threads, out.
  static const SectionSpec& global_spec();
  static const std::vector<SectionSpec>& command_specs();

  RunConfig();
  static RunConfig load(const std::string& path);
  static RunConfig parse(std::istream& is, const std::string& source = "<config>");

  std::uint64_t seed = 20240601;
  std::size_t replicas = 0;
  int threads = 1;
  std::string out = "results";

  // Overrides one key in a command section; throws ParameterError if unknown.
  void set(const std::string& section, const std::string& key, const std::string& value);

  const std::string& get(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  long long get_int(const std::string& section, const std::string& key) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

  // Effective replica count: the global value when nonzero, else the section's.
  std::size_t replicas_for(const std::string& section) const;

  // "key = value" lines for the global keys and one section. The thread
  // count is left out since it never changes results.
  std::string echo(const std::string& section) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// A sample file listing every key with its default and documentation.
void write_default_config(std::ostream& os);

}  // namespace bdisk

#endif  // BDISK_CONFIG_HPP_
