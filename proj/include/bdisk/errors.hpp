#ifndef BDISK_ERRORS_HPP_
#define BDISK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bdisk {

// Invalid argument to a sampler, builder or estimator (CLI exit code 1).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a closed-form function (gauge, densities).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured cap was exceeded; the message carries the advisory.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failures, always reported with the offending path (exit code 3).
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace bdisk

#endif  // BDISK_ERRORS_HPP_
