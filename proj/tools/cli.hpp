#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "fcoord/errors.hpp"

namespace fcoord::cli {

enum ExitCode : int {
  kPass = 0,
  kSuiteFailure = 1,
  kConfigError = 2,
  kIoError = 3,
};

/// Invalid command line or configuration file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct GridSpec {
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<int> n;
  std::optional<bool> periodic;
};

struct RunConfig {
  std::string command;
  GridSpec grid;
  std::string kernel = "gaussian";
  std::vector<std::string> suites = {"all"};
  std::map<std::string, double> tolerances;
  std::filesystem::path out = "fcoord-out";
  std::set<std::string> formats = {"csv", "json"};
  std::uint64_t seed = 7;
  bool invert = false;
  double threshold = 1e-10;
  int order_x = 1;
  int order_y = 1;
  std::string a = "1";
  std::string b = "1";
  std::string g0 = "y";
  std::optional<std::filesystem::path> input;
  bool export_kernel = false;
};

/// Parses `args` (without the program name). A --config file is read first
/// and explicit flags override its values. Throws ConfigError, or IoError
/// when the config file cannot be read.
RunConfig parse_args(const std::vector<std::string>& args);

/// Validates ids, tolerances and grid values. Throws ConfigError.
void validate(const RunConfig& config);

int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_transform(const RunConfig& config, std::ostream& out);
int cmd_residual(const RunConfig& config, std::ostream& out);

/// Full entry point: parse, dispatch, map errors to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcoord::cli
