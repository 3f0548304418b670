#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mjsre::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kNotConverged = 3,
  kRuntimeError = 4,
};

enum class Format { tabular, structured };

struct RunConfig {
  std::string command;                      // sps | stability | forward | des | metrics | compare-ra
  std::vector<std::string> scenario_paths;  // compare-ra accepts several
  std::uint64_t seed = 1;
  std::int64_t replicas = 1000;
  std::optional<std::int64_t> ell0;
  std::optional<std::int64_t> ell_max;
  std::optional<double> epsilon;
  std::int64_t n_jobs = 10000;
  int workers = 1;
  double confidence = 0.99;
  std::vector<double> percentiles{0.5, 0.9, 0.99};
  std::optional<double> lambda;  // overrides the scenario's arrival rate
  bool random_assignment = false;
  bool allow_nonconverged = false;
  bool precision_guard = true;
  std::string output;    // empty: the `out` stream
  std::string manifest;  // empty: <output>.manifest.json, or none when writing to `out`
  Format format = Format::tabular;

  /// Throws ConfigError on any invalid knob, before any computation.
  void validate() const;
};

/// Parses command-line arguments; throws ConfigError on usage errors.
/// Returns nullopt when help was requested (text written to `out`).
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Executes the command and returns an ExitCode. Errors are reported on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code mapping for usage errors.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mjsre::cli
