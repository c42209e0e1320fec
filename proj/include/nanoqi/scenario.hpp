#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nanoqi/aperture.hpp"
#include "nanoqi/source.hpp"

namespace nanoqi {

enum class Task { Prepare, HomScan, Tomography, ApertureSweep, Metrics };

std::string to_string(Task task);
std::optional<Task> task_from_string(const std::string &name);

/// Malformed input (exit status 2).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input violating a field constraint (exit status 3). `key` is
/// the dotted path of the offending field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key, const std::string &message);
  const std::string &key() const { return key_; }

 private:
  std::string key_;
};

struct ApertureBlock {
  ApertureCoefficients coefficients;
  double jitter = 0.0;  ///< relative standard deviation per parameter
  int count = 1;
};

struct SamplingBlock {
  double scale = 1e5;            ///< tomography counts per setting at unit probability
  double pairs_per_point = 1e5;  ///< HOM pairs per delay point
  int repeats = 10;
  int bootstrap = 100;
  double dark_counts = 0.0;
  std::optional<std::uint64_t> seed;
};

/// Angles in scenario files are degrees and delays femtoseconds; the parsed
/// values are radians and seconds.
struct Scenario {
  std::string name;
  Task task = Task::Prepare;
  SourceModel source;
  std::vector<double> delays;      ///< seconds; a single 0 unless scanned
  std::vector<double> hwp_angles;  ///< radians
  std::optional<ApertureBlock> aperture;
  std::optional<SamplingBlock> sampling;
  std::optional<std::string> counts_csv;  ///< tomography input instead of simulation
  std::string output_dir;
  bool gnuplot = false;

  bool samples() const;
};

/// Parses and validates. `task_override` (the CLI subcommand) must agree with
/// a "task" key when both are present. Throws ParseError / ValidationError.
Scenario parse_scenario(const nlohmann::json &j, std::optional<Task> task_override = std::nullopt);
Scenario load_scenario(const std::string &path, std::optional<Task> task_override = std::nullopt);

}  // namespace nanoqi
