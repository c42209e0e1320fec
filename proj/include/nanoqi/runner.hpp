#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nanoqi/scenario.hpp"

namespace nanoqi {

inline constexpr const char *kToolName = "nanoqi";
inline constexpr const char *kToolVersion = "0.1.0";

/// Command-line overrides applied on top of the scenario file.
struct RunOverrides {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> repeats;
};

/// File name -> contents. Assembled single-threaded so the bytes only depend
/// on the scenario and seed.
struct RunOutputs {
  std::map<std::string, std::string> files;
  nlohmann::json manifest;
};

/// Folds overrides into the scenario, re-checking the fields they touch.
Scenario apply_overrides(Scenario s, const RunOverrides &o);

/// Runs the scenario's task in memory.
RunOutputs run_task(const Scenario &s);

/// Writes every file plus manifest.json into `dir` (created if missing).
/// Throws std::runtime_error on an unwritable path.
void emit_outputs(const RunOutputs &outputs, const std::filesystem::path &dir);

/// Full pipeline with exit status: 0 success (also on non-convergence,
/// flagged in the manifest), 2 parse error, 3 validation error, 1 anything
/// else. Diagnostics go to `err`.
int run_scenario(const std::filesystem::path &path, std::optional<Task> task, const RunOverrides &o,
                 std::ostream &err);

/// "minus" or "plus" when the zero-delay coherent state is closer to the
/// matching Bell state than 1/2, otherwise "hwp<deg>".
std::string state_label(double hwp_angle, const SourceModel &source);

}  // namespace nanoqi
