#pragma once

// Text formats: density matrices and states as JSON, counts and tables as CSV.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nanoqi/measurement.hpp"
#include "nanoqi/metrics.hpp"
#include "nanoqi/mode_algebra.hpp"

namespace nanoqi {

/// {"dim": d, "entries": [[re, im], ...]} with entries row-major.
nlohmann::json to_json(const DensityMatrix &rho);
DensityMatrix density_from_json(const nlohmann::json &j);

/// [{"modes": [[m, h, t], [m, h, t]], "amplitude": [re, im]}, ...]
nlohmann::json to_json(const TwoPhotonState &state);
TwoPhotonState state_from_json(const nlohmann::json &j);

/// Shortest round-trip decimal form.
std::string format_number(double x);

struct CountRow {
  std::string setting_label;
  std::string arm1;
  std::string arm2;
  double counts = 0.0;
  double duration_s = 0.0;
};

inline constexpr const char *kCountsHeader = "setting_label,arm1,arm2,counts,duration_s";
inline constexpr const char *kHomHeader = "tau_fs,rate_normalized,rate_std,state_label";
inline constexpr const char *kTable1Header =
    "state_label,scenario,concurrence,concurrence_std,negativity,negativity_std,fidelity,fidelity_std";

std::string counts_csv(std::span<const CountRow> rows);
/// Throws std::runtime_error on a malformed header or row.
std::vector<CountRow> parse_counts_csv(const std::string &text);

/// Settings matching each row's arm labels among standard_arms(). Throws
/// std::runtime_error for an unknown label.
std::vector<MeasurementSetting> settings_for(std::span<const CountRow> rows);

std::string hom_csv(std::span<const HomScan> scans);
/// Whitespace-separated blocks, one per scan, separated by two blank lines.
std::string hom_gnuplot(std::span<const HomScan> scans);

struct Table1Row {
  std::string state_label;
  std::string scenario;
  MetricReport value;
  double concurrence_std = 0.0;
  double negativity_std = 0.0;
  double fidelity_std = 0.0;
};
std::string table1_csv(std::span<const Table1Row> rows);

/// Writes `text` to `path`. Throws std::runtime_error when unwritable.
void write_text(const std::filesystem::path &path, const std::string &text);
std::string read_text(const std::filesystem::path &path);

}  // namespace nanoqi
