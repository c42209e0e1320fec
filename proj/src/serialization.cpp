#include "nanoqi/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "nanoqi/tomography.hpp"

namespace nanoqi {

using nlohmann::json;

json to_json(const DensityMatrix &rho) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < rho.dim(); ++r)
    for (Eigen::Index c = 0; c < rho.dim(); ++c) entries.push_back({rho(r, c).real(), rho(r, c).imag()});
  return {{"dim", rho.dim()}, {"entries", std::move(entries)}};
}

DensityMatrix density_from_json(const json &j) {
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto &entries = j.at("entries");
  if (dim <= 0 || entries.size() != static_cast<std::size_t>(dim * dim))
    throw std::runtime_error("density matrix: entry count does not match dim");
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index k = 0; k < dim * dim; ++k) {
    const auto &e = entries.at(static_cast<std::size_t>(k));
    m(k / dim, k % dim) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
  }
  return DensityMatrix(std::move(m));
}

json to_json(const TwoPhotonState &state) {
  json out = json::array();
  for (const auto &[pair, c] : state.amplitudes()) {
    json modes = json::array();
    for (const Mode &m : {pair.first, pair.second}) modes.push_back({m.m, m.helicity, m.temporal});
    out.push_back({{"modes", std::move(modes)}, {"amplitude", {c.real(), c.imag()}}});
  }
  return out;
}

TwoPhotonState state_from_json(const json &j) {
  TwoPhotonState::Amplitudes amps;
  for (const auto &entry : j) {
    const auto &modes = entry.at("modes");
    if (modes.size() != 2) throw std::runtime_error("state entry needs exactly two modes");
    auto mode = [](const json &m) { return Mode(m.at(0).get<int>(), m.at(1).get<int>(), m.at(2).get<int>()); };
    const auto &a = entry.at("amplitude");
    amps[ModePair(mode(modes[0]), mode(modes[1]))] += cplx(a.at(0).get<double>(), a.at(1).get<double>());
  }
  return TwoPhotonState(std::move(amps));
}

std::string format_number(double x) { return fmt::format("{}", x); }

std::string counts_csv(std::span<const CountRow> rows) {
  std::string out = std::string(kCountsHeader) + "\n";
  for (const auto &r : rows)
    out += fmt::format("{},{},{},{},{}\n", r.setting_label, r.arm1, r.arm2, format_number(r.counts),
                       format_number(r.duration_s));
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string &s, const char *what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw std::runtime_error(std::string("counts csv: bad ") + what + " '" + s + "'");
  }
}

}  // namespace

std::vector<CountRow> parse_counts_csv(const std::string &text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw std::runtime_error("counts csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCountsHeader) throw std::runtime_error("counts csv: unexpected header '" + line + "'");
  std::vector<CountRow> rows;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw std::runtime_error("counts csv: expected 5 fields in '" + line + "'");
    CountRow row{f[0], f[1], f[2], parse_double(f[3], "count"), parse_double(f[4], "duration")};
    if (row.counts < 0.0) throw std::runtime_error("counts csv: negative count in '" + line + "'");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<MeasurementSetting> settings_for(std::span<const CountRow> rows) {
  const auto arms = standard_arms();
  auto find = [&](const std::string &label) {
    for (const auto &a : arms)
      if (a.label == label) return a;
    throw std::runtime_error("unknown analyzer label '" + label + "'");
  };
  std::vector<MeasurementSetting> out;
  for (const auto &r : rows) out.push_back({find(r.arm1), find(r.arm2), r.setting_label});
  return out;
}

std::string hom_csv(std::span<const HomScan> scans) {
  std::string out = std::string(kHomHeader) + "\n";
  for (const auto &scan : scans)
    for (const auto &p : scan.points)
      out += fmt::format("{},{},{},{}\n", format_number(p.tau * 1e15), format_number(p.rate_normalized),
                         format_number(p.rate_std), scan.label);
  return out;
}

std::string hom_gnuplot(std::span<const HomScan> scans) {
  std::string out;
  for (std::size_t i = 0; i < scans.size(); ++i) {
    if (i) out += "\n\n";
    out += fmt::format("# {}\n# tau_fs rate_normalized rate_std\n", scans[i].label);
    for (const auto &p : scans[i].points)
      out += fmt::format("{} {} {}\n", format_number(p.tau * 1e15), format_number(p.rate_normalized),
                         format_number(p.rate_std));
  }
  return out;
}

std::string table1_csv(std::span<const Table1Row> rows) {
  std::string out = std::string(kTable1Header) + "\n";
  for (const auto &r : rows)
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.state_label, r.scenario, format_number(r.value.concurrence),
                       format_number(r.concurrence_std), format_number(r.value.negativity),
                       format_number(r.negativity_std), format_number(r.value.fidelity),
                       format_number(r.fidelity_std));
  return out;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace nanoqi
