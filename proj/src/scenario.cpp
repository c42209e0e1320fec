#include "nanoqi/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include "nanoqi/serialization.hpp"

namespace nanoqi {

using nlohmann::json;

namespace {

constexpr double kFs = 1e-15;
constexpr double kDeg = M_PI / 180.0;

void allow_keys(const json &block, const std::string &prefix, std::initializer_list<const char *> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto &[k, v] : block.items())
    if (!allowed.count(k)) throw ValidationError(prefix + k, "unknown key");
}

const json *child(const json &block, const char *key) {
  auto it = block.find(key);
  return it == block.end() ? nullptr : &*it;
}

const json &object_block(const json &root, const char *key, bool required) {
  static const json empty = json::object();
  const json *b = child(root, key);
  if (!b) {
    if (required) throw ValidationError(key, "block is required for this task");
    return empty;
  }
  if (!b->is_object()) throw ValidationError(key, "must be an object");
  return *b;
}

double number(const json &block, const char *key, const std::string &prefix, double fallback) {
  const json *v = child(block, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ValidationError(prefix + key, "must be a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) throw ValidationError(prefix + key, "must be finite");
  return x;
}

int integer(const json &block, const char *key, const std::string &prefix, int fallback) {
  const json *v = child(block, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw ValidationError(prefix + key, "must be an integer");
  return v->get<int>();
}

cplx complex_value(const json &block, const char *key, const std::string &prefix, cplx fallback) {
  const json *v = child(block, key);
  if (!v) return fallback;
  if (v->is_number()) return {v->get<double>(), 0.0};
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
    throw ValidationError(prefix + key, "must be [re, im]");
  return {(*v)[0].get<double>(), (*v)[1].get<double>()};
}

std::vector<double> number_list(const json &v, const std::string &key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array() && !v.empty()) {
    for (const auto &x : v) {
      if (!x.is_number()) throw ValidationError(key, "list entries must be numbers");
      out.push_back(x.get<double>());
    }
  } else {
    throw ValidationError(key, "must be a number or a non-empty list of numbers");
  }
  return out;
}

std::vector<double> delay_list(const json &v) {
  const std::string key = "source.delay_fs";
  if (!v.is_object()) return number_list(v, key);
  allow_keys(v, key + ".", {"from", "to", "points"});
  const double from = number(v, "from", key + ".", 0.0), to = number(v, "to", key + ".", 0.0);
  const int points = integer(v, "points", key + ".", 0);
  if (points < 2) throw ValidationError(key + ".points", "scan needs at least two points");
  if (!(to > from)) throw ValidationError(key + ".to", "must exceed 'from'");
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    // Symmetric grids hit 0 exactly when the midpoint is 0.
    const double t = from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back(std::abs(t) < 1e-9 * (to - from) ? 0.0 : t);
  }
  return out;
}

void parse_source(const json &root, Scenario &s) {
  const json &b = object_block(root, "source", true);
  const std::string p = "source.";
  allow_keys(b, p, {"visibility", "sigma_tau_fs", "delay_fs", "noise_lambda", "pair_flux"});
  auto &src = s.source;
  src.visibility = number(b, "visibility", p, 1.0);
  if (!(src.visibility >= 0.0 && src.visibility <= 1.0)) throw ValidationError(p + "visibility", "must lie in [0, 1]");
  const double sigma_fs = number(b, "sigma_tau_fs", p, 100.0);
  if (!(sigma_fs > 0.0)) throw ValidationError(p + "sigma_tau_fs", "must be positive");
  src.sigma_tau = sigma_fs * kFs;
  src.noise_lambda = number(b, "noise_lambda", p, 1.0);
  if (!(src.noise_lambda >= 0.0 && src.noise_lambda <= 1.0))
    throw ValidationError(p + "noise_lambda", "must lie in [0, 1]");
  src.pair_flux = number(b, "pair_flux", p, 0.0);
  if (!(src.pair_flux >= 0.0)) throw ValidationError(p + "pair_flux", "must be non-negative");
  s.delays = {0.0};
  if (const json *d = child(b, "delay_fs")) s.delays = delay_list(*d);
  for (double &t : s.delays) t *= kFs;
  src.delay = s.delays.front();
}

void parse_prep(const json &root, Scenario &s) {
  const json &b = object_block(root, "prep", false);
  allow_keys(b, "prep.", {"hwp_deg"});
  s.hwp_angles = {0.0};
  if (const json *h = child(b, "hwp_deg")) s.hwp_angles = number_list(*h, "prep.hwp_deg");
  for (double &a : s.hwp_angles) a *= kDeg;
}

void parse_aperture(const json &root, Scenario &s) {
  if (!child(root, "aperture")) {
    if (s.task == Task::ApertureSweep) throw ValidationError("aperture", "block is required for this task");
    return;
  }
  const json &b = object_block(root, "aperture", true);
  const std::string p = "aperture.";
  allow_keys(b, p, {"alpha", "beta", "eta", "jitter", "count"});
  ApertureBlock a;
  a.coefficients.alpha = complex_value(b, "alpha", p, {1.0, 0.0});
  a.coefficients.beta = complex_value(b, "beta", p, {0.0, 0.0});
  a.coefficients.eta = number(b, "eta", p, 1.0);
  if (!(a.coefficients.eta >= 0.0 && a.coefficients.eta <= 1.0)) throw ValidationError(p + "eta", "must lie in [0, 1]");
  if (std::norm(a.coefficients.alpha) + std::norm(a.coefficients.beta) > 1.0 + 1e-12)
    throw ValidationError(p + "beta", "|alpha|^2 + |beta|^2 must not exceed 1");
  a.jitter = number(b, "jitter", p, 0.0);
  if (!(a.jitter >= 0.0 && a.jitter < 1.0)) throw ValidationError(p + "jitter", "must lie in [0, 1)");
  a.count = integer(b, "count", p, 1);
  if (a.count < 1) throw ValidationError(p + "count", "must be at least 1");
  s.aperture = a;
}

void parse_sampling(const json &root, Scenario &s) {
  if (!child(root, "sampling")) return;
  const json &b = object_block(root, "sampling", true);
  const std::string p = "sampling.";
  allow_keys(b, p, {"scale", "pairs_per_point", "repeats", "bootstrap", "dark_counts", "seed"});
  SamplingBlock sb;
  sb.scale = number(b, "scale", p, sb.scale);
  if (!(sb.scale > 0.0)) throw ValidationError(p + "scale", "must be positive");
  sb.pairs_per_point = number(b, "pairs_per_point", p, sb.pairs_per_point);
  if (!(sb.pairs_per_point > 0.0)) throw ValidationError(p + "pairs_per_point", "must be positive");
  sb.repeats = integer(b, "repeats", p, sb.repeats);
  if (sb.repeats < 1) throw ValidationError(p + "repeats", "must be at least 1");
  sb.bootstrap = integer(b, "bootstrap", p, sb.bootstrap);
  if (sb.bootstrap < 2) throw ValidationError(p + "bootstrap", "must be at least 2");
  sb.dark_counts = number(b, "dark_counts", p, 0.0);
  if (!(sb.dark_counts >= 0.0)) throw ValidationError(p + "dark_counts", "must be non-negative");
  if (const json *seed = child(b, "seed")) {
    if (!seed->is_number_integer() || (!seed->is_number_unsigned() && seed->get<std::int64_t>() < 0))
      throw ValidationError(p + "seed", "must be a non-negative integer");
    sb.seed = seed->get<std::uint64_t>();
  }
  s.sampling = sb;
}

}  // namespace

ValidationError::ValidationError(std::string key, const std::string &message)
    : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

std::string to_string(Task task) {
  switch (task) {
    case Task::Prepare: return "prepare";
    case Task::HomScan: return "hom-scan";
    case Task::Tomography: return "tomography";
    case Task::ApertureSweep: return "aperture-sweep";
    case Task::Metrics: return "metrics";
  }
  return "unknown";
}

std::optional<Task> task_from_string(const std::string &name) {
  for (Task t : {Task::Prepare, Task::HomScan, Task::Tomography, Task::ApertureSweep, Task::Metrics})
    if (to_string(t) == name) return t;
  return std::nullopt;
}

bool Scenario::samples() const {
  switch (task) {
    case Task::Tomography:
    case Task::ApertureSweep: return true;
    case Task::HomScan: return sampling.has_value();
    default: return false;
  }
}

Scenario parse_scenario(const json &j, std::optional<Task> task_override) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");
  allow_keys(j, "", {"name", "task", "source", "prep", "aperture", "sampling", "tomography", "output"});
  Scenario s;
  if (const json *name = child(j, "name")) {
    if (!name->is_string()) throw ValidationError("name", "must be a string");
    s.name = name->get<std::string>();
  }
  std::optional<Task> declared;
  if (const json *t = child(j, "task")) {
    if (!t->is_string() || !(declared = task_from_string(t->get<std::string>())))
      throw ValidationError("task", "must be one of prepare, hom-scan, tomography, aperture-sweep, metrics");
  }
  if (declared && task_override && *declared != *task_override)
    throw ValidationError("task", "scenario declares '" + to_string(*declared) + "' but '" +
                                      to_string(*task_override) + "' was requested");
  if (!declared && !task_override) throw ValidationError("task", "no task given");
  s.task = task_override ? *task_override : *declared;

  parse_source(j, s);
  parse_prep(j, s);
  parse_aperture(j, s);
  parse_sampling(j, s);

  const json &tomo = object_block(j, "tomography", false);
  allow_keys(tomo, "tomography.", {"counts_csv"});
  if (const json *c = child(tomo, "counts_csv")) {
    if (!c->is_string()) throw ValidationError("tomography.counts_csv", "must be a path string");
    s.counts_csv = c->get<std::string>();
  }

  const json &out = object_block(j, "output", false);
  allow_keys(out, "output.", {"dir", "gnuplot"});
  if (const json *d = child(out, "dir")) {
    if (!d->is_string()) throw ValidationError("output.dir", "must be a string");
    s.output_dir = d->get<std::string>();
  }
  if (const json *g = child(out, "gnuplot")) {
    if (!g->is_boolean()) throw ValidationError("output.gnuplot", "must be true or false");
    s.gnuplot = g->get<bool>();
  }

  if (s.samples() && !(s.sampling && s.sampling->seed))
    throw ValidationError("sampling.seed", "a seed is required whenever the task samples counts");
  if (s.task == Task::HomScan && s.delays.size() < 1) throw ValidationError("source.delay_fs", "no delays");
  if (s.counts_csv && s.hwp_angles.size() != 1)
    throw ValidationError("prep.hwp_deg", "ingested counts describe exactly one prepared state");
  return s;
}

Scenario load_scenario(const std::string &path, std::optional<Task> task_override) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const std::exception &e) {
    throw ParseError(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(path + ": " + e.what());
  }
  Scenario s = parse_scenario(j, task_override);
  if (s.name.empty()) s.name = std::filesystem::path(path).stem().string();
  if (s.counts_csv && std::filesystem::path(*s.counts_csv).is_relative())
    s.counts_csv = (std::filesystem::path(path).parent_path() / *s.counts_csv).string();
  return s;
}

}  // namespace nanoqi
