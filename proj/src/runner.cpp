#include "nanoqi/runner.hpp"

#include <cmath>
#include <random>
#include <ostream>

#include <fmt/format.h>

#include "nanoqi/measurement.hpp"
#include "nanoqi/metrics.hpp"
#include "nanoqi/serialization.hpp"
#include "nanoqi/tomography.hpp"

namespace nanoqi {

using nlohmann::json;

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::optional<ApertureCoefficients> coefficients(const Scenario &s) {
  if (!s.aperture) return std::nullopt;
  return s.aperture->coefficients;
}

OpticalChain chain_for(const Scenario &s, double hwp, std::optional<ApertureCoefficients> ap) {
  return {s.source, hwp, std::move(ap), gaussian_dip_shape};
}

struct Prepared {
  std::string label;
  Eigen::Vector4cd target;
  std::string target_label;
  TwoQubitImage image;
  double transmission = 1.0;
};

Prepared prepare(const Scenario &s, double hwp) {
  const OpticalChain chain = chain_for(s, hwp, coefficients(s));
  const StateEnsemble out = chain_output(chain, s.source.delay);
  Prepared p{state_label(hwp, s.source), {}, {}, to_two_qubit(out), out.trace()};
  const Eigen::Matrix4cd rho = p.image.rho.matrix();
  if (p.label == "minus" ||
      (p.label != "plus" && fidelity_to_pure(rho, bell::phi_minus()) > fidelity_to_pure(rho, bell::phi_plus()))) {
    p.target = bell::phi_minus();
    p.target_label = "phi_minus";
  } else {
    p.target = bell::phi_plus();
    p.target_label = "phi_plus";
  }
  return p;
}

std::string table_scenario(const Scenario &s) { return s.aperture ? "with_aperture" : "no_interaction"; }

json metrics_json(const MetricReport &m) {
  return {{"target", m.target_label},
          {"concurrence", m.concurrence},
          {"negativity", m.negativity},
          {"fidelity", m.fidelity},
          {"purity", m.purity}};
}

void run_prepare(const Scenario &s, RunOutputs &out) {
  for (double hwp : s.hwp_angles) {
    const Prepared p = prepare(s, hwp);
    const Eigen::Matrix4cd rho = p.image.rho.matrix();
    json doc = {{"label", p.label},
                {"hwp_deg", hwp * kRadToDeg},
                {"delay_fs", s.source.delay * 1e15},
                {"coincidence_probability", p.image.coincidence_probability},
                {"transmission", p.transmission},
                {"density", to_json(p.image.rho)},
                {"metrics", metrics_json(metric_report(rho, p.target, p.target_label))},
                {"input_state", to_json(prepare_coherent(hwp, s.source))}};
    out.files["rho_" + p.label + ".json"] = doc.dump(2) + "\n";
  }
}

void run_metrics(const Scenario &s, RunOutputs &out) {
  std::vector<Table1Row> rows;
  for (double hwp : s.hwp_angles) {
    const Prepared p = prepare(s, hwp);
    rows.push_back({p.label, table_scenario(s), metric_report(p.image.rho.matrix(), p.target, p.target_label)});
  }
  out.files["metrics.csv"] = table1_csv(rows);
}

void run_hom(const Scenario &s, RunOutputs &out) {
  std::vector<HomScan> scans;
  json vis = json::object();
  for (std::size_t k = 0; k < s.hwp_angles.size(); ++k) {
    const double hwp = s.hwp_angles[k];
    const OpticalChain chain = chain_for(s, hwp, coefficients(s));
    const std::string label = state_label(hwp, s.source);
    if (s.sampling) {
      const HomSampling hs{s.sampling->pairs_per_point, s.sampling->repeats, derive_seed(*s.sampling->seed, k),
                           s.sampling->dark_counts};
      scans.push_back(hom_scan_sampled(chain, s.delays, hs, label));
    } else {
      scans.push_back(hom_scan(chain, s.delays, label));
    }
    bool has_zero = false;
    for (double t : s.delays) has_zero |= t == 0.0;
    if (has_zero) {
      const Visibility v = visibility(scans.back());
      vis[label] = {{"visibility", v.value}, {"visibility_raw", v.raw}};
    }
  }
  out.files["hom_scan.csv"] = hom_csv(scans);
  if (s.gnuplot) out.files["hom_scan.dat"] = hom_gnuplot(scans);
  out.manifest["results"] = {{"visibility", vis}};
}

void run_tomography(const Scenario &s, RunOutputs &out) {
  const SamplingBlock &smp = *s.sampling;
  const std::uint64_t seed = *smp.seed;
  std::vector<Table1Row> rows;
  json results = json::object();
  for (std::size_t k = 0; k < s.hwp_angles.size(); ++k) {
    const Prepared p = prepare(s, s.hwp_angles[k]);
    std::vector<MeasurementSetting> settings;
    std::vector<double> counts;
    if (s.counts_csv) {
      const auto parsed = parse_counts_csv(read_text(*s.counts_csv));
      settings = settings_for(parsed);
      for (const auto &r : parsed) counts.push_back(r.counts);
    } else {
      settings = standard_settings();
      counts = simulate_counts(p.image.rho.matrix(), settings, smp.scale, derive_seed(seed, 2 * k));
      std::vector<CountRow> rows_out;
      for (std::size_t i = 0; i < settings.size(); ++i)
        rows_out.push_back({settings[i].label, settings[i].arm1.label, settings[i].arm2.label, counts[i], 1.0});
      out.files["counts_" + p.label + ".csv"] = counts_csv(rows_out);
    }

    TomographyResult fit = mle_reconstruct(settings, counts);
    const Eigen::Vector4cd target = p.target;
    const MetricSet metric_set = {
        {"concurrence", [](const Eigen::Matrix4cd &r) { return concurrence(r); }},
        {"negativity", [](const Eigen::Matrix4cd &r) { return negativity(r); }},
        {"fidelity", [target](const Eigen::Matrix4cd &r) { return fidelity_to_pure(r, target); }},
    };
    BootstrapOptions bo;
    bo.n_resamples = smp.bootstrap;
    bo.seed = derive_seed(seed, 2 * k + 1);
    fit.bootstrap_std = bootstrap_errors(settings, counts, metric_set, bo);

    const MetricReport report = metric_report(fit.rho.matrix(), target, p.target_label);
    rows.push_back({p.label, table_scenario(s), report, fit.bootstrap_std.at("concurrence"),
                    fit.bootstrap_std.at("negativity"), fit.bootstrap_std.at("fidelity")});

    json doc = {{"label", p.label},
                {"hwp_deg", s.hwp_angles[k] * kRadToDeg},
                {"density", to_json(fit.rho)},
                {"metrics", metrics_json(report)},
                {"bootstrap_std", fit.bootstrap_std},
                {"log_likelihood", fit.log_likelihood},
                {"iterations", fit.iterations},
                {"converged", fit.converged},
                {"model_density", to_json(p.image.rho)}};
    out.files["rho_" + p.label + ".json"] = doc.dump(2) + "\n";
    results[p.label] = {{"converged", fit.converged}, {"iterations", fit.iterations}};
    if (!fit.converged) {
      out.manifest["converged"] = false;
      out.manifest["warnings"].push_back(
          fmt::format("MLE for '{}' stopped after {} iterations without converging", p.label, fit.iterations));
    }
  }
  out.files["table1.csv"] = table1_csv(rows);
  out.manifest["results"] = {{"tomography", results}};
}

// Each parameter is scaled by (1 + jitter * z), z standard normal; eta is
// clipped to [0, 1] and an over-unit pair (alpha, beta) is renormalized.
ApertureCoefficients jittered(const ApertureCoefficients &base, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  ApertureCoefficients c = base;
  c.alpha *= 1.0 + jitter * z(rng);
  c.beta *= 1.0 + jitter * z(rng);
  c.eta = std::clamp(c.eta * (1.0 + jitter * z(rng)), 0.0, 1.0);
  const double norm = std::norm(c.alpha) + std::norm(c.beta);
  if (norm > 1.0) {
    c.alpha /= std::sqrt(norm);
    c.beta /= std::sqrt(norm);
  }
  return c;
}

void run_sweep(const Scenario &s, RunOutputs &out) {
  const ApertureBlock &ab = *s.aperture;
  const SamplingBlock &smp = *s.sampling;
  bool has_zero = false;
  for (double t : s.delays) has_zero |= t == 0.0;
  if (!has_zero) throw ValidationError("source.delay_fs", "an aperture sweep needs a zero-delay point");

  std::string csv = "aperture,alpha_re,alpha_im,beta_re,beta_im,eta,state_label,visibility,visibility_std,"
                    "visibility_raw\n";
  json apertures = json::array();
  for (int a = 0; a < ab.count; ++a) {
    const std::uint64_t aperture_seed = derive_seed(*smp.seed, static_cast<std::uint64_t>(a));
    const ApertureCoefficients c =
        ab.jitter > 0.0 ? jittered(ab.coefficients, ab.jitter, derive_seed(aperture_seed, 0)) : ab.coefficients;
    apertures.push_back({{"alpha", complex_json(c.alpha)}, {"beta", complex_json(c.beta)}, {"eta", c.eta}});
    for (std::size_t k = 0; k < s.hwp_angles.size(); ++k) {
      const double hwp = s.hwp_angles[k];
      const std::string label = state_label(hwp, s.source);
      const HomSampling hs{smp.pairs_per_point, smp.repeats, derive_seed(aperture_seed, k + 1), smp.dark_counts};
      const HomScan scan = hom_scan_sampled(chain_for(s, hwp, c), s.delays, hs, label);
      const Visibility v = visibility(scan);
      double std_at_zero = 0.0;
      for (const auto &pt : scan.points)
        if (pt.tau == 0.0) std_at_zero = pt.rate_std;
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", a, format_number(c.alpha.real()),
                         format_number(c.alpha.imag()), format_number(c.beta.real()), format_number(c.beta.imag()),
                         format_number(c.eta), label, format_number(v.value), format_number(std_at_zero),
                         format_number(v.raw));
    }
  }
  out.files["sweep.csv"] = csv;
  out.manifest["results"] = {{"apertures", apertures}};
}

json base_manifest(const Scenario &s) {
  const ApertureCoefficients c = s.aperture ? s.aperture->coefficients : ApertureCoefficients{};
  json hwp = json::array();
  for (double a : s.hwp_angles) hwp.push_back(a * kRadToDeg);
  json m = {{"tool", kToolName},
            {"version", kToolVersion},
            {"scenario", s.name},
            {"task", to_string(s.task)},
            {"seed", s.sampling && s.sampling->seed ? json(*s.sampling->seed) : json(nullptr)},
            {"lambda", s.source.noise_lambda},
            {"alpha", complex_json(c.alpha)},
            {"beta", complex_json(c.beta)},
            {"eta", c.eta},
            {"aperture", s.aperture.has_value()},
            {"visibility", s.source.visibility},
            {"sigma_tau_fs", s.source.sigma_tau * 1e15},
            {"hwp_deg", hwp},
            {"delay_points", s.delays.size()},
            {"converged", true},
            {"warnings", json::array()}};
  if (s.aperture) m["jitter"] = s.aperture->jitter, m["aperture_count"] = s.aperture->count;
  if (s.sampling) {
    m["sampling"] = {{"scale", s.sampling->scale},
                     {"pairs_per_point", s.sampling->pairs_per_point},
                     {"repeats", s.sampling->repeats},
                     {"bootstrap", s.sampling->bootstrap},
                     {"dark_counts", s.sampling->dark_counts}};
  }
  return m;
}

}  // namespace

std::string state_label(double hwp_angle, const SourceModel &source) {
  SourceModel ideal = source;
  ideal.delay = 0.0;
  const Eigen::Matrix4cd rho = to_two_qubit(prepare_coherent(hwp_angle, ideal)).rho.matrix();
  // Margin keeps the exact midpoint (11.25 deg) from flipping on round-off.
  if (fidelity_to_pure(rho, bell::phi_minus()) > 0.5 + 1e-9) return "minus";
  if (fidelity_to_pure(rho, bell::phi_plus()) > 0.5 + 1e-9) return "plus";
  return fmt::format("hwp{}", format_number(hwp_angle * kRadToDeg));
}

Scenario apply_overrides(Scenario s, const RunOverrides &o) {
  if (o.out) s.output_dir = o.out->string();
  if (o.seed) {
    if (!s.sampling) s.sampling = SamplingBlock{};
    s.sampling->seed = *o.seed;
  }
  if (o.repeats) {
    if (*o.repeats < 1) throw ValidationError("repeats", "must be at least 1");
    if (!s.sampling) s.sampling = SamplingBlock{};
    s.sampling->repeats = *o.repeats;
  }
  if (s.samples() && !(s.sampling && s.sampling->seed))
    throw ValidationError("sampling.seed", "a seed is required whenever the task samples counts");
  return s;
}

RunOutputs run_task(const Scenario &s) {
  s.source.validate();
  RunOutputs out;
  out.manifest = base_manifest(s);
  switch (s.task) {
    case Task::Prepare: run_prepare(s, out); break;
    case Task::Metrics: run_metrics(s, out); break;
    case Task::HomScan: run_hom(s, out); break;
    case Task::Tomography: run_tomography(s, out); break;
    case Task::ApertureSweep: run_sweep(s, out); break;
  }
  json files = json::array();
  for (const auto &[name, text] : out.files) files.push_back(name);
  out.manifest["files"] = files;
  return out;
}

void emit_outputs(const RunOutputs &outputs, const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  for (const auto &[name, text] : outputs.files) write_text(dir / name, text);
  write_text(dir / "manifest.json", outputs.manifest.dump(2) + "\n");
}

int run_scenario(const std::filesystem::path &path, std::optional<Task> task, const RunOverrides &o,
                 std::ostream &err) {
  try {
    const Scenario s = apply_overrides(load_scenario(path.string(), task), o);
    const RunOutputs outputs = run_task(s);
    const std::filesystem::path dir = s.output_dir.empty() ? std::filesystem::path("out") / s.name : std::filesystem::path(s.output_dir);
    emit_outputs(outputs, dir);
    for (const auto &w : outputs.manifest["warnings"]) err << "warning: " << w.get<std::string>() << "\n";
    return 0;
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError &e) {
    err << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nanoqi
