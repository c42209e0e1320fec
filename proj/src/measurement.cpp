#include "nanoqi/measurement.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace nanoqi {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Eigen::Vector2cd ArmSpec::compile() const {
  Jones2 chain = Jones2::Identity();
  for (const auto &p : plates) chain = p.jones * chain;
  // Pass amplitude <axis| J |psi>; in the helicity basis v = C† J† axis.
  return helicity_components(chain.adjoint() * axis.normalized());
}

ArmSpec arm_linear(std::string label, const Jones &axis) { return {std::move(label), {}, axis}; }

ArmSpec arm_circular(int helicity) {
  return {helicity > 0 ? "R" : "L", {qwp(M_PI / 4.0)}, helicity > 0 ? polarization::H() : polarization::V()};
}

Eigen::Vector4cd MeasurementSetting::projector_vector() const {
  const Eigen::Vector2cd a = arm1.compile(), b = arm2.compile();
  Eigen::Vector4cd v;
  v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return v;
}

double coincidence_probability(const Eigen::Matrix4cd &rho, const MeasurementSetting &s) {
  const Eigen::Vector4cd v = s.projector_vector();
  return (v.adjoint() * rho * v)(0, 0).real();
}

double coincidence_probability(const DensityMatrix &rho, const MeasurementSetting &s) {
  if (rho.dim() != 4) throw std::invalid_argument("coincidence_probability needs a two-qubit state");
  return coincidence_probability(Eigen::Matrix4cd(rho.matrix()), s);
}

std::int64_t sample_counts(double prob, double mean_total, std::uint64_t seed) {
  const double mean = prob * mean_total;
  if (!(mean > 0.0)) return 0;
  std::mt19937_64 rng(seed);
  std::poisson_distribution<std::int64_t> poisson(mean);
  return poisson(rng);
}

StateEnsemble chain_output(const OpticalChain &chain, double tau) {
  SourceModel source = chain.source;
  source.delay = tau;
  const StateMixture prepared = prepare_state(chain.hwp_angle, source, chain.shape);
  if (!chain.aperture) return StateEnsemble::from(prepared);
  return aperture_channel(prepared, *chain.aperture).ensemble;
}

double cross_circular_probability(const StateEnsemble &ensemble) {
  const Eigen::Matrix4cd rho = coincidence_operator(ensemble);
  return rho(two_qubit_index(+1, -1), two_qubit_index(+1, -1)).real() +
         rho(two_qubit_index(-1, +1), two_qubit_index(-1, +1)).real();
}

namespace {

double asymptote(const OpticalChain &chain) {
  const double base = cross_circular_probability(chain_output(chain, std::numeric_limits<double>::infinity()));
  if (!(base > 0.0)) throw std::domain_error("HOM scan asymptote is zero");
  return base;
}

}  // namespace

HomScan hom_scan(const OpticalChain &chain, const std::vector<double> &delays, std::string label) {
  HomScan scan{std::move(label), asymptote(chain), {}};
  for (double tau : delays) {
    const double p = cross_circular_probability(chain_output(chain, tau));
    scan.points.push_back({tau, p / scan.baseline, 0.0, p});
  }
  return scan;
}

HomScan hom_scan_sampled(const OpticalChain &chain, const std::vector<double> &delays,
                         const HomSampling &sampling, std::string label) {
  if (sampling.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  HomScan scan = hom_scan(chain, delays, std::move(label));
  const double expected_baseline = scan.baseline * sampling.pairs_per_point + sampling.dark_counts;
  const auto n = static_cast<std::size_t>(sampling.repeats);
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    auto &pt = scan.points[i];
    std::vector<double> rates(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto seed = derive_seed(sampling.seed, i * n + r);
      const auto counts =
          sample_counts(1.0, pt.probability * sampling.pairs_per_point + sampling.dark_counts, seed);
      rates[r] = static_cast<double>(counts) / expected_baseline;
    }
    double mean = 0.0;
    for (double x : rates) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : rates) var += (x - mean) * (x - mean);
    pt.rate_normalized = mean;
    pt.rate_std = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
  }
  return scan;
}

Visibility visibility(const HomScan &scan) {
  if (!(scan.baseline > 0.0)) throw std::invalid_argument("scan has no baseline");
  for (const auto &pt : scan.points) {
    if (pt.tau == 0.0) {
      const double raw = 1.0 - pt.rate_normalized;
      return {std::clamp(raw, 0.0, 1.0), raw};
    }
  }
  throw std::invalid_argument("scan has no zero-delay point");
}

}  // namespace nanoqi
