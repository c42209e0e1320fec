#include "nanoqi/source.hpp"

#include <cmath>
#include <stdexcept>

namespace nanoqi {

namespace {

// Gaussian-beam photon (l = 0) with polarization `jones` in temporal mode t.
SinglePhotonAmplitudes paraxial_photon(const Jones &jones, int temporal, cplx scale = 1.0) {
  const Jones h = helicity_components(jones);
  SinglePhotonAmplitudes out;
  if (h(0) != cplx{}) out.push_back({Mode(+1, +1, temporal), scale * h(0)});
  if (h(1) != cplx{}) out.push_back({Mode(-1, -1, temporal), scale * h(1)});
  return out;
}

}  // namespace

void SourceModel::validate() const {
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw std::invalid_argument("visibility must lie in [0, 1]");
  if (!(sigma_tau > 0.0)) throw std::invalid_argument("sigma_tau must be positive");
  if (!(noise_lambda >= 0.0 && noise_lambda <= 1.0)) throw std::invalid_argument("noise_lambda must lie in [0, 1]");
  if (!(pair_flux >= 0.0)) throw std::invalid_argument("pair_flux must be non-negative");
  if (std::isnan(delay)) throw std::invalid_argument("delay must be a number");
}

TwoPhotonState spdc_pair(const SourceModel &source, const DipShape &shape) {
  const double gamma = temporal_overlap(source.delay, source, shape);
  const double rest = std::sqrt(std::max(0.0, 1.0 - gamma * gamma));
  SinglePhotonAmplitudes second = paraxial_photon(polarization::V(), 0, gamma);
  if (rest > 0.0) {
    const auto late = paraxial_photon(polarization::V(), 1, rest);
    second.insert(second.end(), late.begin(), late.end());
  }
  return two_photon_product(paraxial_photon(polarization::H(), 0), second).pruned();
}

TwoPhotonState prepare_coherent(double hwp_angle, const SourceModel &source, const DipShape &shape) {
  const auto chain = compose(qplate({1, QPlateSpec::Direction::Forward}), hwp(hwp_angle).map());
  return apply_single_photon_map(spdc_pair(source, shape), chain).pruned(1e-15);
}

StateMixture prepare_state(double hwp_angle, const SourceModel &source, const DipShape &shape) {
  source.validate();
  std::vector<std::pair<double, TwoPhotonState>> parts;
  parts.emplace_back(source.noise_lambda, prepare_coherent(hwp_angle, source, shape));
  if (source.noise_lambda < 1.0) parts.emplace_back(1.0 - source.noise_lambda, make_basis_state(BasisKind::Psi0));
  if (source.noise_lambda == 0.0) parts.erase(parts.begin());
  return mix(std::move(parts));
}

}  // namespace nanoqi
