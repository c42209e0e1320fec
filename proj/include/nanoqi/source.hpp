#pragma once

#include "nanoqi/mode_algebra.hpp"
#include "nanoqi/optics.hpp"

namespace nanoqi {

/// Collinear SPDC pair source with a birefringent delay line.
struct SourceModel {
  double visibility = 1.0;    ///< HOM visibility ceiling V, gamma(0)^2 = V
  double sigma_tau = 1e-13;   ///< temporal width, seconds
  double delay = 0.0;         ///< relative delay tau, seconds (may be infinite)
  double noise_lambda = 1.0;  ///< weight of the intended state; rest is incoherent Psi0
  double pair_flux = 0.0;     ///< detected pairs per second

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// One H photon in temporal mode 0 and one V photon in
/// gamma * t0 + sqrt(1 - gamma^2) * t1. Both photons have l = 0 (m = helicity).
TwoPhotonState spdc_pair(const SourceModel &source, const DipShape &shape = gaussian_dip_shape);

/// SPDC pair -> hwp(hwp_angle) -> forward q-plate (q = 1/2), mixed with
/// incoherent Psi0 at weight 1 - noise_lambda. Component 0 is the coherent
/// state; a Psi0 component follows only when noise_lambda < 1.
StateMixture prepare_state(double hwp_angle, const SourceModel &source,
                           const DipShape &shape = gaussian_dip_shape);

/// The coherent component of prepare_state alone.
TwoPhotonState prepare_coherent(double hwp_angle, const SourceModel &source,
                                const DipShape &shape = gaussian_dip_shape);

}  // namespace nanoqi
