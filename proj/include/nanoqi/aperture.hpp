#pragma once

// Circular nanoaperture as a helicity-mixing channel on m = 0 photon pairs.
//
// Each photon maps a†_{0,s} -> alpha b†_{0,s} + beta b†_{0,-s}. Dephasing is
// modeled by an environment that every helicity flip drives with the same
// involution U, <e|U|e> = eta. Photons sharing a temporal mode share one
// environment, so only the parity of their flips is recorded; photons in
// different temporal modes meet independent environments. eta = 1 is the
// coherent map. Psi- has no odd-flip branch and is therefore never dephased.

#include <map>
#include <utility>
#include <vector>

#include "nanoqi/mode_algebra.hpp"

namespace nanoqi {

struct ApertureCoefficients {
  cplx alpha{1.0, 0.0};  ///< helicity preserving
  cplx beta{0.0, 0.0};   ///< helicity flipping
  double eta = 1.0;      ///< flip/no-flip pathway coherence
  /// Optional (m, helicity) -> (alpha, beta) entries for m != 0 modes.
  std::map<std::pair<int, int>, std::pair<cplx, cplx>> table;

  /// Throws std::invalid_argument unless |alpha|^2 + |beta|^2 <= 1 + 1e-12
  /// (also for every table entry) and eta lies in [0, 1].
  void validate() const;
};

/// True iff every table entry (m, s) has an identical (-m, -s) partner.
bool check_mirror_symmetry(const ApertureCoefficients &c);

/// True when the single-photon map has operator norm above one, i.e.
/// max(|alpha + beta|, |alpha - beta|) > 1.
bool super_unitary(const ApertureCoefficients &c);

/// Single-photon map; m = 0 uses (alpha, beta), other m need a table entry.
SinglePhotonMap aperture_map(const ApertureCoefficients &c);

/// Coherent action on an m = 0 state (eta ignored). The squared norm of the
/// result is the two-photon transmission weight. Throws std::domain_error
/// for support outside m = 0.
TwoPhotonState aperture_pure(const TwoPhotonState &state, const ApertureCoefficients &c);

/// Even- and odd-flip-count parts of the coherent output.
struct FlipSectors {
  TwoPhotonState even;
  TwoPhotonState odd;
};
FlipSectors flip_sectors(const TwoPhotonState &state, const ApertureCoefficients &c);

/// Conditional channel output: `ensemble` is unnormalized with trace equal
/// to `transmission`.
struct ChannelOutput {
  StateEnsemble ensemble;
  double transmission = 0.0;

  /// Normalized density operator over the occupation basis of the output
  /// support (basis order is the sorted ModePair order).
  DensityMatrix density() const;
  std::vector<ModePair> basis() const;
  /// <psi|rho|psi> for the normalized output.
  double fidelity_to(const TwoPhotonState &pure) const;
  double purity() const;
};

ChannelOutput aperture_channel(const TwoPhotonState &state, const ApertureCoefficients &c);
/// Components are weighted by their own transmission. Throws
/// std::invalid_argument for invalid coefficients.
ChannelOutput aperture_channel(const StateMixture &input, const ApertureCoefficients &c);
ChannelOutput aperture_channel(const StateEnsemble &input, const ApertureCoefficients &c);

/// Squared norm of aperture_pure(state). Dephasing does not change it for the
/// m = 0 basis states.
double transmission_probability(const TwoPhotonState &state, const ApertureCoefficients &c);

}  // namespace nanoqi
