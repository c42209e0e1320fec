#pragma once

// Two-photon bosonic states over (m, helicity, temporal) modes.
//
// States are stored in the orthonormal occupation basis: one amplitude per
// unordered mode pair, where a pair (a, a) means |2_a> and a pair (a, b)
// with a != b means |1_a 1_b>. The factor sqrt(2) between a†a†|0> and |2_a>
// is handled only inside this module.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nanoqi {

using cplx = std::complex<double>;

/// Quantum numbers of a single photon. Orbital angular momentum is m - helicity.
struct Mode {
  int m = 0;
  int helicity = +1;
  int temporal = 0;

  Mode() = default;
  Mode(int m_, int helicity_, int temporal_ = 0);

  int orbital() const { return m - helicity; }
  auto operator<=>(const Mode &) const = default;
};

std::string to_string(const Mode &mode);

/// Unordered mode pair, stored with first <= second.
struct ModePair {
  Mode first;
  Mode second;

  ModePair(Mode a, Mode b);
  bool doubly_occupied() const { return first == second; }
  auto operator<=>(const ModePair &) const = default;
};

/// Superposition of single-photon modes, a†_f = sum_k c_k a†_k.
using SinglePhotonAmplitudes = std::vector<std::pair<Mode, cplx>>;

class TwoPhotonState {
 public:
  using Amplitudes = std::map<ModePair, cplx>;

  TwoPhotonState() = default;
  explicit TwoPhotonState(Amplitudes amplitudes);

  /// Occupation amplitude of a pair, zero when absent.
  cplx amplitude(const Mode &a, const Mode &b) const;
  const Amplitudes &amplitudes() const { return amplitudes_; }

  double squared_norm() const;
  /// True when the squared norm is 1 within 1e-12.
  bool normalized() const;
  bool empty() const;

  TwoPhotonState normalized_copy() const;
  TwoPhotonState scaled(cplx factor) const;
  TwoPhotonState operator+(const TwoPhotonState &other) const;

  /// Drops amplitudes with magnitude below `tol`.
  TwoPhotonState pruned(double tol = 0.0) const;

  /// Every mode that carries nonzero amplitude.
  std::vector<Mode> support() const;

 private:
  Amplitudes amplitudes_;
};

/// a†_f a†_g |0>, re-expanded into occupation amplitudes.
TwoPhotonState two_photon_product(const SinglePhotonAmplitudes &f,
                                  const SinglePhotonAmplitudes &g);

enum class BasisKind { Psi0, PsiPlus, PsiMinus };

/// The three m = 0 two-photon states spanned by a†_{0,+} and a†_{0,-}.
TwoPhotonState make_basis_state(BasisKind kind, int temporal = 0);

/// A linear map on single-photon creation operators. `apply` returns nullopt
/// for modes outside the map's domain.
struct SinglePhotonMap {
  std::string label;
  std::function<std::optional<SinglePhotonAmplitudes>(const Mode &)> apply;
};

SinglePhotonMap identity_map();
/// Applies `inner` first, then `outer`.
SinglePhotonMap compose(const SinglePhotonMap &outer, const SinglePhotonMap &inner);

/// Maps each creation operator and re-expands the product. Throws
/// std::domain_error when a supported mode is outside the map's domain.
TwoPhotonState apply_single_photon_map(const TwoPhotonState &state, const SinglePhotonMap &map);

/// Symmetrised (first ⊗ second) action on the two creation operators. With
/// first == second this equals apply_single_photon_map.
TwoPhotonState apply_pair_map(const TwoPhotonState &state, const SinglePhotonMap &first,
                              const SinglePhotonMap &second);

/// <a|b>, conjugate-linear in the first argument.
cplx inner(const TwoPhotonState &a, const TwoPhotonState &b);

/// Incoherent admixture of normalized states with weights summing to one.
class StateMixture {
 public:
  struct Component {
    double weight;
    TwoPhotonState state;
  };

  const std::vector<Component> &components() const { return components_; }
  std::size_t size() const { return components_.size(); }

 private:
  friend StateMixture mix(std::vector<std::pair<double, TwoPhotonState>> components);
  std::vector<Component> components_;
};

/// Renormalizes weights to sum to one (order preserved). Throws
/// std::invalid_argument for negative or all-zero weights.
StateMixture mix(std::vector<std::pair<double, TwoPhotonState>> components);

/// Unnormalized pure branches; the operator is sum_k |b_k><b_k|. Used for
/// conditional channel outputs whose trace is a post-selection weight.
struct StateEnsemble {
  std::vector<TwoPhotonState> branches;

  double trace() const;
  static StateEnsemble from(const TwoPhotonState &state);
  static StateEnsemble from(const StateMixture &mixture);
};

/// Hermitian PSD operator with unit trace, or a conditional operator whose
/// normalized form is stored with its post-selection weight alongside.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Eigen::MatrixXcd entries, double conditional_weight = 1.0);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXcd &matrix() const { return entries_; }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }
  double conditional_weight() const { return weight_; }

  /// Checks Hermiticity (1e-10), eigenvalues >= -1e-9 and unit trace (1e-10).
  bool valid(std::string *reason = nullptr) const;

 private:
  Eigen::MatrixXcd entries_;
  double weight_ = 1.0;
};

/// Post-selected image in the two-qubit helicity picture.
struct TwoQubitImage {
  DensityMatrix rho;               ///< basis order ++, +-, -+, --
  double coincidence_probability;  ///< one photon per splitter arm
};

/// Unnormalized one-photon-per-arm operator after a 50:50 splitter, with
/// temporal labels traced out (bucket detection). Its trace is the
/// coincidence probability. Throws std::domain_error for support off m = 0.
Eigen::Matrix4cd coincidence_operator(const TwoPhotonState &state);
Eigen::Matrix4cd coincidence_operator(const StateEnsemble &ensemble);

TwoQubitImage to_two_qubit(const TwoPhotonState &state);
TwoQubitImage to_two_qubit(const StateMixture &mixture);
TwoQubitImage to_two_qubit(const StateEnsemble &ensemble);

/// Two-qubit index of a helicity pair in the ++, +-, -+, -- ordering.
int two_qubit_index(int helicity_arm1, int helicity_arm2);

}  // namespace nanoqi
