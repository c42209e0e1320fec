#include "nanoqi/mode_algebra.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nanoqi {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Operator-form coefficients K: state = sum_{pairs} K_pair a†a†|0>.
using OperatorCoefficients = std::map<ModePair, cplx>;

OperatorCoefficients to_operator_form(const TwoPhotonState &state) {
  OperatorCoefficients k;
  for (const auto &[pair, c] : state.amplitudes())
    k[pair] = pair.doubly_occupied() ? c / kSqrt2 : c;
  return k;
}

TwoPhotonState from_operator_form(const OperatorCoefficients &k) {
  TwoPhotonState::Amplitudes out;
  for (const auto &[pair, c] : k) {
    if (c == cplx{}) continue;
    out[pair] = pair.doubly_occupied() ? c * kSqrt2 : c;
  }
  return TwoPhotonState(std::move(out));
}

// Accumulates coeff * (sum_k x_k b†_k)(sum_l y_l b†_l) into operator form.
void accumulate_product(OperatorCoefficients &k, cplx coeff, const SinglePhotonAmplitudes &x,
                        const SinglePhotonAmplitudes &y) {
  for (const auto &[mx, cx] : x) {
    for (const auto &[my, cy] : y) k[ModePair(mx, my)] += coeff * cx * cy;
  }
}

SinglePhotonAmplitudes map_or_throw(const SinglePhotonMap &map, const Mode &mode) {
  auto out = map.apply(mode);
  if (!out)
    throw std::domain_error("mode " + to_string(mode) + " outside the domain of map '" +
                            map.label + "'");
  return *out;
}

void require_m0(const Mode &mode) {
  if (mode.m != 0)
    throw std::domain_error("two-qubit picture needs m = 0 support, got " + to_string(mode));
}

}  // namespace

Mode::Mode(int m_, int helicity_, int temporal_) : m(m_), helicity(helicity_), temporal(temporal_) {
  if (helicity != 1 && helicity != -1) throw std::invalid_argument("helicity must be +1 or -1");
  if (temporal < 0) throw std::invalid_argument("temporal index must be non-negative");
}

std::string to_string(const Mode &mode) {
  return "(m=" + std::to_string(mode.m) + ", h=" + (mode.helicity > 0 ? "+" : "-") +
         ", t=" + std::to_string(mode.temporal) + ")";
}

ModePair::ModePair(Mode a, Mode b) : first(a), second(b) {
  if (second < first) std::swap(first, second);
}

TwoPhotonState::TwoPhotonState(Amplitudes amplitudes) : amplitudes_(std::move(amplitudes)) {}

cplx TwoPhotonState::amplitude(const Mode &a, const Mode &b) const {
  auto it = amplitudes_.find(ModePair(a, b));
  return it == amplitudes_.end() ? cplx{} : it->second;
}

double TwoPhotonState::squared_norm() const {
  double s = 0.0;
  for (const auto &[pair, c] : amplitudes_) s += std::norm(c);
  return s;
}

bool TwoPhotonState::normalized() const { return std::abs(squared_norm() - 1.0) <= 1e-12; }

bool TwoPhotonState::empty() const { return squared_norm() == 0.0; }

TwoPhotonState TwoPhotonState::normalized_copy() const {
  const double n = squared_norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero state");
  return scaled(1.0 / std::sqrt(n));
}

TwoPhotonState TwoPhotonState::scaled(cplx factor) const {
  Amplitudes out;
  for (const auto &[pair, c] : amplitudes_) out[pair] = c * factor;
  return TwoPhotonState(std::move(out));
}

TwoPhotonState TwoPhotonState::operator+(const TwoPhotonState &other) const {
  Amplitudes out = amplitudes_;
  for (const auto &[pair, c] : other.amplitudes_) out[pair] += c;
  return TwoPhotonState(std::move(out));
}

TwoPhotonState TwoPhotonState::pruned(double tol) const {
  Amplitudes out;
  for (const auto &[pair, c] : amplitudes_)
    if (std::abs(c) > tol) out[pair] = c;
  return TwoPhotonState(std::move(out));
}

std::vector<Mode> TwoPhotonState::support() const {
  std::vector<Mode> modes;
  for (const auto &[pair, c] : amplitudes_) {
    if (c == cplx{}) continue;
    for (const Mode &m : {pair.first, pair.second})
      if (std::find(modes.begin(), modes.end(), m) == modes.end()) modes.push_back(m);
  }
  std::sort(modes.begin(), modes.end());
  return modes;
}

TwoPhotonState two_photon_product(const SinglePhotonAmplitudes &f, const SinglePhotonAmplitudes &g) {
  OperatorCoefficients k;
  accumulate_product(k, 1.0, f, g);
  return from_operator_form(k);
}

TwoPhotonState make_basis_state(BasisKind kind, int temporal) {
  const Mode plus(0, +1, temporal), minus(0, -1, temporal);
  const double h = 1.0 / kSqrt2;
  switch (kind) {
    case BasisKind::Psi0:
      return TwoPhotonState({{ModePair(plus, minus), 1.0}});
    case BasisKind::PsiPlus:
      return TwoPhotonState({{ModePair(plus, plus), h}, {ModePair(minus, minus), h}});
    case BasisKind::PsiMinus:
      return TwoPhotonState({{ModePair(plus, plus), h}, {ModePair(minus, minus), -h}});
  }
  throw std::invalid_argument("unknown basis kind");
}

SinglePhotonMap identity_map() {
  return {"identity", [](const Mode &m) -> std::optional<SinglePhotonAmplitudes> {
            return SinglePhotonAmplitudes{{m, 1.0}};
          }};
}

SinglePhotonMap compose(const SinglePhotonMap &outer, const SinglePhotonMap &inner) {
  return {outer.label + " * " + inner.label,
          [outer, inner](const Mode &mode) -> std::optional<SinglePhotonAmplitudes> {
            auto mid = inner.apply(mode);
            if (!mid) return std::nullopt;
            std::map<Mode, cplx> acc;
            for (const auto &[m1, c1] : *mid) {
              auto out = outer.apply(m1);
              if (!out) return std::nullopt;
              for (const auto &[m2, c2] : *out) acc[m2] += c1 * c2;
            }
            return SinglePhotonAmplitudes(acc.begin(), acc.end());
          }};
}

TwoPhotonState apply_pair_map(const TwoPhotonState &state, const SinglePhotonMap &first,
                              const SinglePhotonMap &second) {
  // state = 1/2 sum_ij S_ij a†_i a†_j with S symmetric; the pair map sends
  // a†_i a†_j to (first a_i)†(second a_j)†.
  OperatorCoefficients out;
  for (const auto &[pair, k] : to_operator_form(state)) {
    if (k == cplx{}) continue;
    const auto a1 = map_or_throw(first, pair.first), a2 = map_or_throw(second, pair.first);
    if (pair.doubly_occupied()) {
      accumulate_product(out, k, a1, a2);
    } else {
      const auto b1 = map_or_throw(first, pair.second), b2 = map_or_throw(second, pair.second);
      accumulate_product(out, 0.5 * k, a1, b2);
      accumulate_product(out, 0.5 * k, b1, a2);
    }
  }
  return from_operator_form(out);
}

TwoPhotonState apply_single_photon_map(const TwoPhotonState &state, const SinglePhotonMap &map) {
  OperatorCoefficients out;
  for (const auto &[pair, k] : to_operator_form(state)) {
    if (k == cplx{}) continue;
    const auto a = map_or_throw(map, pair.first);
    accumulate_product(out, k, a, pair.doubly_occupied() ? a : map_or_throw(map, pair.second));
  }
  return from_operator_form(out);
}

cplx inner(const TwoPhotonState &a, const TwoPhotonState &b) {
  cplx s{};
  for (const auto &[pair, ca] : a.amplitudes()) s += std::conj(ca) * b.amplitude(pair.first, pair.second);
  return s;
}

StateMixture mix(std::vector<std::pair<double, TwoPhotonState>> components) {
  double total = 0.0;
  for (const auto &[w, s] : components) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture weights must be non-negative");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("mixture weights are all zero");
  StateMixture m;
  for (auto &[w, s] : components) {
    if (s.empty()) throw std::invalid_argument("mixture component is the zero state");
    m.components_.push_back({w / total, s.normalized() ? std::move(s) : s.normalized_copy()});
  }
  return m;
}

double StateEnsemble::trace() const {
  double t = 0.0;
  for (const auto &b : branches) t += b.squared_norm();
  return t;
}

StateEnsemble StateEnsemble::from(const TwoPhotonState &state) { return {{state}}; }

StateEnsemble StateEnsemble::from(const StateMixture &mixture) {
  StateEnsemble e;
  for (const auto &c : mixture.components()) e.branches.push_back(c.state.scaled(std::sqrt(c.weight)));
  return e;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, double conditional_weight)
    : entries_(std::move(entries)), weight_(conditional_weight) {
  if (entries_.rows() != entries_.cols()) throw std::invalid_argument("density matrix must be square");
}

bool DensityMatrix::valid(std::string *reason) const {
  auto fail = [&](const char *why) {
    if (reason) *reason = why;
    return false;
  };
  if (dim() == 0) return fail("empty matrix");
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) return fail("not Hermitian");
  if (std::abs(entries_.trace() - cplx(1.0)) > 1e-10) return fail("trace differs from 1");
  if (weight_ < 0.0 || !std::isfinite(weight_)) return fail("invalid conditional weight");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (entries_ + entries_.adjoint()));
  if (es.eigenvalues().minCoeff() < -1e-9) return fail("negative eigenvalue");
  return true;
}

int two_qubit_index(int helicity_arm1, int helicity_arm2) {
  return (helicity_arm1 > 0 ? 0 : 2) + (helicity_arm2 > 0 ? 0 : 1);
}

Eigen::Matrix4cd coincidence_operator(const TwoPhotonState &state) {
  // Each a†_i -> (c†_i + d†_i)/sqrt(2). The one-per-arm amplitude for mode i
  // in arm c and mode j in arm d is S_ij / 2, with S the symmetric operator
  // coefficients. Distinct temporal label pairs are orthogonal and summed.
  std::map<std::pair<int, int>, Eigen::Vector4cd> per_temporal;
  auto add = [&](const Mode &c_mode, const Mode &d_mode, cplx amp) {
    auto [it, inserted] = per_temporal.try_emplace({c_mode.temporal, d_mode.temporal},
                                                   Eigen::Vector4cd::Zero());
    it->second(two_qubit_index(c_mode.helicity, d_mode.helicity)) += amp;
  };
  for (const auto &[pair, c] : state.amplitudes()) {
    if (c == cplx{}) continue;
    require_m0(pair.first);
    require_m0(pair.second);
    if (pair.doubly_occupied()) {
      add(pair.first, pair.first, c / kSqrt2);  // S_aa / 2 = sqrt(2) c / 2
    } else {
      add(pair.first, pair.second, 0.5 * c);
      add(pair.second, pair.first, 0.5 * c);
    }
  }
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto &[key, v] : per_temporal) rho += v * v.adjoint();
  return rho;
}

Eigen::Matrix4cd coincidence_operator(const StateEnsemble &ensemble) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto &b : ensemble.branches) rho += coincidence_operator(b);
  return rho;
}

namespace {

TwoQubitImage normalize_image(const Eigen::Matrix4cd &unnormalized) {
  const double p = unnormalized.trace().real();
  if (p <= 0.0) throw std::domain_error("zero coincidence probability");
  Eigen::MatrixXcd rho = unnormalized / p;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return {DensityMatrix(std::move(rho), p), p};
}

}  // namespace

TwoQubitImage to_two_qubit(const TwoPhotonState &state) {
  return normalize_image(coincidence_operator(state));
}

TwoQubitImage to_two_qubit(const StateMixture &mixture) {
  return normalize_image(coincidence_operator(StateEnsemble::from(mixture)));
}

TwoQubitImage to_two_qubit(const StateEnsemble &ensemble) {
  return normalize_image(coincidence_operator(ensemble));
}

}  // namespace nanoqi
