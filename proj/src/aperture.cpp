#include "nanoqi/aperture.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nanoqi {

namespace {

void check_entry(cplx alpha, cplx beta, const char *what) {
  if (std::norm(alpha) + std::norm(beta) > 1.0 + 1e-12)
    throw std::invalid_argument(std::string(what) + ": |alpha|^2 + |beta|^2 exceeds 1");
}

void require_m0_support(const TwoPhotonState &state) {
  for (const Mode &m : state.support())
    if (m.m != 0) throw std::domain_error("aperture channel needs m = 0 support, got " + to_string(m));
}

// a†_s -> scale * b†_s  or  a†_s -> scale * b†_{-s}, m = 0 only.
SinglePhotonMap scaled_helicity_map(cplx scale, bool flip) {
  return {flip ? "flip" : "keep", [scale, flip](const Mode &mode) -> std::optional<SinglePhotonAmplitudes> {
            if (mode.m != 0) return std::nullopt;
            return SinglePhotonAmplitudes{{Mode(0, flip ? -mode.helicity : mode.helicity, mode.temporal), scale}};
          }};
}

}  // namespace

void ApertureCoefficients::validate() const {
  check_entry(alpha, beta, "aperture");
  for (const auto &[key, ab] : table) check_entry(ab.first, ab.second, "aperture table");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("aperture: eta must lie in [0, 1]");
}

bool check_mirror_symmetry(const ApertureCoefficients &c) {
  for (const auto &[key, ab] : c.table) {
    auto it = c.table.find({-key.first, -key.second});
    if (it == c.table.end() || it->second != ab) return false;
  }
  return true;
}

bool super_unitary(const ApertureCoefficients &c) {
  return std::max(std::abs(c.alpha + c.beta), std::abs(c.alpha - c.beta)) > 1.0 + 1e-12;
}

SinglePhotonMap aperture_map(const ApertureCoefficients &c) {
  return {"aperture", [c](const Mode &mode) -> std::optional<SinglePhotonAmplitudes> {
            cplx alpha = c.alpha, beta = c.beta;
            if (mode.m != 0) {
              auto it = c.table.find({mode.m, mode.helicity});
              if (it == c.table.end()) return std::nullopt;
              std::tie(alpha, beta) = it->second;
            }
            return SinglePhotonAmplitudes{{Mode(mode.m, mode.helicity, mode.temporal), alpha},
                                          {Mode(mode.m, -mode.helicity, mode.temporal), beta}};
          }};
}

TwoPhotonState aperture_pure(const TwoPhotonState &state, const ApertureCoefficients &c) {
  require_m0_support(state);
  return apply_single_photon_map(state, aperture_map(c));
}

FlipSectors flip_sectors(const TwoPhotonState &state, const ApertureCoefficients &c) {
  require_m0_support(state);
  const auto keep = scaled_helicity_map(c.alpha, false);
  const auto flip = scaled_helicity_map(c.beta, true);
  return {apply_single_photon_map(state, keep) + apply_single_photon_map(state, flip),
          apply_pair_map(state, keep, flip).scaled(2.0)};
}

namespace {

using Parity = std::map<int, int>;  // temporal label -> flip parity

// Coherent output split by flip parity per temporal label.
std::map<Parity, TwoPhotonState> parity_sectors(const TwoPhotonState &state, const ApertureCoefficients &c,
                                                const std::set<int> &labels) {
  const auto keep = scaled_helicity_map(c.alpha, false);
  const auto flip = scaled_helicity_map(c.beta, true);
  Parity zero;
  for (int k : labels) zero[k] = 0;

  std::map<std::pair<int, int>, TwoPhotonState::Amplitudes> pieces;
  for (const auto &[pair, amp] : state.amplitudes()) pieces[{pair.first.temporal, pair.second.temporal}][pair] = amp;

  std::map<Parity, TwoPhotonState> out;
  for (const auto &[tt, amps] : pieces) {
    const TwoPhotonState piece(amps);
    const auto [k1, k2] = tt;
    if (k1 == k2) {
      const auto [even, odd] = flip_sectors(piece, c);
      Parity p = zero;
      out[p] = out[p] + even;
      p[k1] = 1;
      out[p] = out[p] + odd;
      continue;
    }
    for (int p1 : {0, 1})
      for (int p2 : {0, 1}) {
        const SinglePhotonMap pattern{"pattern", [&, p1, p2](const Mode &m) {
                                        const bool f = m.temporal == k1 ? p1 : p2;
                                        return (f ? flip : keep).apply(m);
                                      }};
        Parity p = zero;
        p[k1] = p1;
        p[k2] = p2;
        out[p] = out[p] + apply_single_photon_map(piece, pattern);
      }
  }
  return out;
}

}  // namespace

ChannelOutput aperture_channel(const StateEnsemble &input, const ApertureCoefficients &c) {
  c.validate();
  // One environment per temporal label, |e> = (1, 0) and U|e> = (eta, s) with
  // s = sqrt(1 - eta^2). Sector p carries the product over labels of
  // U^{p_k}|e>; expanding in the environment basis j gives branches
  // sum_p prod_k B(p_k, j_k) chi_p with B = [[1, 0], [eta, s]].
  const double orth = std::sqrt(std::max(0.0, 1.0 - c.eta * c.eta));
  const double b[2][2] = {{1.0, 0.0}, {c.eta, orth}};
  ChannelOutput out;
  for (const auto &branch : input.branches) {
    require_m0_support(branch);
    std::set<int> labels;
    for (const Mode &m : branch.support()) labels.insert(m.temporal);
    const auto sectors = parity_sectors(branch, c, labels);
    const std::vector<int> label_list(labels.begin(), labels.end());
    const std::size_t n = label_list.size();
    for (std::size_t j = 0; j < (std::size_t{1} << n); ++j) {
      TwoPhotonState chi;
      for (const auto &[p, sector] : sectors) {
        double w = 1.0;
        for (std::size_t i = 0; i < n; ++i) w *= b[p.at(label_list[i])][(j >> i) & 1];
        if (w != 0.0) chi = chi + sector.scaled(w);
      }
      chi = chi.pruned();
      if (!chi.empty()) out.ensemble.branches.push_back(std::move(chi));
    }
  }
  out.transmission = out.ensemble.trace();
  return out;
}

ChannelOutput aperture_channel(const TwoPhotonState &state, const ApertureCoefficients &c) {
  return aperture_channel(StateEnsemble::from(state), c);
}

ChannelOutput aperture_channel(const StateMixture &input, const ApertureCoefficients &c) {
  return aperture_channel(StateEnsemble::from(input), c);
}

std::vector<ModePair> ChannelOutput::basis() const {
  std::set<ModePair> pairs;
  for (const auto &b : ensemble.branches)
    for (const auto &[pair, amp] : b.amplitudes()) pairs.insert(pair);
  return {pairs.begin(), pairs.end()};
}

DensityMatrix ChannelOutput::density() const {
  if (transmission <= 0.0) throw std::domain_error("channel output has zero transmission");
  const auto pairs = basis();
  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (const auto &b : ensemble.branches) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = b.amplitude(pairs[i].first, pairs[i].second);
    rho += v * v.adjoint();
  }
  return DensityMatrix(rho / transmission, transmission);
}

double ChannelOutput::fidelity_to(const TwoPhotonState &pure) const {
  if (transmission <= 0.0) throw std::domain_error("channel output has zero transmission");
  const TwoPhotonState target = pure.normalized_copy();
  double f = 0.0;
  for (const auto &b : ensemble.branches) f += std::norm(inner(target, b));
  return f / transmission;
}

double ChannelOutput::purity() const {
  const auto rho = density().matrix();
  return (rho * rho).trace().real();
}

double transmission_probability(const TwoPhotonState &state, const ApertureCoefficients &c) {
  return aperture_pure(state, c).squared_norm();
}

}  // namespace nanoqi
