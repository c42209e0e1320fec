#include <gtest/gtest.h>

#include <cmath>

#include "nanoqi/metrics.hpp"
#include "nanoqi/source.hpp"
#include "oracles.hpp"

using namespace nanoqi;

namespace {

SourceModel source(double visibility, double delay, double lambda = 1.0) {
  SourceModel s;
  s.visibility = visibility;
  s.sigma_tau = 100e-15;
  s.delay = delay;
  s.noise_lambda = lambda;
  return s;
}

// H photon at label 0, V photon split over labels 0/1, then HWP and a
// helicity-swapping q-plate acting per label, all as explicit matrices.
oracle::Fock reference_prepare(double hwp_angle, double gamma) {
  Eigen::Matrix2cd swap;
  swap << 0, 1, 1, 0;
  const Eigen::Matrix2cd chain = swap * hwp(hwp_angle).helicity_matrix();
  const Jones h = helicity_components(polarization::H()), v = helicity_components(polarization::V());
  oracle::Vec u = oracle::Vec::Zero(4), w = oracle::Vec::Zero(4);
  u.head(2) = chain * h;
  w.head(2) = gamma * (chain * v);
  w.tail(2) = std::sqrt(1.0 - gamma * gamma) * (chain * v);
  return oracle::product(u, w);
}

}  // namespace

TEST(SpdcPair, PerfectOverlapIsOneTemporalMode) {
  const auto s = spdc_pair(source(1.0, 0.0));
  for (const auto &m : s.support()) EXPECT_EQ(m.temporal, 0);
  EXPECT_NEAR(s.squared_norm(), 1.0, 1e-14);
  // |1_H 1_V> = (a_R^2 - a_L^2)·i/2 in helicity modes: only doubly occupied pairs.
  for (const auto &[pair, amp] : s.amplitudes()) EXPECT_TRUE(pair.doubly_occupied());
}

TEST(SpdcPair, LargeDelaySeparatesPhotons) {
  const auto s = spdc_pair(source(1.0, INFINITY));
  for (const auto &[pair, amp] : s.amplitudes()) EXPECT_NE(pair.first.temporal, pair.second.temporal);
  EXPECT_NEAR(s.squared_norm(), 1.0, 1e-14);
}

TEST(SpdcPair, SharedModeAmplitudeIsGamma) {
  const auto s = spdc_pair(source(0.9, 0.0));
  double shared = 0.0;
  for (const auto &[pair, amp] : s.amplitudes())
    if (pair.first.temporal == 0 && pair.second.temporal == 0) shared += std::norm(amp);
  EXPECT_NEAR(shared, 0.9, 1e-14);
}

TEST(PrepareState, ZeroAngleGivesPsiMinus) {
  const auto st = prepare_coherent(0.0, source(1.0, 0.0));
  EXPECT_NEAR(std::norm(inner(make_basis_state(BasisKind::PsiMinus), st)), 1.0, 1e-10);
}

TEST(PrepareState, EighthTurnGivesPsiPlus) {
  const auto st = prepare_coherent(M_PI / 8, source(1.0, 0.0));
  EXPECT_NEAR(std::norm(inner(make_basis_state(BasisKind::PsiPlus), st)), 1.0, 1e-10);
}

TEST(PrepareState, MatchesMatrixOracle) {
  for (double angle : {0.0, M_PI / 8, 0.3, 1.1})
    for (double tau : {0.0, 80e-15, 250e-15}) {
      const auto src = source(0.9, tau);
      const double gamma = temporal_overlap(tau, src);
      const auto lib = oracle::from_library(prepare_coherent(angle, src), 2);
      EXPECT_LT((lib.c - reference_prepare(angle, gamma).c).norm(), 1e-12) << angle << " " << tau;
    }
}

TEST(PrepareState, CalibrationMixture) {
  const auto mixture = prepare_state(M_PI / 8, source(1.0, 0.0, 0.62));
  ASSERT_EQ(mixture.size(), 2u);
  EXPECT_NEAR(mixture.components()[0].weight, 0.62, 1e-15);
  EXPECT_NEAR(mixture.components()[1].weight, 0.38, 1e-15);
  const auto img = to_two_qubit(mixture);
  EXPECT_NEAR(fidelity_to_pure(img.rho.matrix(), oracle::bell(0)), 0.62, 1e-10);
}

TEST(PrepareState, ValidatesSource) {
  EXPECT_THROW(prepare_state(0.0, source(1.2, 0.0)), std::invalid_argument);
  EXPECT_THROW(prepare_state(0.0, source(1.0, 0.0, -0.1)), std::invalid_argument);
  auto bad = source(1.0, 0.0);
  bad.sigma_tau = -1.0;
  EXPECT_THROW(prepare_state(0.0, bad), std::invalid_argument);
}

TEST(PrepareState, ImageDriftsMonotonicallyWithDelay) {
  for (double angle : {0.0, M_PI / 8}) {
    const Eigen::MatrixXcd start = to_two_qubit(prepare_state(angle, source(0.9, 0.0))).rho.matrix();
    double last = 0.0;
    for (double tau = 0.0; tau <= 1000e-15; tau += 20e-15) {
      const Eigen::MatrixXcd rho = to_two_qubit(prepare_state(angle, source(0.9, tau))).rho.matrix();
      const double d = trace_distance(start, rho);
      EXPECT_GE(d, last - 1e-12);
      last = d;
    }
    EXPECT_GT(last, 0.3);
  }
}
