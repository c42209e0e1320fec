#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "nanoqi/metrics.hpp"
#include "oracles.hpp"

using namespace nanoqi;

namespace {

Eigen::Matrix4cd proj(const Eigen::Vector4cd &v) { return v * v.adjoint(); }

Eigen::Matrix4cd werner(double p) {
  return p * proj(oracle::bell(1)) + (1.0 - p) * Eigen::Matrix4cd::Identity() / 4.0;
}

// Wootters via the eigenvalues of rho (sy⊗sy) rho* (sy⊗sy), not its square root form.
double concurrence_oracle(const Eigen::Matrix4cd &rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
  std::vector<double> l;
  for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

double negativity_oracle(const Eigen::Matrix4cd &rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(oracle::transpose_second(rho));
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) sum += std::abs(es.eigenvalues()(i));
  return sum - 1.0;
}

}  // namespace

TEST(Concurrence, BellAndWerner) {
  for (int b = 0; b < 4; ++b) EXPECT_NEAR(concurrence(proj(oracle::bell(b))), 1.0, 1e-10);
  for (int i = 0; i <= 20; ++i) {
    const double p = i / 20.0;
    EXPECT_NEAR(concurrence(werner(p)), oracle::werner_concurrence(p), 1e-9) << p;
  }
  EXPECT_NEAR(concurrence(werner(0.5)), 0.25, 1e-12);
}

TEST(Concurrence, CalibrationState) {
  const Eigen::Matrix4cd rho = 0.62 * proj(oracle::bell(0)) + 0.38 * proj(oracle::bell(2));
  EXPECT_NEAR(concurrence(rho), 0.24, 1e-12);
  EXPECT_NEAR(negativity(rho), 0.24, 1e-12);
  EXPECT_NEAR(fidelity_to_pure(rho, oracle::bell(0)), 0.62, 1e-12);
  EXPECT_NEAR(purity(rho), 0.5288, 1e-12);
}

TEST(Concurrence, RandomStatesAgreeWithOracle) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Matrix4cd rho = oracle::random_state(rng, 1 + i % 4);
    EXPECT_NEAR(concurrence(rho), concurrence_oracle(rho), 1e-7);
    EXPECT_NEAR(negativity(rho), negativity_oracle(rho), 1e-10);
  }
}

TEST(Concurrence, RejectsWrongDimension) {
  EXPECT_THROW(concurrence(Eigen::MatrixXcd::Identity(2, 2)), std::invalid_argument);
}

TEST(Negativity, ProductStatesAreZero) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Matrix2cd u = oracle::random_unitary(rng), v = oracle::random_unitary(rng);
    Eigen::Vector4cd psi;
    psi << u(0, 0) * v(0, 0), u(0, 0) * v(1, 0), u(1, 0) * v(0, 0), u(1, 0) * v(1, 0);
    EXPECT_NEAR(negativity(proj(psi)), 0.0, 1e-10);
    EXPECT_NEAR(concurrence(proj(psi)), 0.0, 1e-10);
  }
  for (int b = 0; b < 4; ++b) EXPECT_NEAR(negativity(proj(oracle::bell(b))), 1.0, 1e-12);
}

TEST(PartialTranspose, MatchesIndexSwap) {
  std::mt19937_64 rng(14);
  const Eigen::Matrix4cd rho = oracle::random_state(rng);
  EXPECT_LT((partial_transpose_2(rho) - oracle::transpose_second(rho)).norm(), 1e-15);
}

TEST(Fidelity, PureAndMixed) {
  std::mt19937_64 rng(15);
  const Eigen::Matrix4cd mixed = Eigen::Matrix4cd::Identity() / 4.0;
  for (int i = 0; i < 20; ++i) {
    Eigen::Vector4cd psi = oracle::random_state(rng, 1).col(0);
    psi.normalize();
    EXPECT_NEAR(fidelity_to_pure(proj(psi), psi), 1.0, 1e-12);
    EXPECT_NEAR(fidelity_to_pure(mixed, psi), 0.25, 1e-12);
    EXPECT_NEAR(fidelity_to_pure(mixed, 3.0 * psi), 0.25, 1e-12);
    EXPECT_NEAR(fidelity(mixed, proj(psi)), 0.25, 1e-12);
  }
}

TEST(Fidelity, UhlmannProperties) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 30; ++i) {
    const Eigen::Matrix4cd a = oracle::random_state(rng), b = oracle::random_state(rng);
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-9);
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-9);
    const double f = fidelity(a, b), d = trace_distance(a, b);
    // Fuchs-van de Graaf.
    EXPECT_LE(1.0 - std::sqrt(f), d + 1e-9);
    EXPECT_LE(d, std::sqrt(1.0 - f) + 1e-9);
  }
}

TEST(Purity, Values) {
  EXPECT_NEAR(purity(proj(oracle::bell(3))), 1.0, 1e-15);
  EXPECT_NEAR(purity(Eigen::Matrix4cd::Identity() / 4.0), 0.25, 1e-15);
}

TEST(PsdSqrt, SquaresBack) {
  std::mt19937_64 rng(17);
  const Eigen::Matrix4cd rho = oracle::random_state(rng);
  const Eigen::MatrixXcd s = psd_sqrt(rho);
  EXPECT_LT((s * s - rho).norm(), 1e-12);
}

TEST(BellVectors, MatchOracleOrdering) {
  EXPECT_LT((bell::phi_plus() - oracle::bell(0)).norm(), 1e-15);
  EXPECT_LT((bell::phi_minus() - oracle::bell(1)).norm(), 1e-15);
  EXPECT_LT((bell::psi_plus() - oracle::bell(2)).norm(), 1e-15);
  EXPECT_LT((bell::psi_minus() - oracle::bell(3)).norm(), 1e-15);
}

TEST(MetricReport, Bundles) {
  const auto r = metric_report(proj(oracle::bell(1)), bell::phi_minus(), "minus");
  EXPECT_EQ(r.target_label, "minus");
  EXPECT_NEAR(r.concurrence, 1.0, 1e-10);
  EXPECT_NEAR(r.negativity, 1.0, 1e-12);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
  EXPECT_NEAR(r.purity, 1.0, 1e-12);
}
