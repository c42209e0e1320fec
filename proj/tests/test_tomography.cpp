#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nanoqi/metrics.hpp"
#include "nanoqi/tomography.hpp"
#include "oracles.hpp"

using namespace nanoqi;

namespace {

Eigen::Matrix4cd proj(const Eigen::Vector4cd &v) { return v * v.adjoint(); }

const Eigen::Matrix4cd kMixed = Eigen::Matrix4cd::Identity() / 4.0;

Eigen::Matrix4cd calibration_state() { return 0.62 * proj(oracle::bell(0)) + 0.38 * proj(oracle::bell(2)); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST(Settings, ThirtySixPairs) {
  const auto s = standard_settings();
  ASSERT_EQ(s.size(), 36u);
  EXPECT_EQ(s.front().label, "HH");
  EXPECT_EQ(s[1].label, "HV");
  EXPECT_EQ(s.back().label, "LL");
  EXPECT_EQ(standard_arms().size(), 6u);
}

TEST(PredictedCounts, Examples) {
  const auto s = standard_settings();
  for (double c : predicted_counts(kMixed, s, 400.0)) EXPECT_NEAR(c, 100.0, 1e-10);
  Eigen::Matrix4cd pp = Eigen::Matrix4cd::Zero();
  pp(0, 0) = 1.0;
  EXPECT_NEAR(predicted_counts(pp, s, 100.0)[4 * 6 + 4], 100.0, 1e-10);  // RR
  EXPECT_NEAR(predicted_counts(proj(oracle::bell(0)), s, 100.0)[0], 50.0, 1e-10);
}

TEST(LinearInversion, ExactData) {
  const auto s = standard_settings();
  EXPECT_LT((linear_inversion(s, predicted_counts(kMixed, s, 1e4)) - kMixed).norm(), 1e-10);
  for (int b = 0; b < 4; ++b) {
    const Eigen::Matrix4cd rho = proj(oracle::bell(b));
    EXPECT_LT((linear_inversion(s, predicted_counts(rho, s, 1e4)) - rho).norm(), 1e-10);
  }
}

TEST(LinearInversion, PoissonData) {
  const auto s = standard_settings();
  const Eigen::Matrix4cd rho = calibration_state();
  const auto counts = simulate_counts(rho, s, 4e3, 31);  // ~1e3 per setting
  EXPECT_LT(trace_distance(linear_inversion(s, counts), rho), 0.1);
}

TEST(LinearInversion, Errors) {
  const auto s = standard_settings();
  std::vector<double> zeros(36, 0.0);
  EXPECT_THROW(linear_inversion(s, zeros), std::invalid_argument);
  std::vector<double> short_counts(10, 1.0);
  EXPECT_THROW(linear_inversion(s, short_counts), std::invalid_argument);
  const std::vector<MeasurementSetting> only_h(s.begin(), s.begin() + 1);
  EXPECT_THROW(linear_inversion(only_h, std::vector<double>{5.0}), std::invalid_argument);
}

TEST(Mle, CalibrationRoundTrip) {
  const auto s = standard_settings();
  const Eigen::Matrix4cd rho = calibration_state();
  const auto r = mle_reconstruct(s, predicted_counts(rho, s, 1e6));
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.rho.valid());
  EXPECT_GE(fidelity(r.rho.matrix(), rho), 0.999);
}

TEST(Mle, MaximallyMixed) {
  const auto s = standard_settings();
  const auto r = mle_reconstruct(s, simulate_counts(kMixed, s, 1e6, 3));
  EXPECT_LT(trace_distance(r.rho.matrix(), kMixed), 0.01);
}

TEST(Mle, AgreesWithPhysicalLinearEstimate) {
  const auto s = standard_settings();
  std::mt19937_64 rng(19);
  const Eigen::Matrix4cd rho = 0.5 * oracle::random_state(rng) + 0.5 * kMixed;
  const auto counts = simulate_counts(rho, s, 1e6, 8);
  const Eigen::Matrix4cd lin = linear_inversion(s, counts);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(lin);
  ASSERT_GT(es.eigenvalues().minCoeff(), 0.0);
  EXPECT_LT(trace_distance(mle_reconstruct(s, counts).rho.matrix(), lin), 0.01);
}

TEST(Mle, LikelihoodTraceIncreases) {
  const auto s = standard_settings();
  std::mt19937_64 rng(20);
  const auto r = mle_reconstruct(s, simulate_counts(oracle::random_state(rng, 2), s, 1e4, 2));
  ASSERT_FALSE(r.likelihood_trace.empty());
  for (std::size_t i = 1; i < r.likelihood_trace.size(); ++i)
    EXPECT_GE(r.likelihood_trace[i], r.likelihood_trace[i - 1] - 1e-9);
}

TEST(Mle, IterationCapReportsNonConvergence) {
  const auto s = standard_settings();
  std::mt19937_64 rng(21);
  MleOptions o;
  o.max_iterations = 1;
  o.tolerance = 1e-300;
  const auto r = mle_reconstruct(s, simulate_counts(oracle::random_state(rng), s, 1e5, 1), o);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.rho.valid());
}

TEST(Mle, RejectsBadCounts) {
  const auto s = standard_settings();
  EXPECT_THROW(mle_reconstruct(s, std::vector<double>(36, 0.0)), std::invalid_argument);
  std::vector<double> neg(36, 10.0);
  neg[3] = -1.0;
  EXPECT_THROW(mle_reconstruct(s, neg), std::invalid_argument);
}

TEST(Bootstrap, DisabledResamplingGivesZeroSpread) {
  const auto s = standard_settings();
  const auto counts = predicted_counts(calibration_state(), s, 1e5);
  BootstrapOptions o;
  o.n_resamples = 2;
  o.poisson_resample = false;
  const MetricSet m{{"concurrence", [](const Eigen::Matrix4cd &r) { return concurrence(r); }}};
  EXPECT_EQ(bootstrap_errors(s, counts, m, o).at("concurrence"), 0.0);
}

TEST(Bootstrap, DeterministicAndScalesWithCounts) {
  const auto s = standard_settings();
  const MetricSet m{{"concurrence", [](const Eigen::Matrix4cd &r) { return concurrence(r); }},
                    {"fidelity", [](const Eigen::Matrix4cd &r) { return fidelity_to_pure(r, oracle::bell(0)); }}};
  BootstrapOptions o;
  o.n_resamples = 40;
  o.seed = 123;
  const auto lo = simulate_counts(calibration_state(), s, 1e5, 4);
  const auto hi = simulate_counts(calibration_state(), s, 1e6, 4);
  const auto a = bootstrap_errors(s, lo, m, o), b = bootstrap_errors(s, lo, m, o);
  EXPECT_EQ(a, b);
  const auto c = bootstrap_errors(s, hi, m, o);
  for (const auto &name : {"concurrence", "fidelity"}) {
    const double ratio = c.at(name) / a.at(name);
    EXPECT_GT(ratio, 1.0 / std::sqrt(10.0) / 2.0) << name;
    EXPECT_LT(ratio, 2.0 / std::sqrt(10.0)) << name;
  }
}

TEST(Bootstrap, ThreadCountDoesNotChangeResult) {
  const auto s = standard_settings();
  const MetricSet m{{"purity", [](const Eigen::Matrix4cd &r) { return purity(r); }}};
  const auto counts = simulate_counts(calibration_state(), s, 1e4, 6);
  BootstrapOptions o;
  o.n_resamples = 8;
  o.seed = 5;
  o.threads = 1;
  const auto one = bootstrap_errors(s, counts, m, o);
  o.threads = 4;
  EXPECT_EQ(one, bootstrap_errors(s, counts, m, o));
}

TEST(Tomography, ErrorShrinksWithScale) {
  const auto s = standard_settings();
  std::mt19937_64 rng(22);
  const Eigen::Matrix4cd rho = oracle::random_state(rng);
  double last = 1.0;
  for (double scale : {1e3, 1e4, 1e5}) {
    std::vector<double> d;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      d.push_back(trace_distance(mle_reconstruct(s, simulate_counts(rho, s, scale, derive_seed(9, seed))).rho.matrix(), rho));
    const double m = median(d);
    EXPECT_LE(m, last);
    last = m;
  }
}

TEST(SimulateCounts, DeterministicInSeed) {
  const auto s = standard_settings();
  EXPECT_EQ(simulate_counts(kMixed, s, 1e3, 1), simulate_counts(kMixed, s, 1e3, 1));
  EXPECT_NE(simulate_counts(kMixed, s, 1e3, 1), simulate_counts(kMixed, s, 1e3, 2));
}
