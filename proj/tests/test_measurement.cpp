#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "nanoqi/measurement.hpp"
#include "nanoqi/tomography.hpp"
#include "oracles.hpp"

using namespace nanoqi;

namespace {

const double kH = 1.0 / std::sqrt(2.0);
const cplx kI{0.0, 1.0};

OpticalChain chain(double visibility, double angle, std::optional<ApertureCoefficients> ap = std::nullopt) {
  OpticalChain c;
  c.source.visibility = visibility;
  c.source.sigma_tau = 200e-15;
  c.hwp_angle = angle;
  c.aperture = ap;
  return c;
}

std::vector<double> grid(int points, double half_width) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    const double t = -half_width + 2 * half_width * i / (points - 1);
    out.push_back(std::abs(t) < 1e-30 ? 0.0 : t);
  }
  return out;
}

MeasurementSetting setting(const ArmSpec &a, const ArmSpec &b) { return {a, b, a.label + b.label}; }

}  // namespace

TEST(DeriveSeed, DistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
  EXPECT_NE(derive_seed(42, 7), derive_seed(43, 7));
}

TEST(Arms, CircularArmsProjectOnHelicity) {
  const auto r = arm_circular(+1).compile(), l = arm_circular(-1).compile();
  EXPECT_NEAR(std::abs(r(0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(r(1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(l(1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(l(0)), 0.0, 1e-14);
}

TEST(Arms, LinearArmIsHelicityComponentsOfAxis) {
  const auto v = arm_linear("D", polarization::D()).compile();
  EXPECT_LT((v - helicity_components(polarization::D())).norm(), 1e-15);
}

TEST(CoincidenceProbability, Examples) {
  const auto r = arm_circular(+1), l = arm_circular(-1);
  Eigen::Matrix4cd pp = Eigen::Matrix4cd::Zero();
  pp(0, 0) = 1.0;
  EXPECT_NEAR(coincidence_probability(pp, setting(r, r)), 1.0, 1e-14);
  const Eigen::Matrix4cd phi_minus = oracle::bell(1) * oracle::bell(1).adjoint();
  EXPECT_NEAR(coincidence_probability(phi_minus, setting(r, l)), 0.0, 1e-14);
  const Eigen::Matrix4cd mixed = Eigen::Matrix4cd::Identity() / 4.0;
  for (const auto &s : standard_settings()) EXPECT_NEAR(coincidence_probability(mixed, s), 0.25, 1e-14);
  EXPECT_THROW(coincidence_probability(DensityMatrix(Eigen::MatrixXcd::Identity(2, 2) / 2.0), setting(r, r)),
               std::invalid_argument);
}

TEST(CoincidenceProbability, MatchesTraceWithProjectors) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Matrix4cd rho = oracle::random_state(rng);
    for (const auto &s : standard_settings()) {
      const Eigen::Vector2cd a = s.arm1.compile(), b = s.arm2.compile();
      Eigen::Matrix4cd p;
      const Eigen::Matrix2cd pa = a * a.adjoint(), pb = b * b.adjoint();
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v) p(2 * x + y, 2 * u + v) = pa(x, u) * pb(y, v);
      EXPECT_NEAR(coincidence_probability(rho, s), (p * rho).trace().real(), 1e-13);
    }
  }
}

TEST(SampleCounts, Properties) {
  EXPECT_EQ(sample_counts(0.0, 1e6, 1), 0);
  const auto n = sample_counts(1.0, 1e6, 99);
  EXPECT_LT(std::abs(static_cast<double>(n) - 1e6), 5e3);
  EXPECT_EQ(sample_counts(1.0, 1e6, 99), n);
  EXPECT_EQ(sample_counts(0.3, 50.0, 5), sample_counts(0.3, 50.0, 5));
}

TEST(CrossCircular, MatchesSplitterOracle) {
  for (double angle : {0.0, M_PI / 8, 0.4})
    for (double tau : {0.0, 100e-15, 300e-15, double(INFINITY)}) {
      auto c = chain(0.9, angle);
      SourceModel src = c.source;
      src.delay = tau;
      const auto rho = oracle::splitter_image(oracle::from_library(prepare_coherent(angle, src), 2));
      EXPECT_NEAR(cross_circular_probability(chain_output(c, tau)), (rho(1, 1) + rho(2, 2)).real(), 1e-13);
    }
}

TEST(HomScan, ClosedFormWithoutAperture) {
  for (double angle : {0.0, M_PI / 8}) {
    const auto c = chain(0.9, angle);
    const auto scan = hom_scan(c, grid(41, 1000e-15));
    for (const auto &pt : scan.points) {
      const double gamma = temporal_overlap(pt.tau, c.source);
      EXPECT_NEAR(pt.rate_normalized, oracle::hom_ideal(gamma), 1e-12);
    }
    EXPECT_NEAR(visibility(scan).value, 0.9, 1e-12);
    EXPECT_NEAR(scan.points.front().rate_normalized, 1.0, 1e-5);
  }
}

TEST(HomScan, CoherentApertureSeparatesStates) {
  ApertureCoefficients ap;
  ap.alpha = kH;
  ap.beta = kI * kH;
  ap.eta = 1.0;
  const auto minus = hom_scan(chain(0.9, 0.0, ap), grid(41, 1000e-15));
  EXPECT_NEAR(visibility(minus).value, 0.9, 1e-12);
  const auto plus = hom_scan(chain(0.9, M_PI / 8, ap), grid(41, 1000e-15));
  for (const auto &pt : plus.points) EXPECT_GE(pt.rate_normalized, 0.9);
}

TEST(HomScan, SampledScanIsDeterministicAndClose) {
  HomSampling s;
  s.pairs_per_point = 1e5;
  s.repeats = 10;
  s.seed = 77;
  const auto c = chain(0.9, 0.0);
  const auto a = hom_scan_sampled(c, grid(41, 1000e-15), s), b = hom_scan_sampled(c, grid(41, 1000e-15), s);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].rate_normalized, b.points[i].rate_normalized);
    EXPECT_NEAR(a.points[i].rate_normalized, a.points[i].probability / a.baseline, 0.02);
    EXPECT_GT(a.points[i].rate_std, 0.0);
  }
  EXPECT_NEAR(visibility(a).value, 0.9, 0.01);
  s.repeats = 0;
  EXPECT_THROW(hom_scan_sampled(c, {0.0}, s), std::invalid_argument);
}

TEST(Visibility, Edges) {
  HomScan flat{"flat", 1.0, {{-1.0, 1.0, 0, 1}, {0.0, 1.0, 0, 1}, {1.0, 1.0, 0, 1}}};
  EXPECT_EQ(visibility(flat).value, 0.0);
  HomScan full{"full", 1.0, {{-1.0, 1.0, 0, 1}, {0.0, 0.0, 0, 0}, {1.0, 1.0, 0, 1}}};
  EXPECT_EQ(visibility(full).value, 1.0);
  HomScan bump{"bump", 1.0, {{0.0, 1.2, 0, 1}}};
  EXPECT_EQ(visibility(bump).value, 0.0);
  EXPECT_NEAR(visibility(bump).raw, -0.2, 1e-15);
  HomScan none{"none", 1.0, {{1.0, 1.0, 0, 1}}};
  EXPECT_THROW(visibility(none), std::invalid_argument);
  HomScan zero{"zero", 0.0, {{0.0, 1.0, 0, 1}}};
  EXPECT_THROW(visibility(zero), std::invalid_argument);
}

TEST(HomScan, ZeroAsymptoteThrows) {
  // alpha = beta kills Psi- entirely.
  ApertureCoefficients ap;
  ap.alpha = ap.beta = kH;
  EXPECT_THROW(hom_scan(chain(0.9, 0.0, ap), {0.0}), std::domain_error);
}
