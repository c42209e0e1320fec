#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nanoqi/measurement.hpp"
#include "nanoqi/mode_algebra.hpp"

namespace nanoqi {

/// Single-arm analyzers H, V, D, A, R, L in that order.
std::vector<ArmSpec> standard_arms();

/// All 36 (arm1, arm2) pairs of standard_arms(), arm1 varying slowest.
std::vector<MeasurementSetting> standard_settings();

/// scale * tr[(P1 ⊗ P2) rho] per setting.
std::vector<double> predicted_counts(const Eigen::Matrix4cd &rho, std::span<const MeasurementSetting> settings,
                                     double scale);

/// Least-squares estimate of the 16 Pauli coefficients, trace normalized to
/// one. Hermitian but possibly non-physical. Throws std::invalid_argument
/// for a rank-deficient setting set, mismatched sizes or all-zero counts.
Eigen::Matrix4cd linear_inversion(std::span<const MeasurementSetting> settings, std::span<const double> counts);

struct MleOptions {
  double tolerance = 1e-8;  ///< on the gradient of the count-normalized log-likelihood
  int max_iterations = 5000;
};

struct TomographyResult {
  DensityMatrix rho;
  double log_likelihood = 0.0;  ///< sum n log(mu) - mu
  int iterations = 0;
  bool converged = false;
  std::vector<double> likelihood_trace;  ///< one entry per accepted step
  std::map<std::string, double> bootstrap_std;
};

/// Poisson maximum likelihood over rho = T†T / tr(T†T), T lower triangular,
/// started from the linear-inversion estimate projected onto the physical
/// cone. Deterministic. Throws std::invalid_argument for all-zero or
/// negative counts.
TomographyResult mle_reconstruct(std::span<const MeasurementSetting> settings, std::span<const double> counts,
                                 const MleOptions &options = {});

using StateMetric = std::function<double(const Eigen::Matrix4cd &)>;
using MetricSet = std::vector<std::pair<std::string, StateMetric>>;

struct BootstrapOptions {
  int n_resamples = 100;
  std::uint64_t seed = 0;
  bool poisson_resample = true;  ///< false reuses the observed counts in every replica
  MleOptions mle;
  unsigned threads = 0;  ///< 0 picks hardware concurrency
};

/// Parametric bootstrap: replica r redraws every count from Poisson(observed)
/// with child seed derive_seed(seed, r), re-runs the MLE and evaluates each
/// metric. Returns the sample standard deviation per metric.
std::map<std::string, double> bootstrap_errors(std::span<const MeasurementSetting> settings,
                                               std::span<const double> counts, const MetricSet &metrics,
                                               const BootstrapOptions &options);

/// Poisson counts around scale * tr[(P1 ⊗ P2) rho], child seed per setting.
std::vector<double> simulate_counts(const Eigen::Matrix4cd &rho, std::span<const MeasurementSetting> settings,
                                    double scale, std::uint64_t seed);

}  // namespace nanoqi
