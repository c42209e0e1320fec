#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nanoqi/aperture.hpp"
#include "nanoqi/mode_algebra.hpp"
#include "nanoqi/optics.hpp"
#include "nanoqi/source.hpp"

namespace nanoqi {

/// Child seed for task `index` of a run seeded with `master` (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Wave plates followed by a polarizer in one splitter arm.
///
/// Arms analyze the m = 0 helicity qubit directly: |R> stands for helicity
/// +1. The reversing q-plate in front of the analyzer is folded into this
/// labeling.
struct ArmSpec {
  std::string label;
  std::vector<PolarizationElement> plates;  ///< in beam order
  Jones axis = polarization::H();

  /// Helicity-basis vector v with arm projector v v†.
  Eigen::Vector2cd compile() const;
};

ArmSpec arm_linear(std::string label, const Jones &axis);
/// Quarter-wave plate at 45 degrees followed by an H (for R) or V (for L)
/// polarizer.
ArmSpec arm_circular(int helicity);

struct MeasurementSetting {
  ArmSpec arm1;
  ArmSpec arm2;
  std::string label;

  Eigen::Vector4cd projector_vector() const;
};

/// tr[(P1 ⊗ P2) rho] for a two-qubit rho.
double coincidence_probability(const Eigen::Matrix4cd &rho, const MeasurementSetting &s);
double coincidence_probability(const DensityMatrix &rho, const MeasurementSetting &s);

struct CountRecord {
  std::string label;
  std::int64_t counts = 0;
  double duration = 0.0;  ///< seconds
  std::uint64_t seed = 0;
};

/// Poisson draw with mean prob * mean_total, deterministic in `seed`.
std::int64_t sample_counts(double prob, double mean_total, std::uint64_t seed);

/// Source, state selection and optional aperture, as used in a delay scan.
struct OpticalChain {
  SourceModel source;
  double hwp_angle = 0.0;
  std::optional<ApertureCoefficients> aperture;
  DipShape shape = gaussian_dip_shape;
};

/// Unnormalized output ensemble at delay `tau` (aperture weight included).
StateEnsemble chain_output(const OpticalChain &chain, double tau);

/// Cross-circular coincidence probability: (+,-) plus the mirrored (-,+).
double cross_circular_probability(const StateEnsemble &ensemble);

struct HomPoint {
  double tau = 0.0;              ///< seconds
  double rate_normalized = 0.0;  ///< cross-circular rate over the tau -> inf asymptote
  double rate_std = 0.0;         ///< over repeats; 0 for exact scans
  double probability = 0.0;     ///< exact cross-circular probability at tau
};

struct HomScan {
  std::string label;
  double baseline = 0.0;  ///< exact asymptotic cross-circular probability
  std::vector<HomPoint> points;
};

/// Exact scan. Throws std::domain_error when the asymptote is zero.
HomScan hom_scan(const OpticalChain &chain, const std::vector<double> &delays, std::string label = {});

struct HomSampling {
  double pairs_per_point = 1e5;
  int repeats = 10;
  std::uint64_t seed = 0;
  double dark_counts = 0.0;  ///< mean additive accidental counts per point
};

/// Poisson-sampled scan: each point is the mean of `repeats` draws of
/// pairs_per_point * probability (+ dark counts), normalized by the exact
/// asymptote; rate_std is the sample standard deviation.
HomScan hom_scan_sampled(const OpticalChain &chain, const std::vector<double> &delays,
                         const HomSampling &sampling, std::string label = {});

struct Visibility {
  double value = 0.0;  ///< clipped to [0, 1]
  double raw = 0.0;    ///< 1 - R(0)
};

/// V = 1 - R(0). Throws std::invalid_argument when the scan lacks a
/// tau = 0 point or a positive baseline.
Visibility visibility(const HomScan &scan);

}  // namespace nanoqi
