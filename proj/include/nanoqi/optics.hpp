#pragma once

// Linear-optics elements acting on single photons.
//
// Conventions: Jones vectors are written in the linear H/V basis, and
// |R> = (|H> - i|V>)/sqrt(2) is helicity +1, |L> = (|H> + i|V>)/sqrt(2) is
// helicity -1. Polarization elements act on helicity and leave orbital
// angular momentum unchanged, so a mode's m shifts with its helicity.

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "nanoqi/mode_algebra.hpp"

namespace nanoqi {

using Jones = Eigen::Vector2cd;
using Jones2 = Eigen::Matrix2cd;

namespace polarization {
Jones H();
Jones V();
Jones D();
Jones A();
Jones R();
Jones L();
}  // namespace polarization

/// Columns are |R> and |L> in the H/V basis.
Jones2 circular_basis();
/// Re-expresses an H/V-basis operator in the (helicity +1, helicity -1) basis.
Jones2 to_helicity_basis(const Jones2 &jones);
Jones helicity_components(const Jones &jones);

/// A polarization element: its H/V Jones matrix plus the induced mode map.
struct PolarizationElement {
  std::string label;
  Jones2 jones;  ///< H/V basis

  Jones2 helicity_matrix() const { return to_helicity_basis(jones); }
  SinglePhotonMap map() const;
  Jones operator*(const Jones &v) const { return jones * v; }
};

/// Linear retarder with fast axis at `theta` (from H) and retardance `delta`:
/// R(-theta) diag(1, e^{-i delta}) R(theta).
PolarizationElement retarder(double theta, double delta, std::string label);
PolarizationElement hwp(double theta);
PolarizationElement qwp(double theta);
/// Rank-1 projector onto `axis`. Throws std::invalid_argument for a zero axis.
PolarizationElement polarizer(const Jones &axis);

struct QPlateSpec {
  enum class Direction { Forward, Reverse };

  int twice_q = 1;  ///< 2q, so q = 1/2 is twice_q = 1
  Direction direction = Direction::Forward;
};

/// Largest |m| a q-plate map keeps track of.
inline constexpr int kMaxTrackedM = 8;

/// Helicity flip with orbital shift l -> l + 2q*sigma (forward); the reverse
/// plate is the inverse map. Modes whose output |m| would exceed kMaxTrackedM
/// are outside the domain.
SinglePhotonMap qplate(const QPlateSpec &spec);

/// HOM dip shape: relative overlap as a function of delay and width.
using DipShape = std::function<double(double tau, double sigma_tau)>;
double gaussian_dip_shape(double tau, double sigma_tau);

struct SourceModel;

/// gamma(tau) = sqrt(V) * shape(tau, sigma_tau); shape defaults to
/// exp(-tau^2 / (4 sigma_tau^2)). Throws std::invalid_argument for
/// sigma_tau <= 0.
double temporal_overlap(double tau, const SourceModel &source, const DipShape &shape = gaussian_dip_shape);

}  // namespace nanoqi
