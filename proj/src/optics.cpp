#include "nanoqi/optics.hpp"

#include <cmath>
#include <stdexcept>

#include "nanoqi/source.hpp"

namespace nanoqi {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752;
const cplx kI{0.0, 1.0};

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace

namespace polarization {
Jones H() { return Jones(1.0, 0.0); }
Jones V() { return Jones(0.0, 1.0); }
Jones D() { return Jones(kInvSqrt2, kInvSqrt2); }
Jones A() { return Jones(kInvSqrt2, -kInvSqrt2); }
Jones R() { return Jones(kInvSqrt2, -kI * kInvSqrt2); }
Jones L() { return Jones(kInvSqrt2, kI * kInvSqrt2); }
}  // namespace polarization

Jones2 circular_basis() {
  Jones2 c;
  c.col(0) = polarization::R();
  c.col(1) = polarization::L();
  return c;
}

Jones2 to_helicity_basis(const Jones2 &jones) {
  const Jones2 c = circular_basis();
  return c.adjoint() * jones * c;
}

Jones helicity_components(const Jones &jones) { return circular_basis().adjoint() * jones; }

SinglePhotonMap PolarizationElement::map() const {
  const Jones2 h = helicity_matrix();
  return {label, [h](const Mode &mode) -> std::optional<SinglePhotonAmplitudes> {
            const int l = mode.orbital();
            const int col = mode.helicity > 0 ? 0 : 1;
            SinglePhotonAmplitudes out;
            if (h(0, col) != cplx{}) out.push_back({Mode(l + 1, +1, mode.temporal), h(0, col)});
            if (h(1, col) != cplx{}) out.push_back({Mode(l - 1, -1, mode.temporal), h(1, col)});
            return out;
          }};
}

PolarizationElement retarder(double theta, double delta, std::string label) {
  const Eigen::Matrix2cd rot = rotation(theta).cast<cplx>();
  Jones2 phase = Jones2::Zero();
  phase(0, 0) = 1.0;
  phase(1, 1) = std::exp(-kI * delta);
  return {std::move(label), rot.transpose() * phase * rot};
}

PolarizationElement hwp(double theta) {
  return retarder(theta, M_PI, "hwp(" + std::to_string(theta) + ")");
}

PolarizationElement qwp(double theta) {
  return retarder(theta, M_PI / 2.0, "qwp(" + std::to_string(theta) + ")");
}

PolarizationElement polarizer(const Jones &axis) {
  const double n = axis.norm();
  if (n == 0.0) throw std::invalid_argument("polarizer axis must be nonzero");
  const Jones a = axis / n;
  return {"polarizer", a * a.adjoint()};
}

SinglePhotonMap qplate(const QPlateSpec &spec) {
  // Forward: (l, s) -> (l + 2q s, -s). Its inverse sends (l', s') to
  // (l' + 2q s', -s'); both are written out so the direction is explicit.
  const bool forward = spec.direction == QPlateSpec::Direction::Forward;
  const int twice_q = spec.twice_q;
  const std::string label = std::string(forward ? "qplate+" : "qplate-") + "(2q=" + std::to_string(twice_q) + ")";
  return {label, [forward, twice_q](const Mode &mode) -> std::optional<SinglePhotonAmplitudes> {
            const int s_in = mode.helicity;
            const int s_out = -s_in;
            const int l_out = forward ? mode.orbital() + twice_q * s_in : mode.orbital() - twice_q * s_out;
            const int m_out = l_out + s_out;
            if (std::abs(m_out) > kMaxTrackedM) return std::nullopt;
            return SinglePhotonAmplitudes{{Mode(m_out, s_out, mode.temporal), 1.0}};
          }};
}

double gaussian_dip_shape(double tau, double sigma_tau) {
  if (std::isinf(tau)) return 0.0;
  return std::exp(-tau * tau / (4.0 * sigma_tau * sigma_tau));
}

double temporal_overlap(double tau, const SourceModel &source, const DipShape &shape) {
  if (!(source.sigma_tau > 0.0)) throw std::invalid_argument("sigma_tau must be positive");
  return std::sqrt(source.visibility) * shape(tau, source.sigma_tau);
}

}  // namespace nanoqi
