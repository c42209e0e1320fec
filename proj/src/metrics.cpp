#include "nanoqi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nanoqi {

namespace {

Eigen::Matrix4cd as_two_qubit(const Eigen::MatrixXcd &rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("expected a 4x4 two-qubit state");
  return 0.5 * (rho + rho.adjoint());
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd &m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly)
      .eigenvalues();
}

// Square roots of a PSD spectrum. Values below a relative round-off floor are
// numerically zero; their square roots would otherwise leak ~1e-8.
std::vector<double> spectrum_roots(const Eigen::VectorXd &ev) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<double> out;
  for (int i = 0; i < ev.size(); ++i) out.push_back(ev(i) > floor ? std::sqrt(ev(i)) : 0.0);
  return out;
}

}  // namespace

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd &m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  const std::vector<double> roots = spectrum_roots(es.eigenvalues());
  const Eigen::VectorXd ev = Eigen::Map<const Eigen::VectorXd>(roots.data(), static_cast<Eigen::Index>(roots.size()));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double concurrence(const Eigen::MatrixXcd &rho_in) {
  const Eigen::Matrix4cd rho = as_two_qubit(rho_in);
  // (Y ⊗ Y) in the computational basis is the antidiagonal (-1, 1, 1, -1).
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd flipped = yy * rho.conjugate() * yy;
  // Eigenvalues of rho * flipped equal those of sqrt(rho) flipped sqrt(rho).
  const Eigen::MatrixXcd s = psd_sqrt(rho);
  std::vector<double> l = spectrum_roots(hermitian_eigenvalues(s * flipped * s));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Eigen::Matrix4cd partial_transpose_2(const Eigen::Matrix4cd &rho) {
  Eigen::Matrix4cd out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
  return out;
}

double negativity(const Eigen::MatrixXcd &rho_in) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(partial_transpose_2(as_two_qubit(rho_in)));
  double neg = 0.0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) < 0.0) neg -= ev(i);
  return 2.0 * neg;
}

double fidelity_to_pure(const Eigen::MatrixXcd &rho, const Eigen::VectorXcd &target) {
  if (target.size() != rho.rows()) throw std::invalid_argument("target dimension mismatch");
  const Eigen::VectorXcd psi = target.normalized();
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

double purity(const Eigen::MatrixXcd &rho) { return (rho * rho).trace().real(); }

double fidelity(const Eigen::MatrixXcd &rho, const Eigen::MatrixXcd &sigma) {
  const Eigen::MatrixXcd s = psd_sqrt(rho);
  double t = 0.0;
  for (double r : spectrum_roots(hermitian_eigenvalues(s * sigma * s))) t += r;
  return t * t;
}

double trace_distance(const Eigen::MatrixXcd &rho, const Eigen::MatrixXcd &sigma) {
  return 0.5 * hermitian_eigenvalues(rho - sigma).cwiseAbs().sum();
}

namespace bell {
namespace {
Eigen::Vector4cd make(double a, double b, double c, double d) {
  return Eigen::Vector4cd(a, b, c, d) / std::sqrt(2.0);
}
}  // namespace
Eigen::Vector4cd phi_plus() { return make(1, 0, 0, 1); }
Eigen::Vector4cd phi_minus() { return make(1, 0, 0, -1); }
Eigen::Vector4cd psi_plus() { return make(0, 1, 1, 0); }
Eigen::Vector4cd psi_minus() { return make(0, 1, -1, 0); }
}  // namespace bell

MetricReport metric_report(const Eigen::MatrixXcd &rho, const Eigen::Vector4cd &target, std::string target_label) {
  return {std::move(target_label), concurrence(rho), negativity(rho), fidelity_to_pure(rho, target), purity(rho)};
}

}  // namespace nanoqi
