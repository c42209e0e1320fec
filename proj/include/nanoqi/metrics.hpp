#pragma once

#include <string>

#include <Eigen/Dense>

#include "nanoqi/mode_algebra.hpp"

namespace nanoqi {

/// Wootters concurrence, basis ++, +-, -+, --. Throws std::invalid_argument
/// unless rho is 4x4.
double concurrence(const Eigen::MatrixXcd &rho);
/// ||rho^{T_2}||_1 - 1, so a Bell state scores 1.
double negativity(const Eigen::MatrixXcd &rho);
/// <psi|rho|psi>; psi is normalized internally.
double fidelity_to_pure(const Eigen::MatrixXcd &rho, const Eigen::VectorXcd &target);
double purity(const Eigen::MatrixXcd &rho);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const Eigen::MatrixXcd &rho, const Eigen::MatrixXcd &sigma);
double trace_distance(const Eigen::MatrixXcd &rho, const Eigen::MatrixXcd &sigma);

/// Hermitian square root with eigenvalues clipped at zero.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd &m);
/// Partial transpose over the second qubit.
Eigen::Matrix4cd partial_transpose_2(const Eigen::Matrix4cd &rho);

namespace bell {
Eigen::Vector4cd phi_plus();   ///< (|++> + |-->)/sqrt(2)
Eigen::Vector4cd phi_minus();  ///< (|++> - |-->)/sqrt(2)
Eigen::Vector4cd psi_plus();   ///< (|+-> + |-+>)/sqrt(2)
Eigen::Vector4cd psi_minus();  ///< (|+-> - |-+>)/sqrt(2)
}  // namespace bell

struct MetricReport {
  std::string target_label;
  double concurrence = 0.0;
  double negativity = 0.0;
  double fidelity = 0.0;
  double purity = 0.0;
};

MetricReport metric_report(const Eigen::MatrixXcd &rho, const Eigen::Vector4cd &target, std::string target_label);

}  // namespace nanoqi
