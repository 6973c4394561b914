#pragma once

// Stability and structure diagnostics: hyperbolicity certification via the
// dense flux Jacobian, the sub-characteristic condition on the relaxation
// manifold, and the Chapman-Enskog diffusion coefficient whose definiteness
// decides whether the first-order correction is dissipative.
//
// The dense paths here deliberately avoid the frame shortcuts used by the
// solver: Jacobians are assembled from explicit operator blocks and factored
// with dense solves, so they can serve as an independent cross-check.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "sgarz/galerkin.hpp"
#include "sgarz/model.hpp"

namespace sgarz {

/// Positive probe density rho = c e_1 + delta with c in [0.2, 0.8] and the
/// perturbation rescaled so that min eig P(rho) >= min_eig_floor. Rescaling
/// is exact because the eigenvalues are linear in the coefficients.
inline GpcVector random_positive_probe(const GpcBasis& basis,
                                       std::mt19937_64& rng,
                                       double min_eig_floor = 0.05) {
  const int n = basis.size();
  std::uniform_real_distribution<double> level(0.2, 0.8);
  std::normal_distribution<double> noise(0.0, 0.1);
  const double c = level(rng);
  GpcVector delta(n);
  delta[0] = 0.0;
  for (int k = 1; k < n; ++k) delta[k] = noise(rng);
  GpcVector rho = constant_modes(n, c) + delta;
  const double min_eig = min_density_eigenvalue(basis, rho);
  if (min_eig < min_eig_floor) {
    const double t = 0.95 * (c - min_eig_floor) / (c - min_eig);
    rho = constant_modes(n, c) + t * delta;
  }
  return rho;
}

namespace detail {

inline void require_positive(const GpcBasis& basis, const GpcVector& rho,
                             const char* where) {
  const double min_eig = min_density_eigenvalue(basis, rho);
  if (min_eig <= kPositivityFloor) {
    throw PositivityError(std::string(where) +
                              ": P(rho) is not positive definite (min "
                              "eigenvalue " +
                              std::to_string(min_eig) + ")",
                          min_eig);
  }
}

}  // namespace detail

/// Dense hesitation Jacobian V D_h'(rho) V^T.
inline Eigen::MatrixXd hesitation_jacobian(const GpcBasis& basis,
                                           const GpcVector& rho,
                                           const ModelConfig& cfg) {
  const GpcVector d = hesitation_slope_eigen(basis, rho, cfg);
  return basis.frame.vectors * d.asDiagonal() * basis.frame.vectors.transpose();
}

/// Dense equilibrium-velocity Jacobian V D_Veq'(rho) V^T.
inline Eigen::MatrixXd equilibrium_jacobian(const GpcBasis& basis,
                                            const GpcVector& rho,
                                            const ModelConfig& cfg) {
  const GpcVector d = equilibrium_slope_eigen(basis, rho, cfg);
  return basis.frame.vectors * d.asDiagonal() * basis.frame.vectors.transpose();
}

/// Dense Jacobian of the conservative flux, assembled blockwise:
///   [ -P(h) - P(rho) h'(rho)              I                          ]
///   [ -P(z)^2 P(rho)^{-2} - P(z) h'(rho)  2 P(z) P(rho)^{-1} - P(h)  ]
inline Eigen::MatrixXd flux_jacobian_dense(const GpcBasis& basis,
                                           const GpcState& state,
                                           const ModelConfig& cfg) {
  detail::require_positive(basis, state.rho, "flux_jacobian_dense");
  const int n = basis.size();
  const Eigen::MatrixXd p_rho = p_matrix(basis.products, state.rho);
  const Eigen::MatrixXd p_z = p_matrix(basis.products, state.z);
  const Eigen::MatrixXd p_h =
      p_matrix(basis.products, hesitation_modes(basis, state.rho, cfg));
  const Eigen::MatrixXd h_jac = hesitation_jacobian(basis, state.rho, cfg);
  const Eigen::MatrixXd p_rho_inv =
      Eigen::LLT<Eigen::MatrixXd>(p_rho).solve(Eigen::MatrixXd::Identity(n, n));

  Eigen::MatrixXd jac(2 * n, 2 * n);
  jac.topLeftCorner(n, n) = -p_h - p_rho * h_jac;
  jac.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  jac.bottomLeftCorner(n, n) = -p_z * p_z * p_rho_inv * p_rho_inv - p_z * h_jac;
  jac.bottomRightCorner(n, n) = 2.0 * p_z * p_rho_inv - p_h;
  return jac;
}

/// Dense Jacobian of the equilibrium flux, P(V_eq(rho)) + P(rho) V_eq'(rho).
inline Eigen::MatrixXd equilibrium_flux_jacobian_dense(const GpcBasis& basis,
                                                       const GpcVector& rho,
                                                       const ModelConfig& cfg) {
  detail::require_positive(basis, rho, "equilibrium_flux_jacobian_dense");
  return p_matrix(basis.products, equilibrium_modes(basis, rho, cfg)) +
         p_matrix(basis.products, rho) * equilibrium_jacobian(basis, rho, cfg);
}

/// Diagonal characteristic speeds of the equilibrium model in the shared
/// frame: D(V_eq(rho)) + D(rho) D_Veq'(rho).
inline GpcVector equilibrium_speeds(const GpcBasis& basis, const GpcVector& rho,
                                    const ModelConfig& cfg) {
  detail::require_positive(basis, rho, "equilibrium_speeds");
  return eigenvalues_of(basis.frame, equilibrium_modes(basis, rho, cfg)) +
         eigenvalues_of(basis.frame, rho)
             .cwiseProduct(equilibrium_slope_eigen(basis, rho, cfg));
}

/// Chapman-Enskog diffusion coefficient
///   mu(rho) = -V [ D(rho)^2 D_Veq' (D_Veq' + D_h') ] V^T.
/// The first-order correction is dissipative iff this matrix is positive
/// semidefinite.
inline Eigen::MatrixXd diffusion_coefficient(const GpcBasis& basis,
                                             const GpcVector& rho,
                                             const ModelConfig& cfg) {
  detail::require_positive(basis, rho, "diffusion_coefficient");
  const GpcVector d_rho = eigenvalues_of(basis.frame, rho);
  const GpcVector d_veq = equilibrium_slope_eigen(basis, rho, cfg);
  const GpcVector d_h = hesitation_slope_eigen(basis, rho, cfg);
  const GpcVector diag =
      -(d_rho.array().square() * d_veq.array() * (d_veq + d_h).array());
  return basis.frame.vectors * diag.asDiagonal() *
         basis.frame.vectors.transpose();
}

struct StabilityReport {
  GpcVector lambda1;
  GpcVector lambda_eq;
  GpcVector lambda2;
  /// lambda1 <= lambda_eq <= lambda2 per frame column (within tolerance).
  bool subcharacteristic_pass = false;
  /// D_Veq'(rho) < 0 in every column.
  bool equilibrium_slope_negative = false;
  double min_diffusion_eigenvalue = 0.0;
  bool diffusion_psd = false;
  /// Whether the condition and the definiteness of mu agree on this probe.
  bool equivalence_consistent = false;

  bool pass() const {
    return subcharacteristic_pass && equilibrium_slope_negative;
  }
};

/// Evaluates the sub-characteristic condition on the relaxation manifold
/// z = rho * (V_eq(rho) + h(rho)) and the definiteness of the diffusion
/// coefficient at the same probe.
inline StabilityReport subcharacteristic_check(const GpcBasis& basis,
                                               const GpcVector& rho,
                                               const ModelConfig& cfg,
                                               double tol = 1e-10) {
  detail::require_positive(basis, rho, "subcharacteristic_check");
  StabilityReport report;

  const GpcState equilibrium{rho, equilibrium_z(basis, rho, cfg)};
  const CharSpeeds speeds = char_speeds(basis, equilibrium, cfg);
  report.lambda1 = speeds.lambda1;
  report.lambda2 = speeds.lambda2;
  report.lambda_eq = equilibrium_speeds(basis, rho, cfg);

  report.subcharacteristic_pass =
      ((report.lambda_eq - report.lambda1).minCoeff() >= -tol) &&
      ((report.lambda2 - report.lambda_eq).minCoeff() >= -tol);
  report.equilibrium_slope_negative =
      equilibrium_slope_eigen(basis, rho, cfg).maxCoeff() < 0.0;

  const Eigen::MatrixXd mu = diffusion_coefficient(basis, rho, cfg);
  const Eigen::MatrixXd sym = 0.5 * (mu + mu.transpose());
  report.min_diffusion_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().minCoeff();
  report.diffusion_psd = report.min_diffusion_eigenvalue >= -tol;
  report.equivalence_consistent = report.pass() == report.diffusion_psd;
  return report;
}

struct HyperbolicityRecord {
  /// Largest |Im| over the dense Jacobian spectrum.
  double max_imaginary = 0.0;
  /// Condition number of the dense eigenvector matrix.
  double eigenvector_condition = 0.0;
  /// Max distance between the sorted dense spectrum and the sorted
  /// frame-diagonal speeds {lambda1} u {lambda2}.
  double speed_multiset_gap = 0.0;
  bool certified = false;
};

/// Certifies strong hyperbolicity of one state against the dense Jacobian.
/// States violating positivity are rejected before assembly.
inline HyperbolicityRecord certify_state(const GpcBasis& basis,
                                         const GpcState& state,
                                         const ModelConfig& cfg,
                                         double imag_tol = 1e-9) {
  const Eigen::MatrixXd jac = flux_jacobian_dense(basis, state, cfg);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(jac);

  HyperbolicityRecord record;
  record.max_imaginary = solver.eigenvalues().imag().cwiseAbs().maxCoeff();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(solver.eigenvectors());
  const double smin = svd.singularValues().minCoeff();
  record.eigenvector_condition =
      smin > 0.0 ? svd.singularValues().maxCoeff() / smin
                 : std::numeric_limits<double>::infinity();

  const CharSpeeds speeds = char_speeds(basis, state, cfg);
  const int n = basis.size();
  std::vector<double> diagonal(2 * n), dense(2 * n);
  for (int s = 0; s < n; ++s) {
    diagonal[s] = speeds.lambda1[s];
    diagonal[n + s] = speeds.lambda2[s];
  }
  for (int s = 0; s < 2 * n; ++s) dense[s] = solver.eigenvalues()[s].real();
  std::sort(diagonal.begin(), diagonal.end());
  std::sort(dense.begin(), dense.end());
  for (int s = 0; s < 2 * n; ++s) {
    record.speed_multiset_gap =
        std::max(record.speed_multiset_gap, std::abs(diagonal[s] - dense[s]));
  }

  record.certified = record.max_imaginary <= imag_tol;
  return record;
}

inline std::vector<HyperbolicityRecord> hyperbolicity_certificate(
    const GpcBasis& basis, const std::vector<GpcState>& states,
    const ModelConfig& cfg, double imag_tol = 1e-9) {
  std::vector<HyperbolicityRecord> records;
  records.reserve(states.size());
  for (const GpcState& state : states) {
    records.push_back(certify_state(basis, state, cfg, imag_tol));
  }
  return records;
}

}  // namespace sgarz
