#pragma once

// Pseudo-spectral Galerkin algebra over the wavelet basis.
//
// The product of two truncated expansions, projected back onto the basis, is
// the linear map P(a) = sum_k a_k M_k applied to the other coefficient
// vector. Because all basis members are piecewise constant on the shared
// dyadic partition, the product can equivalently be evaluated pointwise on
// that partition and re-projected, which costs O(K^2) instead of assembling
// P. Matrix powers and inverses of P always go through the shared
// eigenvector frame.

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "sgarz/basis.hpp"
#include "sgarz/errors.hpp"

namespace sgarz {

/// States with min eigenvalue of P(rho) at or below this are treated as
/// vacuum-adjacent and rejected wherever P^{-1} is required.
inline constexpr double kPositivityFloor = 1e-10;

namespace detail {

inline void require_same_size(const GpcVector& a, const GpcVector& b,
                              const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": length mismatch");
  }
}

}  // namespace detail

/// Dense operator P(a) = sum_k a_k M_k.
inline Eigen::MatrixXd p_matrix(const TripleProductSet& mats,
                                const GpcVector& a) {
  if (a.size() != mats.size()) {
    throw std::invalid_argument("p_matrix: length mismatch");
  }
  return detail::weighted_matrix_sum(mats, a);
}

/// Galerkin product a * b = P(a) b, evaluated pointwise on the dyadic
/// partition and re-projected. Algebraically identical to P(a) b.
inline GpcVector galerkin_product(const GpcBasis& basis, const GpcVector& a,
                                  const GpcVector& b) {
  detail::require_same_size(a, b, "galerkin_product");
  if (a.size() != basis.size()) {
    throw std::invalid_argument("galerkin_product: basis size mismatch");
  }
  const Eigen::MatrixXd& table = basis.haar.values();
  const Eigen::VectorXd va = table * a;
  const Eigen::VectorXd vb = table * b;
  return table.transpose() * va.cwiseProduct(vb) / basis.size();
}

/// Eigenvalues D(a) of P(a) in the shared frame: one matrix-vector product.
inline GpcVector eigenvalues_of(const EigenFrame& frame, const GpcVector& a) {
  if (a.size() != frame.size()) {
    throw std::invalid_argument("eigenvalues_of: length mismatch");
  }
  return frame.spectra * a;
}

/// Applies P(a)^exponent to x through the frame: V D(a)^exponent V^T x.
/// Negative exponents require P(a) strictly positive definite.
inline GpcVector p_power_apply(const EigenFrame& frame, const GpcVector& a,
                               int exponent, const GpcVector& x) {
  detail::require_same_size(a, x, "p_power_apply");
  if (exponent == 0) return x;
  GpcVector d = eigenvalues_of(frame, a);
  if (exponent < 0) {
    const double min_eig = d.minCoeff();
    if (min_eig <= kPositivityFloor) {
      throw PositivityError(
          "p_power_apply: P(a) is not positive definite (min eigenvalue " +
              std::to_string(min_eig) + ")",
          min_eig);
    }
  }
  for (int s = 0; s < d.size(); ++s) d[s] = std::pow(d[s], exponent);
  return frame.vectors * d.cwiseProduct(frame.vectors.transpose() * x);
}

/// Galerkin power P(a)^{gamma-1} a, the coefficient vector of the pointwise
/// power of the truncated expansion. gamma = 1 returns `a` unchanged.
inline GpcVector galerkin_power(const EigenFrame& frame, const GpcVector& a,
                                int gamma) {
  if (gamma < 1) throw std::invalid_argument("galerkin_power: gamma >= 1");
  if (gamma == 1) return a;
  return p_power_apply(frame, a, gamma - 1, a);
}

/// Jacobian of the Galerkin power map: gamma V D(a)^{gamma-1} V^T.
inline Eigen::MatrixXd galerkin_power_jacobian(const EigenFrame& frame,
                                               const GpcVector& a, int gamma) {
  if (gamma < 1) {
    throw std::invalid_argument("galerkin_power_jacobian: gamma >= 1");
  }
  const int n = frame.size();
  if (gamma == 1) return Eigen::MatrixXd::Identity(n, n);
  GpcVector d = eigenvalues_of(frame, a);
  for (int s = 0; s < n; ++s) d[s] = std::pow(d[s], gamma - 1);
  return gamma * frame.vectors * d.asDiagonal() * frame.vectors.transpose();
}

/// Residual of the operator identity P(a * b) = P(a) P(b); small only for
/// bases whose triple-product matrices commute.
inline double homomorphism_check(const GpcBasis& basis, const GpcVector& a,
                                 const GpcVector& b) {
  const Eigen::MatrixXd pa = p_matrix(basis.products, a);
  const Eigen::MatrixXd pb = p_matrix(basis.products, b);
  const Eigen::MatrixXd pab =
      p_matrix(basis.products, galerkin_product(basis, a, b));
  return (pab - pa * pb).cwiseAbs().maxCoeff();
}

}  // namespace sgarz
