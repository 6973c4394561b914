#pragma once

// Haar wavelet chaos basis on the unit interval.
//
// The basis of level J holds K+1 = 2^(J+1) orthonormal functions of a
// uniformly distributed variable xi in [0,1): the constant function, the
// mother wavelet psi, and the scaled translates 2^(j/2) psi(2^j xi - k) in
// lexicographic order. Every member is constant on the 2^(J+1) uniform
// dyadic subintervals, so inner products and triple products reduce to
// exact weighted sums over that partition; the only error is roundoff.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sgarz/errors.hpp"
#include "sgarz/quadrature.hpp"

namespace sgarz {

using GpcVector = Eigen::VectorXd;

class HaarBasis {
 public:
  static constexpr int kDefaultMaxSize = 1024;

  explicit HaarBasis(int level, int max_size = kDefaultMaxSize)
      : level_(level) {
    if (level < 0) throw SizeLimitError("HaarBasis: level must be >= 0");
    if (level >= 31 || (std::int64_t{1} << (level + 1)) > max_size) {
      throw SizeLimitError("HaarBasis: level " + std::to_string(level) +
                           " exceeds maximum basis size " +
                           std::to_string(max_size));
    }
    size_ = 1 << (level + 1);
    values_ = Eigen::MatrixXd::Zero(size_, size_);
    values_.col(0).setOnes();
    for (int j = 0; j <= level_; ++j) {
      const double amp = std::sqrt(static_cast<double>(1 << j));
      const int support = size_ >> j;  // subintervals under psi_{j,k}
      const int half = support / 2;
      for (int k = 0; k < (1 << j); ++k) {
        const int col = (1 << j) + k;
        const int start = k * support;
        values_.col(col).segment(start, half).setConstant(amp);
        values_.col(col).segment(start + half, half).setConstant(-amp);
      }
    }
  }

  int level() const { return level_; }
  /// Number of basis functions, K+1; equals the number of dyadic
  /// subintervals on which every member is constant.
  int size() const { return size_; }

  /// values()(s, k) is phi_k on the s-th subinterval [s/n, (s+1)/n).
  const Eigen::MatrixXd& values() const { return values_; }

  double evaluate(int k, double xi) const {
    return values_(subinterval(xi), k);
  }

  /// Sum of modes_k phi_k(xi).
  double evaluate_expansion(const GpcVector& modes, double xi) const {
    require_size(modes, "evaluate_expansion");
    return values_.row(subinterval(xi)).dot(modes);
  }

  /// Exact inner product <phi_i, phi_j> under the uniform measure.
  double inner_product(int i, int j) const {
    return values_.col(i).dot(values_.col(j)) / size_;
  }

  /// Haar coefficients <f, phi_k> of a function given by its integrals over
  /// the dyadic subintervals. Exact: one averaging/differencing pyramid.
  GpcVector coefficients_from_cell_integrals(std::vector<double> integrals) const {
    if (static_cast<int>(integrals.size()) != size_) {
      throw std::invalid_argument("coefficients_from_cell_integrals: bad size");
    }
    GpcVector modes(size_);
    for (int j = level_; j >= 0; --j) {
      const int pairs = 1 << j;  // wavelets at scale j
      const double amp = std::sqrt(static_cast<double>(pairs));
      for (int k = 0; k < pairs; ++k) {
        modes[pairs + k] = amp * (integrals[2 * k] - integrals[2 * k + 1]);
        integrals[k] = integrals[2 * k] + integrals[2 * k + 1];
      }
    }
    modes[0] = integrals[0];
    return modes;
  }

  /// Orthonormal projection <f, phi_k> via composite Gauss-Legendre
  /// quadrature with `points_per_cell` nodes on each dyadic subinterval.
  /// Exact for f polynomial of degree <= 2*points_per_cell - 1 per cell.
  GpcVector project(const std::function<double(double)>& f,
                    int points_per_cell = 5) const {
    const QuadratureRule rule = gauss_legendre(points_per_cell);
    const double width = 1.0 / size_;
    std::vector<double> integrals(size_);
    for (int s = 0; s < size_; ++s) {
      integrals[s] = integrate(rule, f, s * width, (s + 1) * width);
    }
    return coefficients_from_cell_integrals(std::move(integrals));
  }

  int subinterval(double xi) const {
    if (!(xi >= 0.0 && xi < 1.0)) {
      throw DomainError("HaarBasis: sample " + std::to_string(xi) +
                        " outside [0,1)");
    }
    int s = static_cast<int>(xi * size_);
    return s < size_ ? s : size_ - 1;
  }

 private:
  void require_size(const GpcVector& v, const char* where) const {
    if (v.size() != size_) {
      throw std::invalid_argument(std::string(where) +
                                  ": mode vector length mismatch");
    }
  }

  int level_;
  int size_;
  Eigen::MatrixXd values_;
};

/// The Galerkin triple-product matrices M_k with entries <phi_k, phi_i phi_j>.
struct TripleProductSet {
  std::vector<Eigen::MatrixXd> mats;

  int size() const { return static_cast<int>(mats.size()); }
  const Eigen::MatrixXd& operator[](int k) const { return mats[k]; }
};

/// Computes all M_k exactly. Each pairwise product phi_i phi_j is piecewise
/// constant on the dyadic partition, so one pyramid transform per pair gives
/// the whole column <phi_k, phi_i phi_j> for k = 0..K.
inline TripleProductSet triple_products(const HaarBasis& basis) {
  const int n = basis.size();
  const Eigen::MatrixXd& table = basis.values();
  TripleProductSet set;
  set.mats.assign(n, Eigen::MatrixXd::Zero(n, n));
  std::vector<double> integrals(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int s = 0; s < n; ++s) {
        integrals[s] = table(s, i) * table(s, j) / n;
      }
      const GpcVector column = basis.coefficients_from_cell_integrals(integrals);
      for (int k = 0; k < n; ++k) {
        set.mats[k](i, j) = column[k];
        set.mats[k](j, i) = column[k];
      }
    }
  }
  return set;
}

/// Shared orthonormal eigenvector frame V of all triple-product matrices,
/// together with the per-matrix spectra it induces.
struct EigenFrame {
  /// Columns are the shared eigenvectors.
  Eigen::MatrixXd vectors;
  /// spectra(s, k) is the s-th diagonal entry of V^T M_k V, so the
  /// eigenvalues of P(a) = sum_k a_k M_k are simply spectra * a.
  Eigen::MatrixXd spectra;

  int size() const { return static_cast<int>(vectors.rows()); }
};

namespace detail {

inline Eigen::MatrixXd weighted_matrix_sum(const TripleProductSet& mats,
                                           const GpcVector& coeffs) {
  const int n = mats.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) out += coeffs[k] * mats[k];
  return out;
}

}  // namespace detail

/// Builds the shared frame by diagonalizing P(a) for a probe vector with
/// strictly decreasing distinct entries a_k = 1/(k+2), then verifies that the
/// resulting V diagonalizes every M_k. Columns are ordered by descending
/// probe eigenvalue and signed so the first nonzero entry is positive, which
/// makes the output deterministic.
inline EigenFrame eigen_frame(const TripleProductSet& mats,
                              double offdiag_tol = 1e-10) {
  const int n = mats.size();
  GpcVector probe(n);
  for (int k = 0; k < n; ++k) probe[k] = 1.0 / (k + 2);
  const Eigen::MatrixXd p = detail::weighted_matrix_sum(mats, probe);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(p);
  if (solver.info() != Eigen::Success) {
    throw AssumptionError("eigen_frame: probe eigendecomposition failed", -1, -1);
  }

  EigenFrame frame;
  frame.vectors.resize(n, n);
  for (int c = 0; c < n; ++c) {
    // Eigen returns ascending eigenvalues; store descending.
    Eigen::VectorXd col = solver.eigenvectors().col(n - 1 - c);
    for (int r = 0; r < n; ++r) {
      if (std::abs(col[r]) > 1e-12) {
        if (col[r] < 0.0) col = -col;
        break;
      }
    }
    frame.vectors.col(c) = col;
  }

  frame.spectra.resize(n, n);
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXd d = frame.vectors.transpose() * mats[k] * frame.vectors;
    double offdiag = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (r != c) offdiag = std::max(offdiag, std::abs(d(r, c)));
      }
    }
    if (offdiag > offdiag_tol) {
      throw AssumptionError(
          "eigen_frame: matrix " + std::to_string(k) +
              " is not diagonalized by the shared frame (off-diagonal " +
              std::to_string(offdiag) + ")",
          k, -1);
    }
    frame.spectra.col(k) = d.diagonal();
  }
  return frame;
}

struct AssumptionOptions {
  int random_pairs = 50;
  std::uint64_t seed = 0x5eedbeefULL;
  double tol_commuting = 1e-12;        // pairwise commutators of M_k
  double tol_diagonalization = 1e-10;  // off-diagonal residual of V^T M_k V
  double tol_operator_commute = 1e-11; // commutators of P(a) P(b)
};

/// Residual report for the three basis assumptions: pairwise commuting
/// triple-product matrices, simultaneous diagonalization by the shared
/// frame, and commuting Galerkin operators over random coefficient pairs.
struct AssumptionReport {
  bool commuting_pass = false;
  double commuting_max = 0.0;
  int commuting_worst_a = -1;
  int commuting_worst_b = -1;

  bool diagonalization_pass = false;
  double diagonalization_max = 0.0;
  int diagonalization_worst = -1;
  double orthogonality_residual = 0.0;

  bool operator_commute_pass = false;
  double operator_commute_max = 0.0;

  bool all_pass() const {
    return commuting_pass && diagonalization_pass && operator_commute_pass;
  }
};

inline AssumptionReport check_assumptions(const TripleProductSet& mats,
                                          const EigenFrame& frame,
                                          const AssumptionOptions& opts = {}) {
  const int n = mats.size();
  AssumptionReport report;

  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double resid =
          (mats[a] * mats[b] - mats[b] * mats[a]).cwiseAbs().maxCoeff();
      if (resid > report.commuting_max) {
        report.commuting_max = resid;
        report.commuting_worst_a = a;
        report.commuting_worst_b = b;
      }
    }
  }
  report.commuting_pass = report.commuting_max <= opts.tol_commuting;

  report.orthogonality_residual =
      (frame.vectors.transpose() * frame.vectors -
       Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd d = frame.vectors.transpose() * mats[k] * frame.vectors;
    d.diagonal().setZero();
    const double resid = d.cwiseAbs().maxCoeff();
    if (resid > report.diagonalization_max) {
      report.diagonalization_max = resid;
      report.diagonalization_worst = k;
    }
  }
  report.diagonalization_pass =
      report.diagonalization_max <= opts.tol_diagonalization &&
      report.orthogonality_residual <= 1e-12;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < opts.random_pairs; ++trial) {
    GpcVector a(n), b(n);
    for (int k = 0; k < n; ++k) a[k] = normal(rng);
    for (int k = 0; k < n; ++k) b[k] = normal(rng);
    const Eigen::MatrixXd pa = detail::weighted_matrix_sum(mats, a);
    const Eigen::MatrixXd pb = detail::weighted_matrix_sum(mats, b);
    const double resid = (pa * pb - pb * pa).cwiseAbs().maxCoeff();
    report.operator_commute_max = std::max(report.operator_commute_max, resid);
  }
  report.operator_commute_pass =
      report.operator_commute_max <= opts.tol_operator_commute;

  return report;
}

/// Everything downstream code needs about one basis level: the evaluation
/// table, the triple products, and the shared eigenvector frame.
struct GpcBasis {
  HaarBasis haar;
  TripleProductSet products;
  EigenFrame frame;

  static GpcBasis build(int level, int max_size = HaarBasis::kDefaultMaxSize) {
    HaarBasis haar(level, max_size);
    TripleProductSet products = triple_products(haar);
    EigenFrame frame = eigen_frame(products);
    return GpcBasis{std::move(haar), std::move(products), std::move(frame)};
  }

  int level() const { return haar.level(); }
  int size() const { return haar.size(); }
};

/// Coefficient vector (c, 0, ..., 0): the expansion of the constant c.
inline GpcVector constant_modes(int size, double c) {
  GpcVector v = GpcVector::Zero(size);
  v[0] = c;
  return v;
}

}  // namespace sgarz
