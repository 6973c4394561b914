#pragma once

// Per-cell solution statistics and their comparison. The confidence band is
// mean +/- one standard deviation, applied identically to Galerkin and
// Monte-Carlo summaries.

#include <cmath>
#include <vector>

#include "sgarz/errors.hpp"
#include "sgarz/solver.hpp"

namespace sgarz {

struct StatSummary {
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return x.size(); }
};

/// Density statistics of a Galerkin field: the mean is the 0-th mode and the
/// variance is the sum of the squared higher modes (orthonormality).
inline StatSummary gpc_statistics(const FieldState& field, const Grid& grid) {
  StatSummary summary;
  const int n_cells = static_cast<int>(field.cells.size());
  summary.x.resize(n_cells);
  summary.mean.resize(n_cells);
  summary.stddev.resize(n_cells);
  summary.lower.resize(n_cells);
  summary.upper.resize(n_cells);
  for (int j = 0; j < n_cells; ++j) {
    const GpcVector& rho = field.cells[j].rho;
    const double mean = rho[0];
    const double variance = rho.squaredNorm() - mean * mean;
    const double stddev = std::sqrt(std::max(variance, 0.0));
    summary.x[j] = grid.center(j);
    summary.mean[j] = mean;
    summary.stddev[j] = stddev;
    summary.lower[j] = mean - stddev;
    summary.upper[j] = mean + stddev;
  }
  return summary;
}

struct ComparisonReport {
  double l1_mean = 0.0;
  double linf_mean = 0.0;
  double l1_lower = 0.0;
  double linf_lower = 0.0;
  double l1_upper = 0.0;
  double linf_upper = 0.0;

  double max_l1_band() const { return std::max(l1_lower, l1_upper); }
  double max_linf_band() const { return std::max(linf_lower, linf_upper); }
};

/// L1 (dx-weighted) and Linf distances between two summaries on the same grid.
inline ComparisonReport compare_summaries(const StatSummary& a,
                                          const StatSummary& b,
                                          const Grid& grid) {
  if (a.size() != b.size() ||
      static_cast<int>(a.size()) != grid.cells) {
    throw GridMismatchError("compare_summaries: summaries on different grids");
  }
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a.x[j] - b.x[j]) > 1e-12) {
      throw GridMismatchError("compare_summaries: cell centers differ");
    }
  }
  ComparisonReport report;
  const double dx = grid.dx();
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d_mean = std::abs(a.mean[j] - b.mean[j]);
    const double d_lower = std::abs(a.lower[j] - b.lower[j]);
    const double d_upper = std::abs(a.upper[j] - b.upper[j]);
    report.l1_mean += dx * d_mean;
    report.l1_lower += dx * d_lower;
    report.l1_upper += dx * d_upper;
    report.linf_mean = std::max(report.linf_mean, d_mean);
    report.linf_lower = std::max(report.linf_lower, d_lower);
    report.linf_upper = std::max(report.linf_upper, d_upper);
  }
  return report;
}

}  // namespace sgarz
