#pragma once

// CSV artifacts. Numbers are written with 17 significant digits so doubles
// survive a write/parse round trip bit-exactly.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sgarz/errors.hpp"
#include "sgarz/statistics.hpp"

namespace sgarz::csv {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

inline void write_stat_summary(const std::string& path,
                               const StatSummary& summary) {
  std::ofstream out = open_output(path);
  out << "x,mean,std,lower,upper\n";
  for (std::size_t j = 0; j < summary.size(); ++j) {
    out << format_double(summary.x[j]) << ',' << format_double(summary.mean[j])
        << ',' << format_double(summary.stddev[j]) << ','
        << format_double(summary.lower[j]) << ','
        << format_double(summary.upper[j]) << '\n';
  }
}

inline StatSummary read_stat_summary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "x,mean,std,lower,upper") {
    throw IoError(path + ": not a statistics file");
  }
  StatSummary summary;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double values[5];
    for (int c = 0; c < 5; ++c) {
      if (!std::getline(row, cell, ',')) {
        throw IoError(path + ": short row at line " + std::to_string(line_no));
      }
      char* end = nullptr;
      values[c] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw IoError(path + ": bad number at line " + std::to_string(line_no));
      }
    }
    summary.x.push_back(values[0]);
    summary.mean.push_back(values[1]);
    summary.stddev.push_back(values[2]);
    summary.lower.push_back(values[3]);
    summary.upper.push_back(values[4]);
  }
  if (summary.size() < 2) throw IoError(path + ": too few rows");
  return summary;
}

/// Grid implied by the cell centers of a summary (uniform spacing assumed).
inline Grid summary_grid(const StatSummary& summary) {
  const double dx = summary.x[1] - summary.x[0];
  Grid grid;
  grid.cells = static_cast<int>(summary.size());
  grid.x_end = dx * grid.cells;
  return grid;
}

/// One row per cell: x, then the density modes, then the z modes.
inline void write_snapshot(const std::string& path, const FieldState& field,
                           const Grid& grid) {
  std::ofstream out = open_output(path);
  const int n = field.cells.empty() ? 0 : static_cast<int>(field.cells[0].rho.size());
  out << "x";
  for (int k = 0; k < n; ++k) out << ",rho_" << k;
  for (int k = 0; k < n; ++k) out << ",z_" << k;
  out << '\n';
  for (std::size_t j = 0; j < field.cells.size(); ++j) {
    out << format_double(grid.center(static_cast<int>(j)));
    for (int k = 0; k < n; ++k) {
      out << ',' << format_double(field.cells[j].rho[k]);
    }
    for (int k = 0; k < n; ++k) {
      out << ',' << format_double(field.cells[j].z[k]);
    }
    out << '\n';
  }
}

inline void write_diagnostics(const std::string& path,
                              const std::vector<StepDiagnostics>& diagnostics) {
  std::ofstream out = open_output(path);
  out << "step,t,dt,max_speed,total_mass\n";
  for (const StepDiagnostics& d : diagnostics) {
    out << d.step << ',' << format_double(d.time) << ',' << format_double(d.dt)
        << ',' << format_double(d.max_speed) << ','
        << format_double(d.total_mass) << '\n';
  }
}

}  // namespace sgarz::csv
