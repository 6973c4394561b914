#pragma once

// First-order finite-volume discretization of the conservative Galerkin
// system: local Lax-Friedrichs fluxes, implicit-explicit time stepping with
// the relaxation solved exactly (the source is linear in z), zero-gradient
// ghost cells, and CFL-limited steps capped to land on snapshot times.
//
// One step: first relax z implicitly,
//   z^(1) = tau/(tau+dt) z^k + dt/(tau+dt) M(rho^k),
// then apply the explicit conservative transport update to the relaxed
// state. tau = 0 degenerates to the exact projection z^(1) = M(rho^k); a
// disabled source skips the relaxation stage entirely.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sgarz/model.hpp"
#include "sgarz/riemann.hpp"

namespace sgarz {

struct Grid {
  double x_end = 1.0;
  int cells = 0;

  double dx() const { return x_end / cells; }
  double center(int j) const { return (j + 0.5) * dx(); }

  void validate() const {
    if (cells < 4) throw ConfigError("Grid: need at least 4 cells");
    if (!(x_end > 0.0)) throw ConfigError("Grid: x_end must be positive");
  }
};

enum class Boundary { zero_gradient };

struct SolverConfig {
  double cfl = 0.45;
  double t_end = 0.0;
  Boundary boundary = Boundary::zero_gradient;
  std::vector<double> snapshot_times;

  void validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) {
      throw ConfigError("SolverConfig: cfl must lie in (0, 1]");
    }
    if (!(t_end > 0.0)) throw ConfigError("SolverConfig: t_end must be positive");
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
      throw ConfigError("SolverConfig: snapshot times must be sorted");
    }
    for (double t : snapshot_times) {
      if (t < 0.0 || t > t_end) {
        throw ConfigError("SolverConfig: snapshot times must lie in [0, t_end]");
      }
    }
  }
};

struct FieldState {
  double time = 0.0;
  std::vector<GpcState> cells;
};

struct StepDiagnostics {
  int step;
  double time;
  double dt;
  double max_speed;
  double total_mass;
};

struct Snapshot {
  double time;
  FieldState state;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  std::vector<StepDiagnostics> diagnostics;
};

/// Total mass carried by the mean density mode, sum_j rho_0,j dx.
inline double total_mass(const FieldState& field, const Grid& grid) {
  double sum = 0.0;
  for (const GpcState& cell : field.cells) sum += cell.rho[0];
  return sum * grid.dx();
}

/// Local Lax-Friedrichs flux with the conservative wave-speed envelope of
/// both adjacent states as dissipation coefficient. Consistent:
/// llf_flux(u, u) equals the exact flux of u.
inline FluxModes llf_flux(const GpcBasis& basis, const GpcState& left,
                          const GpcState& right, const ModelConfig& cfg) {
  const FluxModes fl = flux(basis, left, cfg);
  const FluxModes fr = flux(basis, right, cfg);
  const double alpha = std::max(max_wave_speed(basis, left, cfg),
                                max_wave_speed(basis, right, cfg));
  return FluxModes{
      0.5 * (fl.rho + fr.rho) + 0.5 * alpha * (left.rho - right.rho),
      0.5 * (fl.z + fr.z) + 0.5 * alpha * (left.z - right.z)};
}

/// Largest wave-speed envelope over all cells.
inline double max_field_speed(const GpcBasis& basis, const FieldState& field,
                              const ModelConfig& cfg) {
  double speed = 0.0;
  for (const GpcState& cell : field.cells) {
    speed = std::max(speed, max_wave_speed(basis, cell, cfg));
  }
  return speed;
}

/// CFL-limited step size, capped so the next snapshot or the end time is hit
/// exactly. A zero max speed returns the cap.
inline double cfl_timestep(const GpcBasis& basis, const FieldState& field,
                           const Grid& grid, const ModelConfig& model,
                           const SolverConfig& solver) {
  if (field.cells.empty()) throw ConfigError("cfl_timestep: empty field");
  double next_event = solver.t_end;
  for (double t : solver.snapshot_times) {
    if (t > field.time + 1e-12) {
      next_event = std::min(next_event, t);
      break;
    }
  }
  const double cap = next_event - field.time;
  const double speed = max_field_speed(basis, field, model);
  if (speed <= 0.0) return cap;
  return std::min(solver.cfl * grid.dx() / speed, cap);
}

/// One IMEX step: exact implicit relaxation of z, then the explicit
/// conservative update with LLF fluxes of the relaxed state. Throws
/// PositivityError naming the cell and time if any updated density loses
/// positive definiteness.
inline FieldState imex_step(const GpcBasis& basis, const FieldState& field,
                            const Grid& grid, double dt,
                            const ModelConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("imex_step: dt must be positive");
  const int n_cells = static_cast<int>(field.cells.size());

  FieldState stage;
  stage.time = field.time;
  stage.cells.resize(n_cells);
  if (!cfg.tau) {
    stage.cells = field.cells;
  } else {
    const double tau = *cfg.tau;
    const double keep = tau / (tau + dt);
    const double relax = dt / (tau + dt);
    for (int j = 0; j < n_cells; ++j) {
      stage.cells[j].rho = field.cells[j].rho;
      stage.cells[j].z = keep * field.cells[j].z +
                         relax * equilibrium_z(basis, field.cells[j].rho, cfg);
    }
  }

  std::vector<FluxModes> cell_flux(n_cells);
  std::vector<double> cell_speed(n_cells);
  for (int j = 0; j < n_cells; ++j) {
    cell_flux[j] = flux(basis, stage.cells[j], cfg);
    cell_speed[j] = max_wave_speed(basis, stage.cells[j], cfg);
  }

  // Edge fluxes; zero-gradient ghosts make the boundary fluxes consistent
  // with the edge cells themselves.
  std::vector<FluxModes> edge(n_cells + 1);
  edge.front() = cell_flux.front();
  edge.back() = cell_flux.back();
  for (int j = 0; j + 1 < n_cells; ++j) {
    const double alpha = std::max(cell_speed[j], cell_speed[j + 1]);
    edge[j + 1] = FluxModes{
        0.5 * (cell_flux[j].rho + cell_flux[j + 1].rho) +
            0.5 * alpha * (stage.cells[j].rho - stage.cells[j + 1].rho),
        0.5 * (cell_flux[j].z + cell_flux[j + 1].z) +
            0.5 * alpha * (stage.cells[j].z - stage.cells[j + 1].z)};
  }

  FieldState next;
  next.time = field.time + dt;
  next.cells.resize(n_cells);
  const double lam = dt / grid.dx();
  for (int j = 0; j < n_cells; ++j) {
    next.cells[j].rho =
        stage.cells[j].rho - lam * (edge[j + 1].rho - edge[j].rho);
    next.cells[j].z = stage.cells[j].z - lam * (edge[j + 1].z - edge[j].z);
    const double min_eig = min_density_eigenvalue(basis, next.cells[j].rho);
    if (min_eig <= kPositivityFloor) {
      throw PositivityError(
          "imex_step: density lost positivity in cell " + std::to_string(j) +
              " at t = " + std::to_string(next.time) + " (min eigenvalue " +
              std::to_string(min_eig) + ")",
          min_eig);
    }
  }
  return next;
}

/// Advances the field to t_end, recording snapshots at the requested times
/// and per-step diagnostics.
inline RunResult run(const GpcBasis& basis, FieldState field, const Grid& grid,
                     const ModelConfig& model, const SolverConfig& solver) {
  model.validate();
  grid.validate();
  solver.validate();
  if (static_cast<int>(field.cells.size()) != grid.cells) {
    throw ConfigError("run: field does not match the grid");
  }

  RunResult result;
  std::size_t next_snapshot = 0;
  auto take_due_snapshots = [&]() {
    while (next_snapshot < solver.snapshot_times.size() &&
           field.time >= solver.snapshot_times[next_snapshot] - 1e-12) {
      result.snapshots.push_back(
          Snapshot{solver.snapshot_times[next_snapshot], field});
      ++next_snapshot;
    }
  };
  take_due_snapshots();

  int step = 0;
  while (field.time < solver.t_end - 1e-12) {
    const double speed = max_field_speed(basis, field, model);
    const double dt = cfl_timestep(basis, field, grid, model, solver);
    field = imex_step(basis, field, grid, dt, model);
    ++step;
    result.diagnostics.push_back(StepDiagnostics{
        step, field.time, dt, speed, total_mass(field, grid)});
    take_due_snapshots();
  }
  return result;
}

/// Cell-averaged initial data for an uncertain Riemann problem: left of the
/// jump the density law is projected onto the basis, right of it the state
/// is deterministic; z is reconstructed as rho * (v + h(rho)) per cell.
inline FieldState riemann_initial_state(const GpcBasis& basis,
                                        const RiemannProblem& problem,
                                        const Grid& grid,
                                        const ModelConfig& cfg) {
  problem.validate(cfg);
  const int n = basis.size();
  const GpcVector rho_left =
      basis.haar.project([&](double xi) { return problem.rho_left(xi); });
  const GpcVector rho_right = constant_modes(n, problem.rho_right);

  auto make_cell = [&](const GpcVector& rho, double v) {
    GpcState cell;
    cell.rho = rho;
    cell.z = galerkin_product(
        basis, rho, constant_modes(n, v) + hesitation_modes(basis, rho, cfg));
    return cell;
  };
  const GpcState left = make_cell(rho_left, problem.v_left);
  const GpcState right = make_cell(rho_right, problem.v_right);

  FieldState field;
  field.cells.resize(grid.cells);
  for (int j = 0; j < grid.cells; ++j) {
    field.cells[j] = grid.center(j) < problem.jump_position ? left : right;
  }
  return field;
}

}  // namespace sgarz
