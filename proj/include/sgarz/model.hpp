#pragma once

// Galerkin formulation of the Aw-Rascle-Zhang traffic model.
//
// The state per cell is the coefficient pair (rho, z) with z = rho*(v+h(rho)).
// All nonlinear terms reduce to Galerkin products, matrix powers of P(rho)
// through the shared frame, and the auxiliary velocity v = P(rho)^{-1} z -
// h(rho). Characteristic speeds come out diagonal in the frame:
// lambda2 = D(v), lambda1 = D(v) - D_h'(rho) D(rho).

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>

#include "sgarz/basis.hpp"
#include "sgarz/errors.hpp"
#include "sgarz/galerkin.hpp"

namespace sgarz {

enum class Closure {
  /// V_eq(rho) = (v_max/rho_max) (rho_max - rho^gamma), h = V_eq(0) - V_eq.
  greenshields,
  /// Normalized linear closure h(rho) = rho, V_eq(rho) = 1 - rho.
  linear_lwr,
};

struct ModelConfig {
  Closure closure = Closure::greenshields;
  int gamma = 1;
  double v_max = 1.0;
  double rho_max = 1.0;
  /// Relaxation time; nullopt disables the source term entirely
  /// (homogeneous model), which is distinct from any finite value.
  std::optional<double> tau;
  /// Slope of h for the linear closure. Values != 1 intentionally break the
  /// pairing between hesitation and equilibrium velocity; used to probe
  /// sub-characteristic violations.
  double hesitation_slope = 1.0;

  void validate() const {
    if (gamma < 1) throw ConfigError("ModelConfig: gamma must be >= 1");
    if (!(v_max > 0.0)) throw ConfigError("ModelConfig: v_max must be > 0");
    if (!(rho_max > 0.0)) throw ConfigError("ModelConfig: rho_max must be > 0");
    if (tau && !(*tau >= 0.0)) {
      throw ConfigError("ModelConfig: tau must be >= 0");
    }
    if (!(hesitation_slope > 0.0)) {
      throw ConfigError("ModelConfig: hesitation_slope must be > 0");
    }
  }
};

/// Coefficient state of one cell.
struct GpcState {
  GpcVector rho;
  GpcVector z;
};

/// Diagonal characteristic speeds in the shared frame, one entry per column.
struct CharSpeeds {
  GpcVector lambda1;
  GpcVector lambda2;
};

struct FluxModes {
  GpcVector rho;
  GpcVector z;
};

// --- scalar closure functions (mode-0 / deterministic limit) ---

inline double hesitation_scalar(double rho, const ModelConfig& cfg) {
  if (cfg.closure == Closure::linear_lwr) return cfg.hesitation_slope * rho;
  return cfg.v_max / cfg.rho_max * std::pow(rho, cfg.gamma);
}

inline double hesitation_prime_scalar(double rho, const ModelConfig& cfg) {
  if (cfg.closure == Closure::linear_lwr) return cfg.hesitation_slope;
  return cfg.gamma * cfg.v_max / cfg.rho_max * std::pow(rho, cfg.gamma - 1);
}

inline double equilibrium_scalar(double rho, const ModelConfig& cfg) {
  if (cfg.closure == Closure::linear_lwr) return 1.0 - rho;
  return cfg.v_max / cfg.rho_max * (cfg.rho_max - std::pow(rho, cfg.gamma));
}

inline double equilibrium_prime_scalar(double rho, const ModelConfig& cfg) {
  if (cfg.closure == Closure::linear_lwr) return -1.0;
  return -cfg.gamma * cfg.v_max / cfg.rho_max * std::pow(rho, cfg.gamma - 1);
}

// --- Galerkin closure functions ---

/// Coefficients of the hesitation function h(rho).
inline GpcVector hesitation_modes(const GpcBasis& basis, const GpcVector& rho,
                                  const ModelConfig& cfg) {
  if (cfg.closure == Closure::linear_lwr) return cfg.hesitation_slope * rho;
  return cfg.v_max / cfg.rho_max * galerkin_power(basis.frame, rho, cfg.gamma);
}

/// Diagonal D_h' of the hesitation Jacobian in the shared frame.
inline GpcVector hesitation_slope_eigen(const GpcBasis& basis,
                                        const GpcVector& rho,
                                        const ModelConfig& cfg) {
  const int n = basis.size();
  if (cfg.closure == Closure::linear_lwr) {
    return GpcVector::Constant(n, cfg.hesitation_slope);
  }
  GpcVector d = eigenvalues_of(basis.frame, rho);
  for (int s = 0; s < n; ++s) {
    d[s] = cfg.gamma * cfg.v_max / cfg.rho_max * std::pow(d[s], cfg.gamma - 1);
  }
  return d;
}

/// Coefficients of the equilibrium velocity V_eq(rho).
inline GpcVector equilibrium_modes(const GpcBasis& basis, const GpcVector& rho,
                                   const ModelConfig& cfg) {
  if (cfg.closure == Closure::linear_lwr) {
    return constant_modes(basis.size(), 1.0) - rho;
  }
  return constant_modes(basis.size(), cfg.v_max) -
         hesitation_modes(basis, rho, cfg);
}

/// Diagonal D_Veq' of the equilibrium-velocity Jacobian.
inline GpcVector equilibrium_slope_eigen(const GpcBasis& basis,
                                         const GpcVector& rho,
                                         const ModelConfig& cfg) {
  if (cfg.closure == Closure::linear_lwr) {
    return GpcVector::Constant(basis.size(), -1.0);
  }
  return -hesitation_slope_eigen(basis, rho, cfg);
}

/// Minimum eigenvalue of P(rho); positive for physically valid states.
inline double min_density_eigenvalue(const GpcBasis& basis,
                                     const GpcVector& rho) {
  return eigenvalues_of(basis.frame, rho).minCoeff();
}

/// Auxiliary velocity v = P(rho)^{-1} z - h(rho).
inline GpcVector auxiliary_velocity(const GpcBasis& basis,
                                    const GpcState& state,
                                    const ModelConfig& cfg) {
  return p_power_apply(basis.frame, state.rho, -1, state.z) -
         hesitation_modes(basis, state.rho, cfg);
}

/// Equilibrium value of z on the relaxation manifold:
/// M(rho) = rho * (V_eq(rho) + h(rho)).
inline GpcVector equilibrium_z(const GpcBasis& basis, const GpcVector& rho,
                               const ModelConfig& cfg) {
  return galerkin_product(basis, rho,
                          equilibrium_modes(basis, rho, cfg) +
                              hesitation_modes(basis, rho, cfg));
}

/// Conservative flux (P(rho) v, P(z) v).
inline FluxModes flux(const GpcBasis& basis, const GpcState& state,
                      const ModelConfig& cfg) {
  const GpcVector v = auxiliary_velocity(basis, state, cfg);
  return FluxModes{galerkin_product(basis, state.rho, v),
                   galerkin_product(basis, state.z, v)};
}

/// z-component of the relaxation source, rho * (V_eq(rho) - v) = M(rho) - z.
/// The rho-component is identically zero.
inline GpcVector source(const GpcBasis& basis, const GpcState& state,
                        const ModelConfig& cfg) {
  return equilibrium_z(basis, state.rho, cfg) - state.z;
}

inline CharSpeeds char_speeds(const GpcBasis& basis, const GpcState& state,
                              const ModelConfig& cfg) {
  const GpcVector v = auxiliary_velocity(basis, state, cfg);
  CharSpeeds speeds;
  speeds.lambda2 = eigenvalues_of(basis.frame, v);
  speeds.lambda1 =
      speeds.lambda2 - hesitation_slope_eigen(basis, state.rho, cfg)
                           .cwiseProduct(eigenvalues_of(basis.frame, state.rho));
  return speeds;
}

/// Conservative envelope max(|lambda1|, |lambda2|) over all frame columns.
/// Strictly safer than |lambda2| alone when some velocity eigenvalue sits
/// near zero while rho h' is large.
inline double max_wave_speed(const GpcBasis& basis, const GpcState& state,
                             const ModelConfig& cfg) {
  const CharSpeeds speeds = char_speeds(basis, state, cfg);
  return std::max(speeds.lambda1.cwiseAbs().maxCoeff(),
                  speeds.lambda2.cwiseAbs().maxCoeff());
}

}  // namespace sgarz
