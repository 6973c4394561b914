#pragma once

// Exact self-similar Riemann solutions for the homogeneous ARZ system with
// linear hesitation and for the LWR equilibrium model. These are the
// reference targets the Galerkin solver is measured against.
//
// ARZ wave structure: w = v + h(rho) is invariant across the 1-wave family
// and v is continuous across the 2-contact, so the intermediate state is
// v* = v_r and h(rho*) = v_l + h(rho_l) - v_r. With h(rho) = rho the 1-wave
// is a shock when rho* > rho_l (speed from the Rankine-Hugoniot condition on
// the conservative fluxes, which reduces to the jump ratio of rho*v) and a
// rarefaction fan in lambda_1 = v - rho when rho* < rho_l.

#include <cmath>
#include <string>

#include "sgarz/errors.hpp"
#include "sgarz/model.hpp"

namespace sgarz {

/// Riemann initial data with an uncertain left density: the left state is
/// the pushforward of a uniform variable, rho_l(xi) = a + (b - a) xi.
struct RiemannProblem {
  double rho_left_min = 0.0;   // a
  double rho_left_max = 0.0;   // b
  double v_left = 0.0;
  double rho_right = 0.0;
  double v_right = 0.0;
  double jump_position = 1.0;

  double rho_left(double xi) const {
    return rho_left_min + (rho_left_max - rho_left_min) * xi;
  }

  double mean_rho_left() const {
    return 0.5 * (rho_left_min + rho_left_max);
  }

  void validate(const ModelConfig& cfg) const {
    if (!(rho_left_min > 0.0) || !(rho_left_min <= rho_left_max) ||
        !(rho_left_max < cfg.rho_max)) {
      throw ConfigError("RiemannProblem: left density law outside (0, rho_max)");
    }
    if (!(rho_right > 0.0) || !(rho_right < cfg.rho_max)) {
      throw ConfigError("RiemannProblem: right density outside (0, rho_max)");
    }
    if (v_left < 0.0 || v_right < 0.0) {
      throw ConfigError("RiemannProblem: velocities must be nonnegative");
    }
  }
};

struct PrimState {
  double rho;
  double v;
};

namespace detail {

inline bool has_unit_linear_hesitation(const ModelConfig& cfg) {
  if (cfg.closure == Closure::linear_lwr) return cfg.hesitation_slope == 1.0;
  return cfg.gamma == 1 && cfg.v_max == cfg.rho_max;
}

}  // namespace detail

/// Exact solution of the homogeneous ARZ Riemann problem with h(rho) = rho,
/// evaluated at the similarity coordinate speed = x/t.
inline PrimState arz_riemann_exact(double rho_l, double v_l, double rho_r,
                                   double v_r, const ModelConfig& cfg,
                                   double speed) {
  if (!detail::has_unit_linear_hesitation(cfg)) {
    throw UnsupportedError(
        "arz_riemann_exact: exact solution implemented for h(rho) = rho only");
  }
  if (!(rho_l > 0.0) || !(rho_r > 0.0)) {
    throw UnsupportedError("arz_riemann_exact: densities must be positive");
  }

  const double w_l = v_l + rho_l;
  const double rho_star = rho_l + v_l - v_r;
  const double v_star = v_r;
  if (!(rho_star > 0.0)) {
    throw UnsupportedError(
        "arz_riemann_exact: intermediate density " + std::to_string(rho_star) +
        " is vacuum");
  }

  if (rho_star > rho_l) {
    // 1-shock; both conservative fluxes jump consistently because w is
    // preserved, so the speed is the jump ratio of rho*v.
    const double s = (rho_l * v_l - rho_star * v_star) / (rho_l - rho_star);
    if (speed < s) return {rho_l, v_l};
    if (speed < v_star) return {rho_star, v_star};
    return {rho_r, v_r};
  }
  if (rho_star < rho_l) {
    // 1-rarefaction: along the fan w = w_l and lambda_1 = v - rho = x/t.
    const double head = v_l - rho_l;
    const double tail = v_star - rho_star;
    if (speed <= head) return {rho_l, v_l};
    if (speed <= tail) {
      const double rho = 0.5 * (w_l - speed);
      return {rho, w_l - rho};
    }
    if (speed < v_star) return {rho_star, v_star};
    return {rho_r, v_r};
  }
  // no 1-wave, only the contact
  if (speed < v_star) return {rho_l, v_l};
  return {rho_r, v_r};
}

/// Entropy solution of the LWR model with flux rho (1 - rho), evaluated at
/// the similarity coordinate speed = x/t.
inline double lwr_riemann_exact(double rho_l, double rho_r, double speed) {
  if (rho_l == rho_r) return rho_l;
  if (rho_l < rho_r) {
    // shock; admissible for the concave flux since f'(rho_l) > s > f'(rho_r)
    const double s = 1.0 - rho_l - rho_r;
    return speed < s ? rho_l : rho_r;
  }
  const double head = 1.0 - 2.0 * rho_l;
  const double tail = 1.0 - 2.0 * rho_r;
  if (speed <= head) return rho_l;
  if (speed >= tail) return rho_r;
  return 0.5 * (1.0 - speed);
}

}  // namespace sgarz
