#pragma once

// Deterministic generators for positive random densities and physically
// consistent states, shared by the property tests.

#include <random>

#include "sgarz/analysis.hpp"
#include "sgarz/galerkin.hpp"
#include "sgarz/model.hpp"

namespace sgarz::testing {

inline GpcVector random_positive_density(const GpcBasis& basis,
                                         std::mt19937_64& rng,
                                         double min_eig_floor = 0.05) {
  return random_positive_probe(basis, rng, min_eig_floor);
}

/// State with positive density and z built from a bounded random velocity,
/// z = rho * (v + h(rho)).
inline GpcState random_physical_state(const GpcBasis& basis,
                                      const ModelConfig& cfg,
                                      std::mt19937_64& rng) {
  const int n = basis.size();
  GpcState state;
  state.rho = random_positive_density(basis, rng);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::uniform_real_distribution<double> level(0.2, 0.8);
  GpcVector v = constant_modes(n, level(rng));
  for (int k = 1; k < n; ++k) v[k] = noise(rng);
  state.z = galerkin_product(basis, state.rho,
                             v + hesitation_modes(basis, state.rho, cfg));
  return state;
}

}  // namespace sgarz::testing
