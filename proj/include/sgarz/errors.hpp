#pragma once

#include <stdexcept>
#include <string>

namespace sgarz {

/// Base class for every failure raised by this library.
struct SgarzError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested basis exceeds the configured maximum size.
struct SizeLimitError : SgarzError {
  using SgarzError::SgarzError;
};

/// An argument left the domain it is defined on (e.g. a sample outside [0,1)).
struct DomainError : SgarzError {
  using SgarzError::SgarzError;
};

/// P(rho) lost strict positive definiteness; the state is vacuum-adjacent.
struct PositivityError : SgarzError {
  PositivityError(const std::string& what, double min_eig)
      : SgarzError(what), min_eigenvalue(min_eig) {}
  double min_eigenvalue;
};

/// A basis assumption (commuting triple products, shared eigenvectors,
/// commuting Galerkin operators) failed a residual check. `index_a`/`index_b`
/// identify the offending matrix pair where applicable (-1 otherwise).
struct AssumptionError : SgarzError {
  AssumptionError(const std::string& what, int a, int b)
      : SgarzError(what), index_a(a), index_b(b) {}
  int index_a;
  int index_b;
};

/// Physically unsupported configuration (e.g. Riemann data producing vacuum).
struct UnsupportedError : SgarzError {
  using SgarzError::SgarzError;
};

/// Invalid or inconsistent configuration input.
struct ConfigError : SgarzError {
  using SgarzError::SgarzError;
};

/// File could not be read, written, or decoded.
struct IoError : SgarzError {
  using SgarzError::SgarzError;
};

/// Two per-cell summaries do not live on the same grid.
struct GridMismatchError : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace sgarz
