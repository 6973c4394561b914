#pragma once

// Binary cache for the precomputable basis data, keyed by level. The header
// is the magic string "SGARZ-BASIS", a version, the level, and the basis
// size; the payload is row-major 64-bit floats, little-endian: the K+1
// triple-product matrices, then the eigenvector matrix, then the spectra
// table. The evaluation table is cheap and rebuilt on load.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "sgarz/basis.hpp"
#include "sgarz/errors.hpp"

namespace sgarz {

inline constexpr char kBasisCacheMagic[] = "SGARZ-BASIS";
inline constexpr std::uint32_t kBasisCacheVersion = 1;

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 4);
}

inline std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw IoError(path + ": truncated basis cache");
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes[i]} << (8 * i);
  return v;
}

inline void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

inline double get_f64(std::istream& in, const std::string& path) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw IoError(path + ": truncated basis cache");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t{bytes[i]} << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

inline void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) put_f64(out, m(r, c));
  }
}

inline Eigen::MatrixXd get_matrix(std::istream& in, int rows, int cols,
                                  const std::string& path) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = get_f64(in, path);
  }
  return m;
}

}  // namespace detail

inline void save_basis_cache(const std::string& path, const GpcBasis& basis) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kBasisCacheMagic, sizeof(kBasisCacheMagic) - 1);
  detail::put_u32(out, kBasisCacheVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(basis.level()));
  detail::put_u32(out, static_cast<std::uint32_t>(basis.size()));
  for (int k = 0; k < basis.size(); ++k) {
    detail::put_matrix(out, basis.products[k]);
  }
  detail::put_matrix(out, basis.frame.vectors);
  detail::put_matrix(out, basis.frame.spectra);
  if (!out) throw IoError("failed writing " + path);
}

inline GpcBasis load_basis_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[sizeof(kBasisCacheMagic) - 1];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kBasisCacheMagic, sizeof(magic)) != 0) {
    throw IoError(path + ": not a basis cache (bad magic)");
  }
  const std::uint32_t version = detail::get_u32(in, path);
  if (version != kBasisCacheVersion) {
    throw IoError(path + ": unsupported basis cache version " +
                  std::to_string(version));
  }
  const std::uint32_t level = detail::get_u32(in, path);
  const std::uint32_t size = detail::get_u32(in, path);
  if (level > 30 || size != (1u << (level + 1))) {
    throw IoError(path + ": inconsistent basis cache header");
  }
  const int n = static_cast<int>(size);

  HaarBasis haar(static_cast<int>(level), n);
  TripleProductSet products;
  products.mats.reserve(n);
  for (int k = 0; k < n; ++k) {
    products.mats.push_back(detail::get_matrix(in, n, n, path));
  }
  EigenFrame frame;
  frame.vectors = detail::get_matrix(in, n, n, path);
  frame.spectra = detail::get_matrix(in, n, n, path);

  // quick payload sanity: M_0 and V^T V must be identities
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  if ((products[0] - identity).cwiseAbs().maxCoeff() > 1e-12 ||
      (frame.vectors.transpose() * frame.vectors - identity)
          .cwiseAbs()
          .maxCoeff() > 1e-12) {
    throw IoError(path + ": basis cache payload failed validation");
  }
  return GpcBasis{std::move(haar), std::move(products), std::move(frame)};
}

/// Loads the cache when it exists and matches the requested level; otherwise
/// builds the basis (and refreshes the cache if a path was given).
inline GpcBasis load_or_build_basis(int level, const std::string& cache_path) {
  if (!cache_path.empty()) {
    std::ifstream probe(cache_path, std::ios::binary);
    if (probe.good()) {
      probe.close();
      GpcBasis cached = load_basis_cache(cache_path);
      if (cached.level() == level) return cached;
      // a cache for a different level is stale, rebuild below
    }
  }
  GpcBasis basis = GpcBasis::build(level);
  if (!cache_path.empty()) save_basis_cache(cache_path, basis);
  return basis;
}

}  // namespace sgarz
