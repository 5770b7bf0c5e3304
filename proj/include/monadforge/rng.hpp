#pragma once

#include <cstdint>
#include <random>

#include "monadforge/numkernel.hpp"

namespace monadforge {

/// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for the index-th task of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Deterministic generator: std::mt19937_64 words turned into doubles with
/// 53-bit resolution, Gaussians by the Box-Muller transform. The output
/// sequence depends only on the seed, on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  /// Complex normal with independent N(0, 1/2) parts, so E|z|^2 = 1.
  Complex complex_normal();

  ComplexMatrix gaussian(Eigen::Index rows, Eigen::Index cols);
  ComplexVector gaussian_vector(Eigen::Index size);

  /// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
  ComplexMatrix unitary(Eigen::Index size);

  /// U diag(s) V^H with log-uniform singular values in [1, max_cond], so the
  /// condition number never exceeds max_cond.
  ComplexMatrix well_conditioned(Eigen::Index size, double max_cond);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace monadforge
