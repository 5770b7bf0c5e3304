#pragma once

// Decision procedure for the non-degeneracy conditions.
//
// A configuration is degenerate when for some (l1, l2), (m1, m2) in C^2 with
// l1 m1 + l2 m2 = 0 and (m1, m2) != 0 there is a nonzero v in W1 with
//
//   x a1 v = l1 v,   x a2 v = l2 v,   (m1 a1 + m2 a2) v = 0,   c v = 0,
//
// or the same system holds on the dual side (a_i, x replaced by their
// transposes and c by b^T). Starred maps are read as plain transposes.
//
// Any such v is a joint eigenvector of x a1 and x a2, so the eigenvalue
// pairs to try are spectrum(x a1) x spectrum(x a2) plus (0, 0):
//
//  * (l1, l2) != 0 forces mu ~ (l2, -l1); degenerate iff the stacked matrix
//    [x a1 - l1 I; x a2 - l2 I; l2 a1 - l1 a2; c] has a kernel.
//  * (l1, l2) = 0 leaves mu free. With K = ker [x a1; x a2; c] of dimension
//    d, degenerate iff the pencil m1 a1|K + m2 a2|K drops rank for some mu.
//    d = 1 is a 2-column rank test; d >= 2 finds the roots of det(P M(mu))
//    for two random d x k projections P and verifies each root directly.

#include <cstdint>
#include <optional>

#include "monadforge/configuration.hpp"

namespace monadforge {

/// Maps entering one side of the test: forward (a1, a2, x, c) or dual
/// (a1^T, a2^T, x^T, b^T).
struct SideData {
  ComplexMatrix a1, a2, x, c;

  static SideData forward(const Configuration& config);
  static SideData dual(const Configuration& config);
};

enum class DegeneracyBranch { None, JointEigenvalue, ZeroOneDimensional, ZeroPencil };

struct SideVerdict {
  bool degenerate = false;
  std::optional<DegeneracyWitness> witness;
  double margin = kInfinity;
  DegeneracyBranch branch = DegeneracyBranch::None;
};

/// Runs the full procedure on one side. The witness is tagged with `side`.
SideVerdict examine_side(const SideData& data, WitnessSide side, const ToleranceModel& tol);

/// Rank drop of the k x d pencil m1 A1 + m2 A2 over mu in P^1.
struct PencilDrop {
  std::array<Complex, 2> mu{};
  ComplexVector kernel_vector;  // in C^d, unit norm
  double sigma = 0.0;           // smallest singular value at mu
};

struct PencilScan {
  std::optional<PencilDrop> drop;
  /// Smallest singular value over all verified candidate roots (+inf if none).
  double margin = kInfinity;
};

/// Randomized (Monte Carlo complete) detection for d >= 1 columns.
/// Deterministic for a given seed.
PencilScan find_pencil_rank_drop(const ComplexMatrix& a1_restricted,
                                 const ComplexMatrix& a2_restricted, const ToleranceModel& tol,
                                 std::uint64_t seed = 0x6d6f6e6164ULL);

/// Residuals of the four defining equations when the witness is substituted
/// back into the configuration.
std::array<double, 4> witness_residuals(const Configuration& config,
                                        const DegeneracyWitness& witness);

/// Certification tolerance for witness residuals: 1e-7 * (1 + ||C||).
double witness_tolerance(const Configuration& config);

/// Scales mu to unit norm with the first nonzero entry real and positive.
std::array<Complex, 2> normalize_mu(std::array<Complex, 2> mu);

}  // namespace monadforge
