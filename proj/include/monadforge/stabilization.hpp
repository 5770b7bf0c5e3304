#pragma once

// Rank stabilization A_k^n -> A_k^{n+m} and the contraction homotopy
//
//   H_t(a1, a2, x, b, c) = ((1-t) a1, (1-t) a2, (1-t) x, b_t, c_t),
//   b_t = (0_{k,k} | t I_k | (1-t)^2 b),   c_t = [t I_k ; 0_{k,k} ; (1-t) c],
//
// which lands in A_k^{n+2k}, equals the embedding at t = 0 and is constant
// at t = 1. Its integrability rests on b_t c_t = (1-t)^3 b c.

#include <vector>

#include "monadforge/configuration.hpp"

namespace monadforge {

/// b' = [0_{k,m} | b], c' = [0_{m,k} ; c]; a1, a2, x unchanged.
/// Throws Argument for m < 1.
Configuration rank_embed(const Configuration& config, int m);

/// rank_embed(act(g, C), m) == act(g, rank_embed(C, m)) entrywise within
/// 1e-12 relative to (1 + ||C||).
bool equivariance_check_embed(const Configuration& config, const GroupElement& g, int m = 1);

/// Throws Argument when t is outside [0, 1] or not finite.
Configuration homotopy_point(const Configuration& config, double t);

struct HomotopySample {
  double t = 0.0;
  double residual_norm = 0.0;
  double residual_threshold = 0.0;
  bool integrable = false;
  double identity_gap = 0.0;  // ||b_t c_t - (1-t)^3 b c||_F
  bool nondegenerate = false;
  double margin = 0.0;
};

struct HomotopyCertificate {
  std::vector<HomotopySample> samples;
  double identity_gap_bound = 0.0;  // 1e-10 * (1 + ||b|| ||c||)
  bool start_equals_embedding = false;
  bool end_is_constant = false;
  bool passed = false;
};

/// Evaluates H_t at `sample_count` evenly spaced t in [0, 1] (both ends
/// included). Throws PreconditionError for an invalid input and Argument
/// for sample_count < 2.
HomotopyCertificate homotopy_certify(const Configuration& config, int sample_count,
                                     const ToleranceModel& tol = {});

/// Block-diagonal sum; (k1 + k2, n1 + n2). Non-degeneracy is not preserved
/// in general and must be re-checked.
Configuration direct_sum(const Configuration& lhs, const Configuration& rhs);

}  // namespace monadforge
