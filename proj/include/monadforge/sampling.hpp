#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monadforge/configuration.hpp"
#include "monadforge/rng.hpp"

namespace monadforge {

struct SampleSpec {
  int k = 1;
  int n = 2;
  std::uint64_t seed = 0;
  int max_attempts = 64;
  ToleranceModel tol;
};

struct SampleResult {
  Configuration config;
  int attempts = 0;
};

/// Draws a valid configuration in A_k^n.
///
/// a1, a2, x, c are Gaussian; b solves b c = a2 x a1 - a1 x a2 exactly as
/// b = R c^+ + Z (I - c c^+) with Gaussian Z, so every draw is integrable by
/// construction. Draws repeat until the result is non-degenerate. Attempt i
/// uses Rng(derive_seed(seed, i)).
///
/// Errors: Unsampleable for n = 1, k >= 1 (no valid data exists);
/// UnsupportedRegime for 2 <= n < k; SamplingFailed when every attempt is
/// degenerate; Argument for k < 0, n < 1 or max_attempts < 1.
SampleResult sample_config(const SampleSpec& spec);

/// The integrable draw used by attempt `attempt` of sample_config, before the
/// non-degeneracy filter. Requires n >= k.
Configuration integrable_draw(int k, int n, std::uint64_t seed, int attempt);

/// Random (g0, g1) with both condition numbers at most max_cond.
GroupElement random_group_element(int k, Rng& rng, double max_cond = 10.0);

/// Moves a valid configuration by a random step of length eps tangent to
/// {mu = 0}, then pulls it back with at most 8 Gauss-Newton corrections.
/// Throws PreconditionError for invalid input, Argument for eps outside
/// [0, 0.1 (1 + ||C||)] and PerturbFailed when the corrections do not reach
/// an integrable, non-degenerate configuration.
Configuration perturb(const Configuration& config, double eps, std::uint64_t seed,
                      const ToleranceModel& tol = {});

struct CanonicalExample {
  std::string name;
  Configuration config;
  bool integrable = false;
  bool nondegenerate = false;

  bool valid() const { return integrable && nondegenerate; }
};

/// Fixed regression corpus with the expected verdicts.
std::vector<CanonicalExample> canonical_examples();

}  // namespace monadforge
