#pragma once

// Independent reference computations used by the acceptance suite and the
// unit tests. Nothing here calls the decision procedures it is compared
// against; linear algebra goes straight to Eigen.

#include <array>
#include <optional>

#include "monadforge/configuration.hpp"
#include "monadforge/rng.hpp"

namespace monadforge::oracle {

inline constexpr int kSweepSamples = 721;

struct SweepResult {
  bool degenerate = false;
  double best_ratio = kInfinity;  // min over the grid of sigma_min / sigma_max
  double best_theta = 0.0;
};

/// Scans mu = (cos theta, sin theta), theta = j pi / 720 for j = 0..720, and
/// reports whether (mu1 A1 + mu2 A2) loses column rank anywhere on the grid
/// (sigma_min <= 1e-8 sigma_max).
SweepResult sweep_real_pencil(const ComplexMatrix& a1_restricted,
                              const ComplexMatrix& a2_restricted);

/// Planted instance for the lambda = 0, d >= 2 branch: x = 0, c selects the
/// first k - d coordinates (n = k - d), so K = span(e_{k-d+1}, ..., e_k).
/// When `planted` is set, the pencil on K drops rank at the real grid point
/// theta = planted_index * pi / 720.
struct PencilInstance {
  Configuration config;
  int kernel_dimension = 0;
  bool planted = false;
  int planted_index = 0;
};
PencilInstance make_pencil_instance(int k, int d, bool planted, Rng& rng);

/// Columns of a1, a2 on the known kernel of a pencil instance.
std::array<ComplexMatrix, 2> restricted_pencil(const PencilInstance& instance);

/// Case analysis for k = n = 1 integrable data (b c = 0): returns the
/// witness the hand derivation gives. Forward when c = 0: v = 1,
/// lambda = (x a1, x a2), mu ~ (a2, -a1). Dual when b = 0, same formulas.
struct ScalarWitness {
  WitnessSide side = WitnessSide::Forward;
  std::array<Complex, 2> lambda{};
  std::array<Complex, 2> mu{};
};
std::optional<ScalarWitness> scalar_case_witness(const Configuration& config);

/// Max of the four defining-equation residuals, substituted by hand.
double substitute_witness(const Configuration& config, WitnessSide side,
                          const std::array<Complex, 2>& lambda, const std::array<Complex, 2>& mu,
                          const ComplexVector& vec);

/// mu(C + eps d) - mu(C) over eps (forward) or the symmetric quotient (central).
ComplexMatrix finite_difference(const Configuration& config, const Configuration& direction,
                                double eps, bool central);

/// 3k^2 + 2nk parameters - k^2 equations - 2k^2 gauge directions.
int expected_moduli_dimension(int k, int n);

/// Random configuration with Gaussian entries in every block (usually not integrable).
Configuration gaussian_configuration(int k, int n, Rng& rng);

/// Integrable configuration with b = 0 and c = 0: a2 = a1 x a1 makes
/// a1 x a2 = a2 x a1 hold identically.
Configuration flat_integrable_configuration(int k, int n, Rng& rng);

}  // namespace monadforge::oracle
