#pragma once

// Orbit-level structure for the quotient by G = GL(W0) x GL(W1).
//
// With A = x a1 and B = x a2 (endomorphisms of W1), the action conjugates A
// and B by g1, and c W x b is fully invariant for any word W in A, B. These
// give fingerprints that agree along an orbit. Agreement does not prove two
// configurations share an orbit; disagreement proves they do not.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monadforge/configuration.hpp"

namespace monadforge {

inline constexpr int kDefaultWordLength = 3;

struct Fingerprint {
  int word_length_bound = kDefaultWordLength;
  std::vector<Complex> spec1;  // spectrum of x a1, canonical order
  std::vector<Complex> spec2;  // spectrum of x a2, canonical order
  /// trace(W) for every nonempty word W over {A, B} of length <= L.
  std::map<std::string, Complex> word_traces;
  /// c W x b for every word of length <= L, the empty word included (key "").
  std::map<std::string, ComplexMatrix> endo_invariants;
};

/// All words over {A, B} of length 0..max_length, shortest first.
std::vector<std::string> words_up_to(int max_length);

/// Product of A and B spelled by `word` (identity for the empty word).
ComplexMatrix evaluate_word(const std::string& word, const ComplexMatrix& a, const ComplexMatrix& b);

/// Throws Argument for L < 1.
Fingerprint fingerprint(const Configuration& config, int word_length = kDefaultWordLength);

struct FingerprintComparison {
  bool agree = false;
  /// Largest deviation, each term scaled by 1 / (1 + |reference|).
  double spectrum_deviation = 0.0;
  double trace_deviation = 0.0;
  double endo_deviation = 0.0;
};

/// Spectra are matched greedily by nearest pairs and must agree within
/// `spectrum_tol` (relative, default 1e-6); traces and endo-invariants within
/// `value_tol` (relative, default 1e-8).
FingerprintComparison compare_fingerprints(const Fingerprint& lhs, const Fingerprint& rhs,
                                           double value_tol = 1e-8, double spectrum_tol = 1e-6);

/// Greedy nearest-pair matching of two multisets; returns the largest
/// matched distance scaled by 1 / (1 + max |z|), or +inf on size mismatch.
double multiset_distance(const std::vector<Complex>& lhs, const std::vector<Complex>& rhs);

struct AlignmentResult {
  bool found = false;
  std::optional<GroupElement> g;
  /// ||act(g, C1) - C2|| / (1 + ||C2||) of the best candidate; +inf if none.
  double action_residual = kInfinity;
  /// Dimension of the homogenized transporter space {(g0, g1, s)}.
  int transporter_dimension = 0;
};

struct AlignOptions {
  double residual_tol = 1e-8;
  int max_combinations = 32;
  std::uint64_t seed = 0x616c69676eULL;
};

/// Solves g0 a_i = a_i' g1, g1 x = x' g0, g0 b = s b', c' g1 = s c for
/// (g0, g1, s) and returns an invertible solution with s = 1 that carries
/// C1 to C2, if one exists. Throws Shape when (k, n) differ.
AlignmentResult orbit_align(const Configuration& from, const Configuration& to,
                            const ToleranceModel& tol = {}, const AlignOptions& options = {});

/// Differential of mu(C) = a1 x a2 - a2 x a1 + b c as a k^2 x (3k^2 + 2nk)
/// matrix. Columns follow Configuration::to_vector(), rows are mu row-major.
ComplexMatrix integrability_jacobian(const Configuration& config);

/// Dmu applied to a tangent vector, without forming the matrix.
ComplexMatrix integrability_differential(const Configuration& config,
                                         const Configuration& direction);

struct DimensionReport {
  int moduli_dimension = 0;
  int jacobian_rank = 0;
  int kernel_dimension = 0;      // dim ker Dmu
  int stabilizer_dimension = 0;
  bool surjective = true;        // jacobian_rank == k^2
  double jacobian_gap = kInfinity;
  double stabilizer_gap = kInfinity;
};

/// dim ker Dmu - (2k^2 - stabilizer dimension). Throws PreconditionError
/// for an invalid configuration.
DimensionReport moduli_dimension_report(const Configuration& config,
                                        const ToleranceModel& tol = {});

int moduli_dimension(const Configuration& config, const ToleranceModel& tol = {});

/// rank(Dmu) == k^2. Throws PreconditionError for an invalid configuration.
bool smoothness_check(const Configuration& config, const ToleranceModel& tol = {});

}  // namespace monadforge
