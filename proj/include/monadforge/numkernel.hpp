#pragma once

// Tolerance-aware dense complex linear algebra. Every rank decision and
// eigenvalue clustering rule used elsewhere in the library lives here.

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "monadforge/error.hpp"

namespace monadforge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultBaseTol = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Rank threshold policy.
///
/// With `relative` set (the default) the threshold for a matrix M is
/// tau(M) = base_tol * max(rows, cols) * sigma_max(M), floored at base_tol
/// when M is zero. With `relative` cleared tau(M) = base_tol.
struct ToleranceModel {
  double base_tol = kDefaultBaseTol;
  bool relative = true;

  /// Throws ErrorKind::Argument when base_tol is negative or not finite.
  void check() const;

  /// tau for a matrix with the given shape and largest singular value.
  double threshold(Eigen::Index rows, Eigen::Index cols, double sigma_max) const;
};

/// Singular-value summary behind every rank verdict.
struct RankInfo {
  int rank = 0;
  double threshold = 0.0;
  Eigen::VectorXd singular_values;  // descending
  /// sigma_r / max(sigma_{r+1}, tau); +inf when rank is 0.
  double spectral_gap = kInfinity;

  double smallest_kept() const;
  double largest_dropped() const;
};

/// Throws ErrorKind::MalformedInput if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what = "matrix");

bool all_finite(const ComplexMatrix& m);

RankInfo rank_info(const ComplexMatrix& m, const ToleranceModel& tol);

int rank(const ComplexMatrix& m, const ToleranceModel& tol);

/// Orthonormal basis of the numerical kernel, one vector per column.
/// cols() of the result equals m.cols() - rank(m, tol).
ComplexMatrix kernel_basis(const ComplexMatrix& m, const ToleranceModel& tol);

/// Smallest singular value and its right singular vector. For a matrix with
/// fewer rows than columns the returned value is 0 with a kernel vector.
struct SmallestSingular {
  double value = 0.0;
  double largest = 0.0;
  ComplexVector vector;
};
SmallestSingular smallest_singular(const ComplexMatrix& m);

/// All eigenvalues with algebraic multiplicity, in canonical order
/// (lexicographic on real part, then imaginary part).
std::vector<Complex> eigenvalues(const ComplexMatrix& m);

/// Merges eigenvalues closer than `radius` into one representative (the
/// cluster mean). Values within `radius` of zero are snapped to exactly 0.
/// The result is in canonical order and contains no duplicates.
std::vector<Complex> cluster_eigenvalues(const std::vector<Complex>& values, double radius);

/// Clustering radius used for the spectrum of m: 1e-6 * (1 + ||m||_F).
double cluster_radius(const ComplexMatrix& m);

/// Canonical (real, imag) lexicographic order.
bool canonical_less(const Complex& lhs, const Complex& rhs);

struct LeastSquaresResult {
  ComplexMatrix solution;
  double residual_norm = 0.0;  // Frobenius norm of the residual
};

/// Minimum-norm X minimizing ||M X - R||_F. Requires M.rows() == R.rows().
LeastSquaresResult solve_left(const ComplexMatrix& m, const ComplexMatrix& r,
                              const ToleranceModel& tol = {});

/// Minimum-norm X minimizing ||X M - R||_F. Requires M.cols() == R.cols().
LeastSquaresResult solve_right(const ComplexMatrix& m, const ComplexMatrix& r,
                               const ToleranceModel& tol = {});

/// Moore-Penrose pseudo-inverse with singular values at or below tau dropped.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, const ToleranceModel& tol = {});

/// i.i.d. standard complex Gaussian entries (E|z|^2 = 1) drawn from
/// Rng(seed). Bit-identical for identical (rows, cols, seed).
ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

}  // namespace monadforge
