#pragma once

// Monad data (a1, a2, x, b, c) over W0, W1 (both dimension k) and V (dimension n).
//
// Map directions:
//   a1, a2 : W1 -> W0   (k x k)
//   x      : W0 -> W1   (k x k)
//   b      : V  -> W0   (k x n)
//   c      : W1 -> V    (n x k)
//
// A configuration is integrable when a1 x a2 - a2 x a1 + b c = 0 and
// non-degenerate when no nonzero joint eigenvector of the kind described in
// nondegeneracy.hpp exists, on either the forward or the dual side.

#include <array>
#include <optional>

#include "monadforge/numkernel.hpp"

namespace monadforge {

class Configuration {
 public:
  Configuration() = default;

  /// Validates shapes against (k, n) and finiteness; throws Shape /
  /// MalformedInput. k = 0 is allowed (all matrices empty).
  Configuration(int k, int n, ComplexMatrix a1, ComplexMatrix a2, ComplexMatrix x,
                ComplexMatrix b, ComplexMatrix c);

  /// Shape inferred from the matrices; needs at least b or c to fix n.
  static Configuration from_maps(ComplexMatrix a1, ComplexMatrix a2, ComplexMatrix x,
                                 ComplexMatrix b, ComplexMatrix c);
  static Configuration zero(int k, int n);

  int k() const { return k_; }
  int n() const { return n_; }
  const ComplexMatrix& a1() const { return a1_; }
  const ComplexMatrix& a2() const { return a2_; }
  const ComplexMatrix& x() const { return x_; }
  const ComplexMatrix& b() const { return b_; }
  const ComplexMatrix& c() const { return c_; }

  /// Frobenius norm over all five blocks.
  double norm() const;

  /// Entries of a1, a2, x, b, c in that order, each block row-major.
  ComplexVector to_vector() const;
  static Configuration from_vector(int k, int n, const ComplexVector& v);
  static Eigen::Index parameter_count(int k, int n) { return 3 * k * k + 2 * n * k; }

  bool same_shape(const Configuration& other) const { return k_ == other.k_ && n_ == other.n_; }

  /// Bit-level equality of all entries.
  friend bool operator==(const Configuration& lhs, const Configuration& rhs);

  // The configuration space is a vector space; these let tangent vectors share the type.
  Configuration operator+(const Configuration& rhs) const;
  Configuration operator-(const Configuration& rhs) const;
  Configuration operator*(Complex s) const;

 private:
  int k_ = 0;
  int n_ = 1;
  ComplexMatrix a1_ = ComplexMatrix(0, 0);
  ComplexMatrix a2_ = ComplexMatrix(0, 0);
  ComplexMatrix x_ = ComplexMatrix(0, 0);
  ComplexMatrix b_ = ComplexMatrix(0, 1);
  ComplexMatrix c_ = ComplexMatrix(1, 0);
};

class GroupElement {
 public:
  /// Throws InvalidGroupElement when either factor is not square, the
  /// shapes differ, or a factor is numerically singular (sigma_min <= tau).
  GroupElement(ComplexMatrix g0, ComplexMatrix g1, const ToleranceModel& tol = {});
  static GroupElement identity(int k);

  int k() const { return static_cast<int>(g0_.rows()); }
  const ComplexMatrix& g0() const { return g0_; }
  const ComplexMatrix& g1() const { return g1_; }
  const ComplexMatrix& g0_inverse() const { return g0_inv_; }
  const ComplexMatrix& g1_inverse() const { return g1_inv_; }

  /// (g0 h0, g1 h1).
  GroupElement operator*(const GroupElement& rhs) const;

 private:
  ComplexMatrix g0_, g1_, g0_inv_, g1_inv_;
};

/// Lie-algebra element (h0, h1) of gl(W0) x gl(W1).
struct TangentGroupElement {
  ComplexMatrix h0;
  ComplexMatrix h1;
};

enum class WitnessSide { Forward, Dual };

const char* to_string(WitnessSide side);

/// Certificate that a configuration violates non-degeneracy.
///
/// Forward side: vec = v in W1 with x a1 v = l1 v, x a2 v = l2 v,
/// (m1 a1 + m2 a2) v = 0 and c v = 0. Dual side: vec = w in W0^* with the
/// transposed maps, b^T w in place of c v.
struct DegeneracyWitness {
  WitnessSide side = WitnessSide::Forward;
  std::array<Complex, 2> lambda{};
  std::array<Complex, 2> mu{};  // unit norm, first nonzero entry real positive
  ComplexVector vec;            // unit norm
  std::array<double, 4> residuals{};
};

struct NondegeneracyVerdict {
  bool nondegenerate = true;
  std::optional<DegeneracyWitness> witness;
  /// Smallest certifying singular value seen; +inf for k = 0.
  double margin = kInfinity;
};

struct IntegrabilityCheck {
  bool integrable = true;
  double residual_norm = 0.0;
  double threshold = 0.0;
};

struct ValidationReport {
  double integrability_residual_norm = 0.0;
  bool integrable = true;
  bool nondegenerate = true;
  std::optional<DegeneracyWitness> witness;
  double margin = kInfinity;
  ToleranceModel tolerances;

  bool valid() const { return integrable && nondegenerate; }
};

/// a1 x a2 - a2 x a1 + b c.
ComplexMatrix integrability_residual(const Configuration& config);

/// Integrable iff ||residual||_F <= base_tol * (1 + |a1||x||a2| + |b||c|).
IntegrabilityCheck check_integrable(const Configuration& config, const ToleranceModel& tol = {});

NondegeneracyVerdict check_nondegenerate(const Configuration& config,
                                         const ToleranceModel& tol = {});

ValidationReport validate(const Configuration& config, const ToleranceModel& tol = {});

/// (g0 a1 g1^-1, g0 a2 g1^-1, g1 x g0^-1, g0 b, c g1^-1).
Configuration act(const GroupElement& g, const Configuration& config);

/// Derivative of the action at the identity:
/// (h0 a1 - a1 h1, h0 a2 - a2 h1, h1 x - x h0, h0 b, -c h1).
Configuration lie_act(const TangentGroupElement& h, const Configuration& config);

/// Matrix of h -> lie_act(h, C) in the coordinates (h0, h1) row-major
/// against Configuration::to_vector(). Shape (3k^2 + 2nk) x 2k^2.
ComplexMatrix lie_act_matrix(const Configuration& config);

/// Dimension of the stabilizer Lie algebra together with its rank summary.
struct StabilizerInfo {
  int dimension = 0;
  RankInfo rank;
};
StabilizerInfo stabilizer_info(const Configuration& config, const ToleranceModel& tol = {});

int stabilizer_dimension(const Configuration& config, const ToleranceModel& tol = {});

/// Thrown when an operation requires a valid configuration.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& message, ValidationReport report)
      : Error(ErrorKind::Precondition, message), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Throws PreconditionError unless validate(config, tol) passes.
ValidationReport require_valid(const Configuration& config, const ToleranceModel& tol,
                               const char* operation);

}  // namespace monadforge
