#include "monadforge/configuration.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "monadforge/nondegeneracy.hpp"

namespace monadforge {
namespace {

void require_shape(const ComplexMatrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorKind::Shape, std::string(name) + " must be " + std::to_string(rows) + "x" +
                                      std::to_string(cols) + ", got " + std::to_string(m.rows()) +
                                      "x" + std::to_string(m.cols()));
  }
}

void append_row_major(ComplexVector& out, Eigen::Index& pos, const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(pos++) = m(i, j);
  }
}

ComplexMatrix read_row_major(const ComplexVector& v, Eigen::Index& pos, Eigen::Index rows,
                             Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(pos++);
  }
  return m;
}

}  // namespace

Configuration::Configuration(int k, int n, ComplexMatrix a1, ComplexMatrix a2, ComplexMatrix x,
                             ComplexMatrix b, ComplexMatrix c)
    : k_(k), n_(n), a1_(std::move(a1)), a2_(std::move(a2)), x_(std::move(x)), b_(std::move(b)),
      c_(std::move(c)) {
  if (k < 0) throw Error(ErrorKind::Shape, "charge k must be >= 0");
  if (n < 1) throw Error(ErrorKind::Shape, "rank n must be >= 1");
  require_shape(a1_, k, k, "a1");
  require_shape(a2_, k, k, "a2");
  require_shape(x_, k, k, "x");
  require_shape(b_, k, n, "b");
  require_shape(c_, n, k, "c");
  require_finite(a1_, "a1");
  require_finite(a2_, "a2");
  require_finite(x_, "x");
  require_finite(b_, "b");
  require_finite(c_, "c");
}

Configuration Configuration::from_maps(ComplexMatrix a1, ComplexMatrix a2, ComplexMatrix x,
                                       ComplexMatrix b, ComplexMatrix c) {
  const auto k = static_cast<int>(a1.rows());
  const auto n = static_cast<int>(c.rows());
  return Configuration(k, n, std::move(a1), std::move(a2), std::move(x), std::move(b),
                       std::move(c));
}

Configuration Configuration::zero(int k, int n) {
  if (k < 0) throw Error(ErrorKind::Shape, "charge k must be >= 0");
  if (n < 1) throw Error(ErrorKind::Shape, "rank n must be >= 1");
  return Configuration(k, n, ComplexMatrix::Zero(k, k), ComplexMatrix::Zero(k, k),
                       ComplexMatrix::Zero(k, k), ComplexMatrix::Zero(k, n),
                       ComplexMatrix::Zero(n, k));
}

double Configuration::norm() const {
  return std::sqrt(a1_.squaredNorm() + a2_.squaredNorm() + x_.squaredNorm() + b_.squaredNorm() +
                   c_.squaredNorm());
}

ComplexVector Configuration::to_vector() const {
  ComplexVector v(parameter_count(k_, n_));
  Eigen::Index pos = 0;
  append_row_major(v, pos, a1_);
  append_row_major(v, pos, a2_);
  append_row_major(v, pos, x_);
  append_row_major(v, pos, b_);
  append_row_major(v, pos, c_);
  return v;
}

Configuration Configuration::from_vector(int k, int n, const ComplexVector& v) {
  if (v.size() != parameter_count(k, n)) {
    throw Error(ErrorKind::Shape, "parameter vector has the wrong length");
  }
  Eigen::Index pos = 0;
  auto a1 = read_row_major(v, pos, k, k);
  auto a2 = read_row_major(v, pos, k, k);
  auto x = read_row_major(v, pos, k, k);
  auto b = read_row_major(v, pos, k, n);
  auto c = read_row_major(v, pos, n, k);
  return Configuration(k, n, std::move(a1), std::move(a2), std::move(x), std::move(b),
                       std::move(c));
}

bool operator==(const Configuration& lhs, const Configuration& rhs) {
  return lhs.same_shape(rhs) && lhs.a1_ == rhs.a1_ && lhs.a2_ == rhs.a2_ && lhs.x_ == rhs.x_ &&
         lhs.b_ == rhs.b_ && lhs.c_ == rhs.c_;
}

Configuration Configuration::operator+(const Configuration& rhs) const {
  if (!same_shape(rhs)) throw Error(ErrorKind::Shape, "configuration shapes differ");
  return Configuration(k_, n_, a1_ + rhs.a1_, a2_ + rhs.a2_, x_ + rhs.x_, b_ + rhs.b_,
                       c_ + rhs.c_);
}

Configuration Configuration::operator-(const Configuration& rhs) const {
  if (!same_shape(rhs)) throw Error(ErrorKind::Shape, "configuration shapes differ");
  return Configuration(k_, n_, a1_ - rhs.a1_, a2_ - rhs.a2_, x_ - rhs.x_, b_ - rhs.b_,
                       c_ - rhs.c_);
}

Configuration Configuration::operator*(Complex s) const {
  return Configuration(k_, n_, a1_ * s, a2_ * s, x_ * s, b_ * s, c_ * s);
}

GroupElement::GroupElement(ComplexMatrix g0, ComplexMatrix g1, const ToleranceModel& tol)
    : g0_(std::move(g0)), g1_(std::move(g1)) {
  if (g0_.rows() != g0_.cols() || g1_.rows() != g1_.cols() || g0_.rows() != g1_.rows()) {
    throw Error(ErrorKind::InvalidGroupElement, "g0 and g1 must be square of equal size");
  }
  if (!all_finite(g0_) || !all_finite(g1_)) {
    throw Error(ErrorKind::InvalidGroupElement, "group element has non-finite entries");
  }
  const Eigen::Index k = g0_.rows();
  if (rank(g0_, tol) < k || rank(g1_, tol) < k) {
    throw Error(ErrorKind::InvalidGroupElement, "group element is numerically singular");
  }
  g0_inv_ = k > 0 ? ComplexMatrix(g0_.partialPivLu().inverse()) : g0_;
  g1_inv_ = k > 0 ? ComplexMatrix(g1_.partialPivLu().inverse()) : g1_;
}

GroupElement GroupElement::identity(int k) {
  return GroupElement(ComplexMatrix::Identity(k, k), ComplexMatrix::Identity(k, k));
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  if (k() != rhs.k()) throw Error(ErrorKind::Shape, "group elements have different sizes");
  return GroupElement(g0_ * rhs.g0_, g1_ * rhs.g1_);
}

const char* to_string(WitnessSide side) {
  return side == WitnessSide::Forward ? "forward" : "dual";
}

ComplexMatrix integrability_residual(const Configuration& config) {
  const auto& a1 = config.a1();
  const auto& a2 = config.a2();
  const auto& x = config.x();
#ifdef MONADFORGE_MUTATE_INTEGRABILITY_SIGN
  return a1 * x * a2 - a2 * x * a1 - config.b() * config.c();
#else
  return a1 * x * a2 - a2 * x * a1 + config.b() * config.c();
#endif
}

IntegrabilityCheck check_integrable(const Configuration& config, const ToleranceModel& tol) {
  tol.check();
  IntegrabilityCheck out;
  out.residual_norm = integrability_residual(config).norm();
  const double scale = 1.0 + config.a1().norm() * config.x().norm() * config.a2().norm() +
                       config.b().norm() * config.c().norm();
  out.threshold = tol.relative ? tol.base_tol * scale : tol.base_tol;
  out.integrable = out.residual_norm <= out.threshold;
  return out;
}

NondegeneracyVerdict check_nondegenerate(const Configuration& config, const ToleranceModel& tol) {
  tol.check();
  NondegeneracyVerdict verdict;
  if (config.k() == 0) return verdict;

  const SideVerdict forward = examine_side(SideData::forward(config), WitnessSide::Forward, tol);
  if (forward.degenerate) {
    verdict.nondegenerate = false;
    verdict.witness = forward.witness;
    verdict.margin = 0.0;
    return verdict;
  }
  const SideVerdict dual = examine_side(SideData::dual(config), WitnessSide::Dual, tol);
  if (dual.degenerate) {
    verdict.nondegenerate = false;
    verdict.witness = dual.witness;
    verdict.margin = 0.0;
    return verdict;
  }
  verdict.margin = std::min(forward.margin, dual.margin);
  return verdict;
}

ValidationReport validate(const Configuration& config, const ToleranceModel& tol) {
  ValidationReport report;
  report.tolerances = tol;
  const IntegrabilityCheck integ = check_integrable(config, tol);
  report.integrability_residual_norm = integ.residual_norm;
  report.integrable = integ.integrable;
  NondegeneracyVerdict nd = check_nondegenerate(config, tol);
  report.nondegenerate = nd.nondegenerate;
  report.witness = std::move(nd.witness);
  report.margin = nd.margin;
  return report;
}

ValidationReport require_valid(const Configuration& config, const ToleranceModel& tol,
                               const char* operation) {
  ValidationReport report = validate(config, tol);
  if (!report.valid()) {
    std::string why = report.integrable ? "degenerate" : "not integrable";
    throw PreconditionError(std::string(operation) + " requires a valid configuration (input is " +
                                why + ")",
                            report);
  }
  return report;
}

Configuration act(const GroupElement& g, const Configuration& config) {
  if (g.k() != config.k()) throw Error(ErrorKind::Shape, "group element size differs from k");
  if (config.k() == 0) return config;
  const auto& g0 = g.g0();
  const auto& g1 = g.g1();
  const auto& g0_inv = g.g0_inverse();
  const auto& g1_inv = g.g1_inverse();
  return Configuration(config.k(), config.n(), g0 * config.a1() * g1_inv,
                       g0 * config.a2() * g1_inv, g1 * config.x() * g0_inv, g0 * config.b(),
                       config.c() * g1_inv);
}

Configuration lie_act(const TangentGroupElement& h, const Configuration& config) {
  const int k = config.k();
  if (h.h0.rows() != k || h.h0.cols() != k || h.h1.rows() != k || h.h1.cols() != k) {
    throw Error(ErrorKind::Shape, "tangent group element size differs from k");
  }
  return Configuration(k, config.n(), h.h0 * config.a1() - config.a1() * h.h1,
                       h.h0 * config.a2() - config.a2() * h.h1,
                       h.h1 * config.x() - config.x() * h.h0, h.h0 * config.b(),
                       -config.c() * h.h1);
}

ComplexMatrix lie_act_matrix(const Configuration& config) {
  const int k = config.k();
  const Eigen::Index rows = Configuration::parameter_count(k, config.n());
  ComplexMatrix out(rows, 2 * k * k);
  TangentGroupElement h{ComplexMatrix::Zero(k, k), ComplexMatrix::Zero(k, k)};
  for (int which = 0; which < 2; ++which) {
    ComplexMatrix& slot = which == 0 ? h.h0 : h.h1;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        slot(i, j) = 1.0;
        out.col(which * k * k + i * k + j) = lie_act(h, config).to_vector();
        slot(i, j) = 0.0;
      }
    }
  }
  return out;
}

StabilizerInfo stabilizer_info(const Configuration& config, const ToleranceModel& tol) {
  StabilizerInfo info;
  if (config.k() == 0) return info;
  const ComplexMatrix m = lie_act_matrix(config);
  info.rank = rank_info(m, tol);
  info.dimension = static_cast<int>(m.cols()) - info.rank.rank;
  return info;
}

int stabilizer_dimension(const Configuration& config, const ToleranceModel& tol) {
  return stabilizer_info(config, tol).dimension;
}

}  // namespace monadforge
