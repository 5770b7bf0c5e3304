#include "monadforge/stabilization.hpp"

#include <cmath>
#include <string>

namespace monadforge {
namespace {

ComplexMatrix block_diag(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  ComplexMatrix out = ComplexMatrix::Zero(lhs.rows() + rhs.rows(), lhs.cols() + rhs.cols());
  out.topLeftCorner(lhs.rows(), lhs.cols()) = lhs;
  out.bottomRightCorner(rhs.rows(), rhs.cols()) = rhs;
  return out;
}

double max_abs_diff(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  return lhs.size() == 0 ? 0.0 : (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace

Configuration rank_embed(const Configuration& config, int m) {
  if (m < 1) throw Error(ErrorKind::Argument, "rank_embed needs m >= 1");
  const int k = config.k();
  const int n = config.n();
  ComplexMatrix b = ComplexMatrix::Zero(k, n + m);
  ComplexMatrix c = ComplexMatrix::Zero(n + m, k);
  b.rightCols(n) = config.b();
  c.bottomRows(n) = config.c();
  return Configuration(k, n + m, config.a1(), config.a2(), config.x(), std::move(b), std::move(c));
}

bool equivariance_check_embed(const Configuration& config, const GroupElement& g, int m) {
  const Configuration lhs = rank_embed(act(g, config), m);
  const Configuration rhs = act(g, rank_embed(config, m));
  const double bound = 1e-12 * (1.0 + lhs.norm());
  return max_abs_diff(lhs.a1(), rhs.a1()) <= bound && max_abs_diff(lhs.a2(), rhs.a2()) <= bound &&
         max_abs_diff(lhs.x(), rhs.x()) <= bound && max_abs_diff(lhs.b(), rhs.b()) <= bound &&
         max_abs_diff(lhs.c(), rhs.c()) <= bound;
}

Configuration homotopy_point(const Configuration& config, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::Argument, "homotopy parameter must lie in [0, 1]");
  }
  const int k = config.k();
  const int n = config.n();
  const double s = 1.0 - t;
  const ComplexMatrix id = ComplexMatrix::Identity(k, k);

  ComplexMatrix b = ComplexMatrix::Zero(k, n + 2 * k);
  b.middleCols(k, k) = t * id;
  b.rightCols(n) = (s * s) * config.b();

  ComplexMatrix c = ComplexMatrix::Zero(n + 2 * k, k);
  c.topRows(k) = t * id;
  c.bottomRows(n) = s * config.c();

  return Configuration(k, n + 2 * k, s * config.a1(), s * config.a2(), s * config.x(),
                       std::move(b), std::move(c));
}

HomotopyCertificate homotopy_certify(const Configuration& config, int sample_count,
                                     const ToleranceModel& tol) {
  if (sample_count < 2) throw Error(ErrorKind::Argument, "homotopy_certify needs >= 2 samples");
  require_valid(config, tol, "homotopy_certify");

  HomotopyCertificate cert;
  const ComplexMatrix bc = config.b() * config.c();
  cert.identity_gap_bound = 1e-10 * (1.0 + config.b().norm() * config.c().norm());

  bool all_ok = true;
  for (int i = 0; i < sample_count; ++i) {
    // Exact endpoints; interior points evenly spaced.
    const double t = i == sample_count - 1 ? 1.0 : static_cast<double>(i) / (sample_count - 1);
    const Configuration point = homotopy_point(config, t);
    HomotopySample sample;
    sample.t = t;
    const IntegrabilityCheck integ = check_integrable(point, tol);
    sample.residual_norm = integ.residual_norm;
    sample.residual_threshold = integ.threshold;
    sample.integrable = integ.integrable;
    const double cube = (1.0 - t) * (1.0 - t) * (1.0 - t);
    sample.identity_gap = (point.b() * point.c() - cube * bc).norm();
    const NondegeneracyVerdict nd = check_nondegenerate(point, tol);
    sample.nondegenerate = nd.nondegenerate;
    sample.margin = nd.margin;

    all_ok = all_ok && sample.integrable && sample.identity_gap <= cert.identity_gap_bound &&
             sample.nondegenerate && (t == 0.0 || sample.margin > 0.0);
    if (i == 0) {
      // With k = 0 the homotopy is the identity map.
      cert.start_equals_embedding =
          config.k() == 0 ? point == config : point == rank_embed(config, 2 * config.k());
    }
    cert.samples.push_back(sample);
  }

  // H_1 depends only on (k, n): compare against the image of the zero configuration.
  const Configuration end = homotopy_point(config, 1.0);
  cert.end_is_constant = end == homotopy_point(Configuration::zero(config.k(), config.n()), 1.0);
  cert.passed = all_ok && cert.start_equals_embedding && cert.end_is_constant;
  return cert;
}

Configuration direct_sum(const Configuration& lhs, const Configuration& rhs) {
  return Configuration(lhs.k() + rhs.k(), lhs.n() + rhs.n(), block_diag(lhs.a1(), rhs.a1()),
                       block_diag(lhs.a2(), rhs.a2()), block_diag(lhs.x(), rhs.x()),
                       block_diag(lhs.b(), rhs.b()), block_diag(lhs.c(), rhs.c()));
}

}  // namespace monadforge
