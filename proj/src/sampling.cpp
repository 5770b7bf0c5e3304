#include "monadforge/sampling.hpp"

#include <cmath>
#include <string>

#include "monadforge/invariants.hpp"

namespace monadforge {
namespace {

constexpr int kNewtonSteps = 8;

ComplexVector row_major(const ComplexMatrix& m) {
  ComplexVector out(m.size());
  Eigen::Index pos = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(pos++) = m(i, j);
  }
  return out;
}

ComplexMatrix scalar(Complex z) { return ComplexMatrix::Constant(1, 1, z); }

}  // namespace

Configuration integrable_draw(int k, int n, std::uint64_t seed, int attempt) {
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
  ComplexMatrix a1 = rng.gaussian(k, k);
  ComplexMatrix a2 = rng.gaussian(k, k);
  ComplexMatrix x = rng.gaussian(k, k);
  ComplexMatrix c = rng.gaussian(n, k);
  const ComplexMatrix z = rng.gaussian(k, n);
  const ComplexMatrix target = a2 * x * a1 - a1 * x * a2;
  // c has full column rank, so c^+ c = I and any b = R c^+ + Z (I - c c^+)
  // satisfies b c = R.
  const ComplexMatrix c_pinv = pseudo_inverse(c);
  const ComplexMatrix left_null = ComplexMatrix::Identity(n, n) - c * c_pinv;
  ComplexMatrix b = target * c_pinv + z * left_null;
  return Configuration(k, n, std::move(a1), std::move(a2), std::move(x), std::move(b),
                       std::move(c));
}

SampleResult sample_config(const SampleSpec& spec) {
  if (spec.k < 0 || spec.n < 1) throw Error(ErrorKind::Argument, "need k >= 0 and n >= 1");
  if (spec.max_attempts < 1) throw Error(ErrorKind::Argument, "max_attempts must be >= 1");
  spec.tol.check();
  if (spec.k == 0) return {Configuration::zero(0, spec.n), 1};
  if (spec.n == 1) {
    throw Error(ErrorKind::Unsampleable,
                "no integrable non-degenerate configuration exists for n = 1, k = " +
                    std::to_string(spec.k));
  }
  if (spec.n < spec.k) {
    throw Error(ErrorKind::UnsupportedRegime,
                "sampling needs n >= k (got k = " + std::to_string(spec.k) +
                    ", n = " + std::to_string(spec.n) + ")");
  }
  std::string last;
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    Configuration config = integrable_draw(spec.k, spec.n, spec.seed, attempt);
    const ValidationReport report = validate(config, spec.tol);
    if (report.valid()) return {std::move(config), attempt + 1};
    last = report.integrable ? "degenerate" : "not integrable";
  }
  throw Error(ErrorKind::SamplingFailed,
              std::to_string(spec.max_attempts) + " attempts exhausted; last draw was " + last);
}

GroupElement random_group_element(int k, Rng& rng, double max_cond) {
  ComplexMatrix g0 = rng.well_conditioned(k, max_cond);
  ComplexMatrix g1 = rng.well_conditioned(k, max_cond);
  return GroupElement(std::move(g0), std::move(g1));
}

Configuration perturb(const Configuration& config, double eps, std::uint64_t seed,
                      const ToleranceModel& tol) {
  if (!std::isfinite(eps) || eps < 0.0 || eps > 0.1 * (1.0 + config.norm())) {
    throw Error(ErrorKind::Argument, "eps must lie in [0, 0.1 (1 + ||C||)]");
  }
  require_valid(config, tol, "perturb");
  if (eps == 0.0 || config.k() == 0) return config;

  const int k = config.k();
  const int n = config.n();
  Rng rng(seed);
  const ComplexMatrix tangent = kernel_basis(integrability_jacobian(config), tol);
  ComplexVector step = tangent * (tangent.adjoint() * rng.gaussian_vector(tangent.rows()));
  if (step.norm() == 0.0) throw Error(ErrorKind::PerturbFailed, "tangent space is trivial");
  step *= eps / step.norm();

  ComplexVector z = config.to_vector() + step;
  Configuration current = Configuration::from_vector(k, n, z);
  for (int i = 0; i < kNewtonSteps && !check_integrable(current, tol).integrable; ++i) {
    const ComplexVector r = row_major(integrability_residual(current));
    z -= pseudo_inverse(integrability_jacobian(current), tol) * r;
    current = Configuration::from_vector(k, n, z);
  }
  if (!check_integrable(current, tol).integrable) {
    throw Error(ErrorKind::PerturbFailed, "Newton corrections did not reach mu = 0");
  }
  if (!check_nondegenerate(current, tol).nondegenerate) {
    throw Error(ErrorKind::PerturbFailed, "perturbed configuration is degenerate");
  }
  return current;
}

std::vector<CanonicalExample> canonical_examples() {
  std::vector<CanonicalExample> out;
  {
    ComplexMatrix b(1, 2), c(2, 1);
    b << 0.0, 1.0;
    c << 1.0, 0.0;
    out.push_back({"valid-k1-n2",
                   Configuration(1, 2, ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(1, 1),
                                 ComplexMatrix::Zero(1, 1), b, c),
                   true, true});
  }
  out.push_back({"zero-k1-n1", Configuration::zero(1, 1), true, false});
  out.push_back({"zero-k1-n2", Configuration::zero(1, 2), true, false});
  {
    ComplexMatrix a1(2, 2), a2(2, 2);
    a1 << 0.0, 1.0, 0.0, 0.0;
    a2 << 0.0, 0.0, 1.0, 0.0;
    out.push_back({"nilpotent-k2-n2",
                   Configuration(2, 2, a1, a2, ComplexMatrix::Identity(2, 2),
                                 ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)),
                   false, true});
  }
  out.push_back({"empty-k0-n1", Configuration::zero(0, 1), true, true});
  out.push_back({"scalar-dual-k1-n1",
                 Configuration(1, 1, scalar(1.0), scalar(2.0), scalar(3.0), scalar(0.0),
                               scalar(5.0)),
                 true, false});
  return out;
}

}  // namespace monadforge
