#include "monadforge/acceptance/oracles.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SVD>

namespace monadforge::oracle {

SweepResult sweep_real_pencil(const ComplexMatrix& a1, const ComplexMatrix& a2) {
  SweepResult out;
  for (int j = 0; j < kSweepSamples; ++j) {
    const double theta = j * std::numbers::pi / (kSweepSamples - 1);
    const ComplexMatrix m = std::cos(theta) * a1 + std::sin(theta) * a2;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    const double smallest = m.rows() < m.cols() ? 0.0 : s(s.size() - 1);
    const double ratio = s(0) > 0.0 ? smallest / s(0) : 0.0;
    if (ratio < out.best_ratio) {
      out.best_ratio = ratio;
      out.best_theta = theta;
    }
  }
  out.degenerate = out.best_ratio <= 1e-8;
  return out;
}

PencilInstance make_pencil_instance(int k, int d, bool planted, Rng& rng) {
  PencilInstance inst;
  inst.kernel_dimension = d;
  inst.planted = planted;
  const int n = k - d;
  ComplexMatrix a1 = rng.gaussian(k, k);
  ComplexMatrix a2 = rng.gaussian(k, k);
  if (planted) {
    // Avoid theta near pi/2 so the correction below divides by cos(theta) safely.
    inst.planted_index = static_cast<int>(rng.uniform() * 240.0) + (rng.uniform() < 0.5 ? 0 : 480);
    const double theta = inst.planted_index * std::numbers::pi / (kSweepSamples - 1);
    const double m1 = std::cos(theta);
    const double m2 = std::sin(theta);
    const ComplexVector u = rng.gaussian_vector(d);
    auto block1 = a1.rightCols(d);
    const auto block2 = a2.rightCols(d);
    const ComplexVector r = m1 * (block1 * u) + m2 * (block2 * u);
    block1 -= (r * u.adjoint()) / (m1 * u.squaredNorm());
  }
  ComplexMatrix c = ComplexMatrix::Zero(n, k);
  c.leftCols(n) = ComplexMatrix::Identity(n, n);
  inst.config = Configuration(k, n, std::move(a1), std::move(a2), ComplexMatrix::Zero(k, k),
                              rng.gaussian(k, n), std::move(c));
  return inst;
}

std::array<ComplexMatrix, 2> restricted_pencil(const PencilInstance& instance) {
  const int d = instance.kernel_dimension;
  return {instance.config.a1().rightCols(d), instance.config.a2().rightCols(d)};
}

std::optional<ScalarWitness> scalar_case_witness(const Configuration& config) {
  if (config.k() != 1 || config.n() != 1) return std::nullopt;
  const Complex a1 = config.a1()(0, 0);
  const Complex a2 = config.a2()(0, 0);
  const Complex x = config.x()(0, 0);
  ScalarWitness w;
  if (config.c()(0, 0) == Complex{}) {
    w.side = WitnessSide::Forward;
  } else if (config.b()(0, 0) == Complex{}) {
    w.side = WitnessSide::Dual;
  } else {
    return std::nullopt;
  }
  w.lambda = {x * a1, x * a2};
  if (a1 == Complex{} && a2 == Complex{}) {
    w.mu = {1.0, 0.0};
  } else {
    w.mu = {a2, -a1};
  }
  return w;
}

double substitute_witness(const Configuration& config, WitnessSide side,
                          const std::array<Complex, 2>& lambda, const std::array<Complex, 2>& mu,
                          const ComplexVector& vec) {
  ComplexMatrix a1 = config.a1(), a2 = config.a2(), x = config.x(), c = config.c();
  if (side == WitnessSide::Dual) {
    a1.transposeInPlace();
    a2.transposeInPlace();
    x.transposeInPlace();
    c = config.b().transpose();
  }
  double worst = 0.0;
  worst = std::max(worst, (x * a1 * vec - lambda[0] * vec).norm());
  worst = std::max(worst, (x * a2 * vec - lambda[1] * vec).norm());
  worst = std::max(worst, ((mu[0] * a1 + mu[1] * a2) * vec).norm());
  worst = std::max(worst, (c * vec).norm());
  return worst;
}

ComplexMatrix finite_difference(const Configuration& config, const Configuration& direction,
                                double eps, bool central) {
  auto mu = [](const Configuration& c) {
    return ComplexMatrix(c.a1() * c.x() * c.a2() - c.a2() * c.x() * c.a1() + c.b() * c.c());
  };
  const Configuration forward = config + direction * eps;
  if (!central) return (mu(forward) - mu(config)) / eps;
  const Configuration backward = config - direction * eps;
  return (mu(forward) - mu(backward)) / (2.0 * eps);
}

int expected_moduli_dimension(int k, int n) {
  const int parameters = 3 * k * k + 2 * n * k;
  const int equations = k * k;
  const int gauge = 2 * k * k;
  return parameters - equations - gauge;
}

Configuration gaussian_configuration(int k, int n, Rng& rng) {
  if (k == 0) return Configuration::zero(0, n);
  ComplexMatrix a1 = rng.gaussian(k, k);
  ComplexMatrix a2 = rng.gaussian(k, k);
  ComplexMatrix x = rng.gaussian(k, k);
  ComplexMatrix b = rng.gaussian(k, n);
  ComplexMatrix c = rng.gaussian(n, k);
  return Configuration(k, n, std::move(a1), std::move(a2), std::move(x), std::move(b),
                       std::move(c));
}

Configuration flat_integrable_configuration(int k, int n, Rng& rng) {
  ComplexMatrix a1 = rng.gaussian(k, k);
  ComplexMatrix x = rng.gaussian(k, k);
  ComplexMatrix a2 = a1 * x * a1;
  return Configuration(k, n, std::move(a1), std::move(a2), std::move(x), ComplexMatrix::Zero(k, n),
                       ComplexMatrix::Zero(n, k));
}

}  // namespace monadforge::oracle
