#include "monadforge/rng.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace monadforge {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

ComplexMatrix Rng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  // Row-major fill order is part of the determinism contract.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
  }
  return m;
}

ComplexVector Rng::gaussian_vector(Eigen::Index size) {
  ComplexVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = complex_normal();
  return v;
}

ComplexMatrix Rng::unitary(Eigen::Index size) {
  const ComplexMatrix g = gaussian(size, size);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(size, size);
  // Fix the phase ambiguity of QR so the distribution is unitarily invariant.
  const ComplexMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < size; ++j) {
    const Complex d = rmat(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix Rng::well_conditioned(Eigen::Index size, double max_cond) {
  const ComplexMatrix u = unitary(size);
  const ComplexMatrix v = unitary(size);
  Eigen::VectorXd s(size);
  const double log_max = std::log(std::max(max_cond, 1.0));
  for (Eigen::Index i = 0; i < size; ++i) s(i) = std::exp(uniform() * log_max);
  return u * s.cast<Complex>().asDiagonal() * v.adjoint();
}

}  // namespace monadforge
