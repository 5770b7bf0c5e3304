#include "monadforge/nondegeneracy.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "monadforge/rng.hpp"

namespace monadforge {
namespace {

constexpr int kRefineSteps = 3;
constexpr double kRefineWindow = 1e-6;
constexpr int kProjections = 2;

ComplexVector unit_with_phase(const ComplexVector& v) {
  ComplexVector out = v / v.norm();
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (std::abs(out(i)) > 1e-12) {
      out *= std::conj(out(i)) / std::abs(out(i));
      break;
    }
  }
  return out;
}

ComplexMatrix stack(std::initializer_list<const ComplexMatrix*> blocks) {
  Eigen::Index rows = 0;
  const Eigen::Index cols = (*blocks.begin())->cols();
  for (const auto* b : blocks) rows += b->rows();
  ComplexMatrix out(rows, cols);
  Eigen::Index r = 0;
  for (const auto* b : blocks) {
    out.middleRows(r, b->rows()) = *b;
    r += b->rows();
  }
  return out;
}

std::array<double, 4> side_residuals(const SideData& data, const DegeneracyWitness& w) {
  const ComplexVector& v = w.vec;
  return {(data.x * (data.a1 * v) - w.lambda[0] * v).norm(),
          (data.x * (data.a2 * v) - w.lambda[1] * v).norm(),
          (w.mu[0] * (data.a1 * v) + w.mu[1] * (data.a2 * v)).norm(), (data.c * v).norm()};
}

DegeneracyWitness make_witness(const SideData& data, WitnessSide side, Complex l1, Complex l2,
                               std::array<Complex, 2> mu, const ComplexVector& v) {
  DegeneracyWitness w;
  w.side = side;
  w.lambda = {l1, l2};
  w.mu = normalize_mu(mu);
  w.vec = unit_with_phase(v);
  w.residuals = side_residuals(data, w);
  return w;
}

struct JointTest {
  bool degenerate = false;
  double sigma = kInfinity;
  Complex l1, l2;
  ComplexVector v;
};

// Stacked system for a fixed nonzero (l1, l2), with mu ~ (l2, -l1).
JointTest test_joint_pair(const SideData& data, const ComplexMatrix& xa1, const ComplexMatrix& xa2,
                          Complex l1, Complex l2, const ToleranceModel& tol) {
  const Eigen::Index k = xa1.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(k, k);
  JointTest best;
  for (int step = 0; step <= kRefineSteps; ++step) {
    const ComplexMatrix r1 = xa1 - l1 * id;
    const ComplexMatrix r2 = xa2 - l2 * id;
    const ComplexMatrix r3 = l2 * data.a1 - l1 * data.a2;
    const ComplexMatrix s = stack({&r1, &r2, &r3, &data.c});
    const SmallestSingular ss = smallest_singular(s);
    // Scale from the blocks, not from s: exact cancellation leaves s at rounding level.
    const double scale = xa1.norm() + xa2.norm() + std::abs(l2) * data.a1.norm() +
                         std::abs(l1) * data.a2.norm() + data.c.norm();
    const double tau = tol.threshold(s.rows(), s.cols(), std::max(ss.largest, scale));
    if (ss.value < best.sigma) {
      best.sigma = ss.value;
      best.l1 = l1;
      best.l2 = l2;
      best.v = ss.vector;
    }
    if (ss.value <= tau) {
      best.degenerate = true;
      return best;
    }
    if (ss.value > kRefineWindow * ss.largest) break;
    // Near-singular: move (l1, l2) to the Rayleigh quotients of the
    // almost-kernel vector and try again.
    const ComplexVector& v = ss.vector;
    const Complex n1 = v.dot(xa1 * v);
    const Complex n2 = v.dot(xa2 * v);
    if (std::abs(n1) + std::abs(n2) == 0.0) break;
    l1 = n1;
    l2 = n2;
  }
  return best;
}

}  // namespace

SideData SideData::forward(const Configuration& config) {
  return {config.a1(), config.a2(), config.x(), config.c()};
}

SideData SideData::dual(const Configuration& config) {
  return {config.a1().transpose(), config.a2().transpose(), config.x().transpose(),
          config.b().transpose()};
}

std::array<Complex, 2> normalize_mu(std::array<Complex, 2> mu) {
  const double norm = std::sqrt(std::norm(mu[0]) + std::norm(mu[1]));
  if (norm == 0.0) return {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  mu[0] /= norm;
  mu[1] /= norm;
  for (Complex& m : mu) {
    if (std::abs(m) > 1e-14) {
      const Complex phase = std::conj(m) / std::abs(m);
      mu[0] *= phase;
      mu[1] *= phase;
      break;
    }
  }
  return mu;
}

PencilScan find_pencil_rank_drop(const ComplexMatrix& a1_restricted,
                                 const ComplexMatrix& a2_restricted, const ToleranceModel& tol,
                                 std::uint64_t seed) {
  if (a1_restricted.rows() != a2_restricted.rows() ||
      a1_restricted.cols() != a2_restricted.cols()) {
    throw Error(ErrorKind::Shape, "pencil matrices must have equal shapes");
  }
  const Eigen::Index k = a1_restricted.rows();
  const Eigen::Index d = a1_restricted.cols();
  PencilScan scan;
  if (d == 0) return scan;

  Rng rng(seed);
  auto combine = [&](const std::array<Complex, 2>& mu) -> ComplexMatrix {
    return mu[0] * a1_restricted + mu[1] * a2_restricted;
  };
  const double scale = a1_restricted.norm() + a2_restricted.norm();
  auto try_mu = [&](std::array<Complex, 2> mu) -> bool {
    mu = normalize_mu(mu);
    const ComplexMatrix m = combine(mu);
    const SmallestSingular ss = smallest_singular(m);
    const double tau = tol.threshold(m.rows(), m.cols(), std::max(ss.largest, scale));
    if (ss.value <= tau || k < d) {
      scan.drop = PencilDrop{mu, ss.vector, ss.value};
      return true;
    }
    scan.margin = std::min(scan.margin, ss.value);
    return false;
  };

  // A pencil that is singular at a generic point is singular everywhere.
  const std::array<Complex, 2> generic{rng.complex_normal(), rng.complex_normal()};
  if (try_mu(generic)) return scan;
  scan.margin = kInfinity;

  for (int p = 0; p < kProjections; ++p) {
    const ComplexMatrix proj = rng.gaussian(d, k);
    std::array<Complex, 2> e{}, f{};
    ComplexMatrix lead;
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
      e = {rng.complex_normal(), rng.complex_normal()};
      lead = proj * combine(e);
      ok = rank(lead, tol) == d;
    }
    if (!ok) continue;
    f = {rng.complex_normal(), rng.complex_normal()};
    const ComplexMatrix tail = proj * combine(f);
    // det(s * lead + tail) = 0  <=>  s in spectrum(-lead^{-1} tail).
    const ComplexMatrix companion = -lead.partialPivLu().solve(tail);
    for (const Complex& s : eigenvalues(companion)) {
      if (try_mu({s * e[0] + f[0], s * e[1] + f[1]})) return scan;
    }
  }
  return scan;
}

SideVerdict examine_side(const SideData& data, WitnessSide side, const ToleranceModel& tol) {
  SideVerdict verdict;
  const Eigen::Index k = data.a1.rows();
  if (k == 0) return verdict;

  const ComplexMatrix xa1 = data.x * data.a1;
  const ComplexMatrix xa2 = data.x * data.a2;
  const auto spec1 = cluster_eigenvalues(eigenvalues(xa1), cluster_radius(xa1));
  const auto spec2 = cluster_eigenvalues(eigenvalues(xa2), cluster_radius(xa2));

  for (const Complex& l1 : spec1) {
    for (const Complex& l2 : spec2) {
      if (l1 == Complex{} && l2 == Complex{}) continue;
      const JointTest t = test_joint_pair(data, xa1, xa2, l1, l2, tol);
      if (t.degenerate) {
        verdict.degenerate = true;
        verdict.branch = DegeneracyBranch::JointEigenvalue;
        verdict.witness = make_witness(data, side, t.l1, t.l2, {t.l2, -t.l1}, t.v);
        verdict.margin = 0.0;
        return verdict;
      }
      verdict.margin = std::min(verdict.margin, t.sigma);
    }
  }

  // lambda = (0, 0): mu ranges over all of P^1.
  const ComplexMatrix s0 = stack({&xa1, &xa2, &data.c});
  const ComplexMatrix kernel = kernel_basis(s0, tol);
  const Eigen::Index d = kernel.cols();
  const Complex zero{};
  if (d == 0) {
    verdict.margin = std::min(verdict.margin, smallest_singular(s0).value);
    return verdict;
  }
  if (d == 1) {
    const ComplexVector v = kernel.col(0);
    ComplexMatrix pair(k, 2);
    pair.col(0) = data.a1 * v;
    pair.col(1) = data.a2 * v;
    const SmallestSingular ss = smallest_singular(pair);
    const double scale = data.a1.norm() + data.a2.norm();
    if (ss.value <= tol.threshold(pair.rows(), pair.cols(), std::max(ss.largest, scale))) {
      verdict.degenerate = true;
      verdict.branch = DegeneracyBranch::ZeroOneDimensional;
      // Both images vanish: every mu works, report (1, 0).
      const bool all_mu = ss.largest <= tol.threshold(pair.rows(), pair.cols(), scale);
      const std::array<Complex, 2> mu =
          all_mu ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{ss.vector(0), ss.vector(1)};
      verdict.witness = make_witness(data, side, zero, zero, mu, v);
      verdict.margin = 0.0;
      return verdict;
    }
    verdict.margin = std::min(verdict.margin, ss.value);
    return verdict;
  }
  const PencilScan scan = find_pencil_rank_drop(data.a1 * kernel, data.a2 * kernel, tol);
  if (scan.drop) {
    verdict.degenerate = true;
    verdict.branch = DegeneracyBranch::ZeroPencil;
    verdict.witness =
        make_witness(data, side, zero, zero, scan.drop->mu, kernel * scan.drop->kernel_vector);
    verdict.margin = 0.0;
    return verdict;
  }
  verdict.margin = std::min(verdict.margin, scan.margin);
  return verdict;
}

std::array<double, 4> witness_residuals(const Configuration& config,
                                        const DegeneracyWitness& witness) {
  const SideData data = witness.side == WitnessSide::Forward ? SideData::forward(config)
                                                             : SideData::dual(config);
  if (witness.vec.size() != config.k()) {
    throw Error(ErrorKind::Shape, "witness vector length differs from k");
  }
  return side_residuals(data, witness);
}

double witness_tolerance(const Configuration& config) { return 1e-7 * (1.0 + config.norm()); }

}  // namespace monadforge
