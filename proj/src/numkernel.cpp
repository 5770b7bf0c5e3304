#include "monadforge/numkernel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "monadforge/rng.hpp"

namespace monadforge {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedInput: return "malformed input";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Argument: return "argument error";
    case ErrorKind::InvalidGroupElement: return "invalid group element";
    case ErrorKind::Precondition: return "precondition error";
    case ErrorKind::Unsampleable: return "UNSAMPLEABLE";
    case ErrorKind::UnsupportedRegime: return "UNSUPPORTED-REGIME";
    case ErrorKind::SamplingFailed: return "SAMPLING-FAILED";
    case ErrorKind::PerturbFailed: return "PERTURB-FAILED";
    case ErrorKind::Schema: return "schema error";
  }
  return "error";
}

void ToleranceModel::check() const {
  if (!std::isfinite(base_tol) || base_tol < 0.0) {
    throw Error(ErrorKind::Argument, "base tolerance must be finite and nonnegative");
  }
}

double ToleranceModel::threshold(Eigen::Index rows, Eigen::Index cols, double sigma_max) const {
  if (!relative) return base_tol;
  if (sigma_max <= 0.0) return base_tol;
  return base_tol * static_cast<double>(std::max(rows, cols)) * sigma_max;
}

double RankInfo::smallest_kept() const {
  return rank > 0 ? singular_values(rank - 1) : 0.0;
}

double RankInfo::largest_dropped() const {
  return rank < singular_values.size() ? singular_values(rank) : 0.0;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) {
    throw Error(ErrorKind::MalformedInput, std::string(what) + " has non-finite entries");
  }
}

namespace {

struct Svd {
  Eigen::VectorXd values;
  ComplexMatrix v;  // full right singular basis
};

Svd full_svd(const ComplexMatrix& m) {
  Svd out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.values = Eigen::VectorXd(0);
    out.v = ComplexMatrix::Identity(m.cols(), m.cols());
    return out;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  out.values = svd.singularValues();
  out.v = svd.matrixV();
  return out;
}

int count_above(const Eigen::VectorXd& values, double tau) {
  int r = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > tau) ++r;
  }
  return r;
}

}  // namespace

RankInfo rank_info(const ComplexMatrix& m, const ToleranceModel& tol) {
  require_finite(m);
  RankInfo info;
  if (m.rows() == 0 || m.cols() == 0) {
    info.singular_values = Eigen::VectorXd(0);
    info.threshold = tol.threshold(m.rows(), m.cols(), 0.0);
    return info;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  info.singular_values = svd.singularValues();
  const double sigma_max = info.singular_values(0);
  info.threshold = tol.threshold(m.rows(), m.cols(), sigma_max);
  info.rank = count_above(info.singular_values, info.threshold);
  if (info.rank > 0) {
    info.spectral_gap = info.smallest_kept() / std::max(info.largest_dropped(), info.threshold);
  }
  return info;
}

int rank(const ComplexMatrix& m, const ToleranceModel& tol) { return rank_info(m, tol).rank; }

ComplexMatrix kernel_basis(const ComplexMatrix& m, const ToleranceModel& tol) {
  require_finite(m);
  const Svd svd = full_svd(m);
  const double sigma_max = svd.values.size() > 0 ? svd.values(0) : 0.0;
  const int r = count_above(svd.values, tol.threshold(m.rows(), m.cols(), sigma_max));
  return svd.v.rightCols(m.cols() - r);
}

SmallestSingular smallest_singular(const ComplexMatrix& m) {
  require_finite(m);
  SmallestSingular out;
  const Svd svd = full_svd(m);
  const Eigen::Index n = m.cols();
  if (n == 0) return out;
  out.largest = svd.values.size() > 0 ? svd.values(0) : 0.0;
  out.value = svd.values.size() == n ? svd.values(n - 1) : 0.0;
  out.vector = svd.v.col(n - 1);
  return out;
}

bool canonical_less(const Complex& lhs, const Complex& rhs) {
  if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
  return lhs.imag() < rhs.imag();
}

std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::Shape, "eigenvalues need a square matrix");
  require_finite(m);
  std::vector<Complex> out;
  if (m.rows() == 0) return out;
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::MalformedInput, "eigenvalue iteration did not converge");
  }
  const auto& values = solver.eigenvalues();
  out.assign(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

double cluster_radius(const ComplexMatrix& m) { return 1e-6 * (1.0 + m.norm()); }

std::vector<Complex> cluster_eigenvalues(const std::vector<Complex>& values, double radius) {
  // Single-linkage clusters; near-zero values join an anchored zero cluster.
  std::vector<std::vector<Complex>> clusters;
  bool has_zero = false;
  for (const Complex& z : values) {
    if (std::abs(z) <= radius) {
      has_zero = true;
      continue;
    }
    std::vector<std::size_t> hits;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      for (const Complex& w : clusters[c]) {
        if (std::abs(z - w) <= radius) {
          hits.push_back(c);
          break;
        }
      }
    }
    if (hits.empty()) {
      clusters.push_back({z});
      continue;
    }
    auto& target = clusters[hits.front()];
    target.push_back(z);
    for (auto it = hits.rbegin(); it != hits.rend() - 1; ++it) {
      target.insert(target.end(), clusters[*it].begin(), clusters[*it].end());
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(*it));
    }
  }
  std::vector<Complex> out;
  if (has_zero) out.emplace_back(0.0, 0.0);
  for (const auto& cluster : clusters) {
    Complex sum{0.0, 0.0};
    for (const Complex& z : cluster) sum += z;
    out.push_back(sum / static_cast<double>(cluster.size()));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, const ToleranceModel& tol) {
  require_finite(m);
  if (m.rows() == 0 || m.cols() == 0) return ComplexMatrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double tau = tol.threshold(m.rows(), m.cols(), s(0));
  ComplexMatrix inv = ComplexMatrix::Zero(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= tau) break;
    inv += (svd.matrixV().col(i) / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return inv;
}

LeastSquaresResult solve_left(const ComplexMatrix& m, const ComplexMatrix& r,
                              const ToleranceModel& tol) {
  if (m.rows() != r.rows()) throw Error(ErrorKind::Shape, "solve_left: row counts differ");
  require_finite(r, "right-hand side");
  LeastSquaresResult out;
  out.solution = pseudo_inverse(m, tol) * r;
  out.residual_norm = (m * out.solution - r).norm();
  return out;
}

LeastSquaresResult solve_right(const ComplexMatrix& m, const ComplexMatrix& r,
                               const ToleranceModel& tol) {
  if (m.cols() != r.cols()) throw Error(ErrorKind::Shape, "solve_right: column counts differ");
  require_finite(r, "right-hand side");
  LeastSquaresResult out;
  out.solution = r * pseudo_inverse(m, tol);
  out.residual_norm = (out.solution * m - r).norm();
  return out;
}

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw Error(ErrorKind::Shape, "random_matrix needs rows, cols >= 1");
  Rng rng(seed);
  return rng.gaussian(rows, cols);
}

}  // namespace monadforge
