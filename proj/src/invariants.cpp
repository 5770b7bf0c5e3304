#include "monadforge/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "monadforge/rng.hpp"

namespace monadforge {
namespace {

void write_row_major(ComplexVector& out, Eigen::Index& pos, const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(pos++) = m(i, j);
  }
}

struct TransporterEquations {
  const Configuration& from;
  const Configuration& to;

  // Residual of the homogenized system at (g0, g1, s), as one vector.
  ComplexVector apply(const ComplexMatrix& g0, const ComplexMatrix& g1, Complex s) const {
    const int k = from.k();
    const int n = from.n();
    ComplexVector out(3 * k * k + 2 * n * k);
    Eigen::Index pos = 0;
    write_row_major(out, pos, g0 * from.a1() - to.a1() * g1);
    write_row_major(out, pos, g0 * from.a2() - to.a2() * g1);
    write_row_major(out, pos, g1 * from.x() - to.x() * g0);
    write_row_major(out, pos, g0 * from.b() - s * to.b());
    write_row_major(out, pos, to.c() * g1 - s * from.c());
    return out;
  }

  ComplexMatrix matrix() const {
    const int k = from.k();
    const Eigen::Index kk = static_cast<Eigen::Index>(k) * k;
    ComplexMatrix m(3 * kk + 2 * static_cast<Eigen::Index>(from.n()) * k, 2 * kk + 1);
    ComplexMatrix g0 = ComplexMatrix::Zero(k, k);
    ComplexMatrix g1 = ComplexMatrix::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        g0(i, j) = 1.0;
        m.col(i * k + j) = apply(g0, g1, 0.0);
        g0(i, j) = 0.0;
        g1(i, j) = 1.0;
        m.col(kk + i * k + j) = apply(g0, g1, 0.0);
        g1(i, j) = 0.0;
      }
    }
    m.col(2 * kk) = apply(g0, g1, 1.0);
    return m;
  }
};

ComplexMatrix unvec(const ComplexVector& z, Eigen::Index offset, int k) {
  ComplexMatrix m(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) m(i, j) = z(offset + i * k + j);
  }
  return m;
}

double relative_distance(const Configuration& lhs, const Configuration& rhs) {
  return (lhs - rhs).norm() / (1.0 + rhs.norm());
}

}  // namespace

std::vector<std::string> words_up_to(int max_length) {
  std::vector<std::string> out{""};
  std::vector<std::string> layer{""};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      next.push_back(w + "A");
      next.push_back(w + "B");
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

ComplexMatrix evaluate_word(const std::string& word, const ComplexMatrix& a,
                            const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Identity(a.rows(), a.cols());
  for (char letter : word) {
    if (letter == 'A') {
      out = out * a;
    } else if (letter == 'B') {
      out = out * b;
    } else {
      throw Error(ErrorKind::Argument, "words are spelled with A and B only");
    }
  }
  return out;
}

Fingerprint fingerprint(const Configuration& config, int word_length) {
  if (word_length < 1) throw Error(ErrorKind::Argument, "word length bound must be >= 1");
  Fingerprint fp;
  fp.word_length_bound = word_length;
  const ComplexMatrix a = config.x() * config.a1();
  const ComplexMatrix b = config.x() * config.a2();
  fp.spec1 = eigenvalues(a);
  fp.spec2 = eigenvalues(b);
  const ComplexMatrix xb = config.x() * config.b();
  for (const auto& word : words_up_to(word_length)) {
    const ComplexMatrix w = evaluate_word(word, a, b);
    if (!word.empty()) fp.word_traces[word] = w.trace();
    fp.endo_invariants[word] = config.c() * w * xb;
  }
  return fp;
}

double multiset_distance(const std::vector<Complex>& lhs, const std::vector<Complex>& rhs) {
  if (lhs.size() != rhs.size()) return kInfinity;
  double scale = 0.0;
  for (const auto& z : lhs) scale = std::max(scale, std::abs(z));
  for (const auto& z : rhs) scale = std::max(scale, std::abs(z));
  std::vector<Complex> left = lhs;
  std::vector<Complex> right = rhs;
  double worst = 0.0;
  while (!left.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = kInfinity;
    for (std::size_t i = 0; i < left.size(); ++i) {
      for (std::size_t j = 0; j < right.size(); ++j) {
        const double dist = std::abs(left[i] - right[j]);
        if (dist < best) {
          best = dist;
          bi = i;
          bj = j;
        }
      }
    }
    worst = std::max(worst, best);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(bi));
    right.erase(right.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return worst / (1.0 + scale);
}

FingerprintComparison compare_fingerprints(const Fingerprint& lhs, const Fingerprint& rhs,
                                           double value_tol, double spectrum_tol) {
  FingerprintComparison out;
  if (lhs.word_length_bound != rhs.word_length_bound ||
      lhs.word_traces.size() != rhs.word_traces.size() ||
      lhs.endo_invariants.size() != rhs.endo_invariants.size()) {
    out.spectrum_deviation = out.trace_deviation = out.endo_deviation = kInfinity;
    return out;
  }
  out.spectrum_deviation =
      std::max(multiset_distance(lhs.spec1, rhs.spec1), multiset_distance(lhs.spec2, rhs.spec2));
  for (const auto& [word, value] : lhs.word_traces) {
    const auto it = rhs.word_traces.find(word);
    const double dev =
        it == rhs.word_traces.end() ? kInfinity : std::abs(value - it->second) / (1.0 + std::abs(value));
    out.trace_deviation = std::max(out.trace_deviation, dev);
  }
  for (const auto& [word, value] : lhs.endo_invariants) {
    const auto it = rhs.endo_invariants.find(word);
    double dev = kInfinity;
    if (it != rhs.endo_invariants.end() && it->second.rows() == value.rows() &&
        it->second.cols() == value.cols()) {
      dev = (value - it->second).norm() / (1.0 + value.norm());
    }
    out.endo_deviation = std::max(out.endo_deviation, dev);
  }
  out.agree = out.spectrum_deviation <= spectrum_tol && out.trace_deviation <= value_tol &&
              out.endo_deviation <= value_tol;
  return out;
}

AlignmentResult orbit_align(const Configuration& from, const Configuration& to,
                            const ToleranceModel& tol, const AlignOptions& options) {
  if (!from.same_shape(to)) throw Error(ErrorKind::Shape, "orbit_align needs equal (k, n)");
  const int k = from.k();
  const Eigen::Index kk = static_cast<Eigen::Index>(k) * k;

  const TransporterEquations eqs{from, to};
  const ComplexMatrix kernel = kernel_basis(eqs.matrix(), tol);
  AlignmentResult result;
  result.transporter_dimension = static_cast<int>(kernel.cols());
  if (kernel.cols() == 0) return result;

  std::vector<ComplexVector> candidates;
  // Kernel element with the largest s-component first, then random mixes.
  candidates.push_back(kernel * kernel.row(2 * kk).adjoint());
  if (kernel.cols() > 1) {
    Rng rng(options.seed);
    for (int i = 0; i < options.max_combinations; ++i) {
      candidates.push_back(kernel * rng.gaussian_vector(kernel.cols()));
    }
  }

  for (ComplexVector z : candidates) {
    const Complex s = z(2 * kk);
    if (std::abs(s) <= 1e-12 * z.norm()) continue;
    z /= s;
    try {
      GroupElement g(unvec(z, 0, k), unvec(z, kk, k), tol);
      const double residual = relative_distance(act(g, from), to);
      if (residual < result.action_residual) {
        result.action_residual = residual;
        result.g = g;
      }
      if (residual <= options.residual_tol) {
        result.found = true;
        return result;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidGroupElement) throw;
    }
  }
  return result;
}

ComplexMatrix integrability_differential(const Configuration& c, const Configuration& d) {
  if (!c.same_shape(d)) throw Error(ErrorKind::Shape, "direction shape differs from configuration");
  return d.a1() * c.x() * c.a2() + c.a1() * d.x() * c.a2() + c.a1() * c.x() * d.a2() -
         d.a2() * c.x() * c.a1() - c.a2() * d.x() * c.a1() - c.a2() * c.x() * d.a1() +
         d.b() * c.c() + c.b() * d.c();
}

ComplexMatrix integrability_jacobian(const Configuration& config) {
  const int k = config.k();
  const int n = config.n();
  const Eigen::Index params = Configuration::parameter_count(k, n);
  ComplexMatrix jac(static_cast<Eigen::Index>(k) * k, params);
  ComplexVector unit = ComplexVector::Zero(params);
  for (Eigen::Index j = 0; j < params; ++j) {
    unit(j) = 1.0;
    const ComplexMatrix col = integrability_differential(config, Configuration::from_vector(k, n, unit));
    for (int r = 0; r < k; ++r) {
      for (int s = 0; s < k; ++s) jac(r * k + s, j) = col(r, s);
    }
    unit(j) = 0.0;
  }
  return jac;
}

DimensionReport moduli_dimension_report(const Configuration& config, const ToleranceModel& tol) {
  require_valid(config, tol, "moduli_dimension");
  DimensionReport report;
  const int k = config.k();
  if (k == 0) return report;
  const ComplexMatrix jac = integrability_jacobian(config);
  const RankInfo jr = rank_info(jac, tol);
  report.jacobian_rank = jr.rank;
  report.jacobian_gap = jr.spectral_gap;
  report.kernel_dimension = static_cast<int>(jac.cols()) - jr.rank;
  report.surjective = jr.rank == k * k;
  const StabilizerInfo stab = stabilizer_info(config, tol);
  report.stabilizer_dimension = stab.dimension;
  report.stabilizer_gap = stab.rank.spectral_gap;
  report.moduli_dimension = report.kernel_dimension - (2 * k * k - stab.dimension);
  return report;
}

int moduli_dimension(const Configuration& config, const ToleranceModel& tol) {
  return moduli_dimension_report(config, tol).moduli_dimension;
}

bool smoothness_check(const Configuration& config, const ToleranceModel& tol) {
  require_valid(config, tol, "smoothness_check");
  if (config.k() == 0) return true;
  return rank(integrability_jacobian(config), tol) == config.k() * config.k();
}

}  // namespace monadforge
