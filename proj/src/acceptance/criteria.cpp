#include "monadforge/acceptance/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "monadforge/acceptance/oracles.hpp"
#include "monadforge/invariants.hpp"
#include "monadforge/nondegeneracy.hpp"
#include "monadforge/sampling.hpp"
#include "monadforge/serialization.hpp"
#include "monadforge/stabilization.hpp"

namespace monadforge::acceptance {
namespace {

// Collects failures; the first few are kept verbatim for the report line.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (messages_.size() < 3) messages_.push_back(what);
  }
  void worst(const std::string& name, double value) {
    auto it = std::find_if(worst_.begin(), worst_.end(), [&](auto& p) { return p.first == name; });
    if (it == worst_.end()) {
      worst_.emplace_back(name, value);
    } else {
      it->second = std::max(it->second, value);
    }
  }
  void least(const std::string& name, double value) {
    auto it = std::find_if(least_.begin(), least_.end(), [&](auto& p) { return p.first == name; });
    if (it == least_.end()) {
      least_.emplace_back(name, value);
    } else {
      it->second = std::min(it->second, value);
    }
  }
  Outcome outcome() const {
    std::ostringstream os;
    os << std::setprecision(3) << checks_ << " checks, " << failures_ << " failed";
    for (const auto& [name, value] : worst_) os << "; max " << name << " " << value;
    for (const auto& [name, value] : least_) os << "; min " << name << " " << value;
    for (const auto& m : messages_) os << "; " << m;
    return {failures_ == 0 && checks_ > 0, os.str()};
  }

 private:
  long checks_ = 0;
  long failures_ = 0;
  std::vector<std::string> messages_;
  std::vector<std::pair<std::string, double>> worst_;
  std::vector<std::pair<std::string, double>> least_;
};

struct Cell {
  int k;
  int n;
};

std::vector<Cell> freeness_grid() {
  std::vector<Cell> cells;
  for (int k = 1; k <= 3; ++k) {
    for (int n = std::max(2, k); n <= 5; ++n) cells.push_back({k, n});
  }
  return cells;
}

std::string label(const char* what, int k, int n, std::uint64_t seed) {
  std::ostringstream os;
  os << what << " (k=" << k << ", n=" << n << ", seed=" << seed << ")";
  return os.str();
}

Configuration sample(int k, int n, std::uint64_t seed) {
  SampleSpec spec;
  spec.k = k;
  spec.n = n;
  spec.seed = seed;
  return sample_config(spec).config;
}

// Random valid configuration with k <= max_k, n in [max(2, k), max_n].
Configuration sample_small(Rng& rng, std::uint64_t seed, int max_k, int max_n) {
  const int k = 1 + static_cast<int>(rng.uniform() * max_k);
  const int lo = std::max(2, k);
  const int n = lo + static_cast<int>(rng.uniform() * (max_n - lo + 1));
  return sample(k, n, seed);
}

Outcome cubic_scaling_identity() {
  Tally tally;
  Rng rng(0xC1);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + static_cast<int>(rng.uniform() * 4);
    const int n = 1 + static_cast<int>(rng.uniform() * 6);
    const Configuration config = oracle::gaussian_configuration(k, n, rng);
    const ComplexMatrix bc = config.b() * config.c();
    const double bound = 1e-10 * (1.0 + config.b().norm() * config.c().norm());
    for (int i = 0; i <= 10; ++i) {
      const double t = i / 10.0;
      const Configuration point = homotopy_point(config, t);
      const double gap = (point.b() * point.c() - std::pow(1.0 - t, 3) * bc).norm();
      tally.worst("gap/bound", gap / bound);
      tally.check(gap <= bound, label("gap above bound", k, n, trial));
    }
  }
  return tally.outcome();
}

Outcome homotopy_path_validity() {
  Tally tally;
  Rng rng(0xC2);
  for (int trial = 0; trial < 50; ++trial) {
    const Configuration config = sample_small(rng, derive_seed(0xC2, trial), 3, 5);
    const HomotopyCertificate cert = homotopy_certify(config, 11);
    const std::string where = label("path", config.k(), config.n(), trial);
    tally.check(cert.passed, where + " certificate failed");
    tally.check(cert.start_equals_embedding, where + " t=0 differs from embedding");
    tally.check(cert.end_is_constant, where + " t=1 not constant");
    for (const auto& s : cert.samples) {
      tally.check(s.residual_norm <= s.residual_threshold, where + " residual");
      tally.check(s.t == 0.0 || s.margin > 0.0, where + " margin");
      if (s.t > 0.0) tally.least("margin(t>0)", s.margin);
      tally.worst("residual", s.residual_norm);
    }
  }
  return tally.outcome();
}

Outcome freeness() {
  Tally tally;
  for (const Cell& cell : freeness_grid()) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Configuration config = sample(cell.k, cell.n, derive_seed(0xC3, seed));
      const NondegeneracyVerdict nd = check_nondegenerate(config);
      tally.check(nd.nondegenerate, label("sample degenerate", cell.k, cell.n, seed));
      const int dim = stabilizer_dimension(config);
      tally.check(dim == 0, label("nontrivial stabilizer", cell.k, cell.n, seed));
      tally.worst("stabilizer dim", dim);
    }
    // Integrable b = 0, c = 0 family.
    Rng rng(derive_seed(0xC3B, cell.k * 10 + cell.n));
    const Configuration degenerate = oracle::flat_integrable_configuration(cell.k, cell.n, rng);
    tally.check(!check_nondegenerate(degenerate).nondegenerate,
                label("b=c=0 not flagged degenerate", cell.k, cell.n, 0));
    const int dim = stabilizer_dimension(degenerate);
    tally.check(dim >= 1, label("b=c=0 stabilizer trivial", cell.k, cell.n, 0));
  }
  return tally.outcome();
}

Outcome smoothness_and_dimension() {
  Tally tally;
  for (const Cell& cell : freeness_grid()) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Configuration config = sample(cell.k, cell.n, derive_seed(0xC3, seed));
      const DimensionReport report = moduli_dimension_report(config);
      const std::string where = label("cell", cell.k, cell.n, seed);
      tally.check(report.jacobian_rank == cell.k * cell.k, where + " Jacobian not surjective");
      tally.check(report.moduli_dimension == oracle::expected_moduli_dimension(cell.k, cell.n),
                  where + " dimension != 2nk");
      tally.check(report.jacobian_gap >= 1e3, where + " Jacobian gap < 1e3");
      tally.check(report.stabilizer_gap >= 1e3, where + " stabilizer gap < 1e3");
      tally.least("Jacobian gap", report.jacobian_gap);
      tally.least("stabilizer gap", report.stabilizer_gap);
    }
  }
  return tally.outcome();
}

Outcome equivariance() {
  Tally tally;
  Rng rng(0xC5);
  for (int trial = 0; trial < 100; ++trial) {
    const Configuration valid = sample_small(rng, derive_seed(0xC5, trial), 3, 5);
    const int k = valid.k();
    const int n = valid.n();
    const GroupElement g = random_group_element(k, rng, 10.0);
    for (int m : {1, 2}) {
      tally.check(equivariance_check_embed(valid, g, m), label("embedding/action mismatch", k, n, trial));
    }
    tally.check(validate(act(g, valid)).valid(), label("validity lost", k, n, trial));

    const Configuration generic = oracle::gaussian_configuration(k, n, rng);
    tally.check(validate(generic).valid() == validate(act(g, generic)).valid(),
                label("verdict changed on generic data", k, n, trial));
    const Configuration flat = oracle::flat_integrable_configuration(k, n, rng);
    tally.check(!validate(act(g, flat)).valid(), label("b=c=0 became valid", k, n, trial));
  }
  return tally.outcome();
}

Outcome nondegeneracy_cross_check() {
  Tally tally;
  Rng rng(0xC6);
  // (a) k = n = 1 integrable data is always degenerate.
  for (int trial = 0; trial < 500; ++trial) {
    const bool kill_c = rng.uniform() < 0.5;
    const bool zero_x = trial % 25 == 0;
    const auto z = [&] { return ComplexMatrix::Constant(1, 1, rng.complex_normal()); };
    const ComplexMatrix a1 = z(), a2 = z();
    const ComplexMatrix x = zero_x ? ComplexMatrix::Zero(1, 1) : z();
    const ComplexMatrix other = z();
    const Configuration config(1, 1, a1, a2, x, kill_c ? other : ComplexMatrix::Zero(1, 1),
                               kill_c ? ComplexMatrix::Zero(1, 1) : other);
    const std::string where = label("scalar", 1, 1, trial);
    tally.check(check_integrable(config).integrable, where + " not integrable");
    const auto expected = oracle::scalar_case_witness(config);
    tally.check(expected.has_value(), where + " oracle found no witness");
    if (expected) {
      const ComplexVector one = ComplexVector::Ones(1);
      tally.check(oracle::substitute_witness(config, expected->side, expected->lambda,
                                             expected->mu, one) <= 1e-12 * (1 + config.norm()),
                  where + " oracle witness does not substitute");
    }
    const NondegeneracyVerdict nd = check_nondegenerate(config);
    tally.check(!nd.nondegenerate && nd.witness.has_value(), where + " reported non-degenerate");
    if (nd.witness) {
      const auto& w = *nd.witness;
      const double res = oracle::substitute_witness(config, w.side, w.lambda, w.mu, w.vec);
      tally.worst("witness residual", res);
      tally.check(res <= 1e-7, where + " witness residual > 1e-7");
      tally.check(std::abs(w.lambda[0] * w.mu[0] + w.lambda[1] * w.mu[1]) <= 1e-7,
                  where + " lambda.mu != 0");
      tally.check(std::abs(w.mu[0]) + std::abs(w.mu[1]) > 0.5, where + " mu = 0");
    }
  }
  // (b) lambda = 0, d >= 2: randomized pencil detection vs 721-point sweep.
  int planted_hits = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 3 + trial % 2;
    const int d = 2 + static_cast<int>(rng.uniform() * (k - 2));
    const bool planted = trial % 2 == 0;
    const oracle::PencilInstance inst = oracle::make_pencil_instance(k, d, planted, rng);
    const auto [p1, p2] = oracle::restricted_pencil(inst);
    const oracle::SweepResult sweep = oracle::sweep_real_pencil(p1, p2);
    const SideVerdict side =
        examine_side(SideData::forward(inst.config), WitnessSide::Forward, ToleranceModel{});
    const std::string where = label("pencil", k, inst.config.n(), trial);
    tally.check(sweep.degenerate == planted, where + " sweep disagrees with construction");
    tally.check(side.degenerate == sweep.degenerate, where + " randomized verdict != sweep");
    if (side.degenerate) {
      tally.check(side.branch == DegeneracyBranch::ZeroPencil, where + " wrong branch");
      const auto& w = *side.witness;
      tally.check(oracle::substitute_witness(inst.config, w.side, w.lambda, w.mu, w.vec) <=
                      witness_tolerance(inst.config),
                  where + " pencil witness does not substitute");
      planted_hits += planted ? 1 : 0;
    }
  }
  tally.check(planted_hits == 25, "not every planted pencil was detected");
  return tally.outcome();
}

Outcome orbit_machinery() {
  Tally tally;
  Rng rng(0xC7);
  for (int trial = 0; trial < 100; ++trial) {
    const Configuration config = sample_small(rng, derive_seed(0xC7, trial), 3, 5);
    const GroupElement g = random_group_element(config.k(), rng, 10.0);
    const Configuration moved = act(g, config);
    const std::string where = label("orbit", config.k(), config.n(), trial);
    const AlignmentResult align = orbit_align(config, moved);
    tally.check(align.found && align.action_residual <= 1e-8, where + " alignment failed");
    tally.worst("alignment residual", align.action_residual);
    const FingerprintComparison cmp =
        compare_fingerprints(fingerprint(config), fingerprint(moved), 1e-8, 1e-8);
    tally.check(cmp.agree, where + " fingerprint not invariant");
    tally.worst("fingerprint deviation",
                std::max({cmp.spectrum_deviation, cmp.trace_deviation, cmp.endo_deviation}));
  }
  int separated = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Configuration lhs = sample_small(rng, derive_seed(0xC7A, trial), 3, 5);
    const Configuration rhs = sample(lhs.k(), lhs.n(), derive_seed(0xC7B, trial));
    const bool fingerprints_agree = compare_fingerprints(fingerprint(lhs), fingerprint(rhs)).agree;
    const AlignmentResult align = orbit_align(lhs, rhs);
    const std::string where = label("pair", lhs.k(), lhs.n(), trial);
    if (!fingerprints_agree) {
      ++separated;
      tally.check(!align.found, where + " aligned despite fingerprint mismatch");
    }
    if (align.found) tally.check(fingerprints_agree, where + " aligned but fingerprints differ");
  }
  tally.check(separated == 50, "independent pairs with agreeing fingerprints");
  return tally.outcome();
}

Outcome jacobian_correctness() {
  Tally tally;
  Rng rng(0xC8);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + static_cast<int>(rng.uniform() * 4);
    const int n = 1 + static_cast<int>(rng.uniform() * 6);
    const Configuration config = oracle::gaussian_configuration(k, n, rng);
    Configuration direction = oracle::gaussian_configuration(k, n, rng);
    direction = direction * (1.0 / direction.norm());
    const ComplexVector analytic = integrability_jacobian(config) * direction.to_vector();
    const ComplexMatrix fd = oracle::finite_difference(config, direction, 1e-6, true);
    ComplexVector fd_vec(k * k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) fd_vec(i * k + j) = fd(i, j);
    }
    const double err = (analytic - fd_vec).norm();
    tally.worst("FD error", err);
    tally.check(err <= 1e-5, label("Jacobian vs FD", k, n, trial));
  }
  for (int trial = 0; trial < 50; ++trial) {
    const Configuration config = sample_small(rng, derive_seed(0xC8, trial), 3, 5);
    const int k = config.k();
    TangentGroupElement h{rng.gaussian(k, k), rng.gaussian(k, k)};
    const double scale = std::sqrt(h.h0.squaredNorm() + h.h1.squaredNorm());
    h.h0 /= scale;
    h.h1 /= scale;
    const double err = (integrability_jacobian(config) * lie_act(h, config).to_vector()).norm();
    tally.worst("orbit tangent image", err);
    tally.check(err <= 1e-9, label("orbit tangent outside ker", k, config.n(), trial));
  }
  return tally.outcome();
}

Outcome determinism_and_serialization() {
  Tally tally;
  for (std::uint64_t seed : {1ULL, 42ULL, 0xDEADBEEFULL}) {
    SampleSpec spec;
    spec.k = 2;
    spec.n = 3;
    spec.seed = seed;
    const SampleResult first = sample_config(spec);
    const SampleResult second = sample_config(spec);
    tally.check(first.config == second.config && first.attempts == second.attempts,
                "sample not reproducible");
    tally.check(serialize(first.config) == serialize(second.config), "serialized bytes differ");
    tally.check(random_matrix(3, 2, seed) == random_matrix(3, 2, seed), "random_matrix differs");
  }
  for (const auto& example : canonical_examples()) {
    tally.check(parse_configuration(serialize(example.config)) == example.config,
                "canonical round trip: " + example.name);
  }
  Rng rng(0xC9);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = static_cast<int>(rng.uniform() * 5);
    const int n = 1 + static_cast<int>(rng.uniform() * 6);
    Configuration config = oracle::gaussian_configuration(k, n, rng);
    // Mix in values that are awkward for decimal printing.
    if (k > 0 && trial % 3 == 0) config = config * Complex(1e-300 * (trial + 1), 0.0);
    if (k > 0 && trial % 3 == 1) config = config * Complex(0.1, 1e17);
    tally.check(parse_configuration(serialize(config)) == config,
                label("random round trip", k, n, trial));
  }
  return tally.outcome();
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"AC1", "cubic scaling identity b_t c_t = (1-t)^3 b c", 5.0, cubic_scaling_identity},
      {"AC2", "homotopy path validity", 60.0, homotopy_path_validity},
      {"AC3", "free action on non-degenerate data", 60.0, freeness},
      {"AC4", "smoothness and moduli dimension 2nk", 120.0, smoothness_and_dimension},
      {"AC5", "equivariance of embedding and validity", 10.0, equivariance},
      {"AC6", "non-degeneracy decision cross-check", 60.0, nondegeneracy_cross_check},
      {"AC7", "orbit alignment and fingerprints", 60.0, orbit_machinery},
      {"AC8", "Jacobian correctness", 10.0, jacobian_correctness},
      {"AC9", "determinism and serialization", 5.0, determinism_and_serialization},
  };
  return all;
}

std::vector<CriterionResult> run(std::ostream& out, const std::vector<std::string>& only) {
  std::vector<CriterionResult> results;
  for (const Criterion& criterion : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), criterion.id) == only.end()) continue;
    CriterionResult result;
    result.id = criterion.id;
    result.title = criterion.title;
    result.budget_seconds = criterion.budget_seconds;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.within_budget = result.seconds <= criterion.budget_seconds;
    result.passed = outcome.passed && result.within_budget;
    result.detail = outcome.detail;
    out << (result.passed ? "[PASS] " : "[FAIL] ") << result.id << ' ' << result.title << " ("
        << std::fixed << std::setprecision(2) << result.seconds << " s / " << std::setprecision(0)
        << result.budget_seconds << " s): " << std::defaultfloat << result.detail << '\n';
    out.flush();
    results.push_back(std::move(result));
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return !results.empty() &&
         std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

}  // namespace monadforge::acceptance
