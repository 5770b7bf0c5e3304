#include <gtest/gtest.h>

#include "monadforge/acceptance/oracles.hpp"
#include "monadforge/invariants.hpp"
#include "monadforge/rng.hpp"
#include "test_support.hpp"

using namespace monadforge;
using test::scalar;

TEST(Fingerprint, ScalarExample) {
  const Configuration c = test::scalar_k1n2();
  const Fingerprint f = fingerprint(c);
  ASSERT_EQ(f.spec1.size(), 1u);
  EXPECT_EQ(f.spec1[0], Complex(3.0));
  EXPECT_EQ(f.spec2[0], Complex(6.0));
  EXPECT_EQ(f.word_traces.at("A"), Complex(3.0));
  EXPECT_EQ(f.word_traces.at("B"), Complex(6.0));
  EXPECT_EQ(f.word_length_bound, 3);
}

TEST(Fingerprint, WordsEnumerated) {
  const auto words = words_up_to(3);
  EXPECT_EQ(words.size(), 1u + 2 + 4 + 8);
  EXPECT_EQ(words.front(), "");
  const Fingerprint f = fingerprint(test::scalar_k1n2(), 2);
  EXPECT_EQ(f.endo_invariants.size(), 7u);
  EXPECT_EQ(f.word_traces.count("ABA"), 0u);
}

TEST(Fingerprint, EvaluateWord) {
  Rng rng(41);
  const ComplexMatrix a = rng.gaussian(3, 3), b = rng.gaussian(3, 3);
  EXPECT_TRUE(evaluate_word("", a, b) == ComplexMatrix::Identity(3, 3));
  EXPECT_LT((evaluate_word("ABA", a, b) - a * b * a).norm(), 1e-13);
  EXPECT_THROW(evaluate_word("AC", a, b), Error);
}

TEST(Fingerprint, ZeroXKillsEndoInvariants) {
  Rng rng(42);
  Configuration c = oracle::gaussian_configuration(3, 2, rng);
  c = Configuration(3, 2, c.a1(), c.a2(), ComplexMatrix::Zero(3, 3), c.b(), c.c());
  for (const auto& [word, m] : fingerprint(c).endo_invariants) {
    EXPECT_EQ(m.norm(), 0.0) << word;
    EXPECT_EQ(m.rows(), 2);
  }
}

TEST(Fingerprint, GroupInvariance) {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 4;
    const Configuration c = trial % 2 ? oracle::gaussian_configuration(k, 1 + trial % 3, rng)
                                      : test::sampled(k, k + 1, trial);
    const GroupElement g = random_group_element(k, rng);
    const auto cmp = compare_fingerprints(fingerprint(c), fingerprint(act(g, c)));
    EXPECT_TRUE(cmp.agree) << trial << ' ' << cmp.trace_deviation << ' ' << cmp.endo_deviation;
  }
}

TEST(Fingerprint, TraceMatchesSpectrumSum) {
  Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const Configuration c = oracle::gaussian_configuration(1 + trial % 4, 2, rng);
    const Fingerprint f = fingerprint(c);
    Complex sum1{}, sum2{};
    for (const Complex& z : f.spec1) sum1 += z;
    for (const Complex& z : f.spec2) sum2 += z;
    EXPECT_LE(std::abs(sum1 - f.word_traces.at("A")), 1e-8 * (1 + std::abs(sum1)));
    EXPECT_LE(std::abs(sum2 - f.word_traces.at("B")), 1e-8 * (1 + std::abs(sum2)));
  }
}

TEST(Fingerprint, Deterministic) {
  const Configuration c = test::sampled(2, 3, 5);
  const Fingerprint a = fingerprint(c), b = fingerprint(c);
  EXPECT_EQ(a.spec1, b.spec1);
  EXPECT_EQ(a.word_traces, b.word_traces);
}

TEST(MultisetDistance, MatchesNearestPairs) {
  EXPECT_EQ(multiset_distance({1.0, 2.0}, {2.0, 1.0}), 0.0);
  // Deviation is relative to 1 + the largest modulus.
  EXPECT_NEAR(multiset_distance({1.0, 2.0}, {1.0, 2.5}), 0.5 / 3.5, 1e-15);
  EXPECT_EQ(multiset_distance({1.0}, {1.0, 2.0}), kInfinity);
}

TEST(OrbitAlign, Identity) {
  const Configuration c = test::sampled(2, 3, 11);
  const AlignmentResult r = orbit_align(c, c);
  ASSERT_TRUE(r.found);
  EXPECT_LE(r.action_residual, 1e-12);
  EXPECT_EQ(r.transporter_dimension, 1);
  // Freeness: the transporter is the identity up to scalar, normalized to s = 1.
  EXPECT_LT((r.g->g0() - ComplexMatrix::Identity(2, 2)).norm(), 1e-9);
  EXPECT_LT((r.g->g1() - ComplexMatrix::Identity(2, 2)).norm(), 1e-9);
}

TEST(OrbitAlign, RoundTrip) {
  Rng rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 3;
    const Configuration c = test::sampled(k, k + 1 + trial % 2, 200 + trial);
    const GroupElement g = random_group_element(k, rng);
    const Configuration target = act(g, c);
    const AlignmentResult r = orbit_align(c, target);
    ASSERT_TRUE(r.found) << trial;
    EXPECT_LE(r.action_residual, 1e-8);
    EXPECT_LE((act(*r.g, c) - target).norm(), 1e-8 * (1 + target.norm()));
    // Alignment success implies fingerprint agreement.
    EXPECT_TRUE(compare_fingerprints(fingerprint(c), fingerprint(target)).agree);
  }
}

TEST(OrbitAlign, DifferentSpectraNotFound) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Configuration c1 = test::sampled(2, 3, seed);
    const Configuration c2 = test::sampled(2, 3, seed + 100);
    const auto cmp = compare_fingerprints(fingerprint(c1), fingerprint(c2));
    ASSERT_FALSE(cmp.agree);
    const AlignmentResult r = orbit_align(c1, c2);
    EXPECT_FALSE(r.found);
    EXPECT_EQ(r.transporter_dimension, 0);
  }
}

TEST(OrbitAlign, ShapeMismatch) {
  try {
    orbit_align(test::sampled(1, 2, 0), test::sampled(1, 3, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
}

TEST(Jacobian, ZeroConfiguration) {
  const ComplexMatrix j = integrability_jacobian(Configuration::zero(2, 3));
  EXPECT_EQ(j.rows(), 4);
  EXPECT_EQ(j.cols(), Configuration::parameter_count(2, 3));
  EXPECT_EQ(j.norm(), 0.0);
}

TEST(Jacobian, ForwardFiniteDifference) {
  Rng rng(46);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + trial % 2;
    const Configuration c = oracle::gaussian_configuration(k, 1 + trial % 3, rng);
    ComplexVector d = rng.gaussian_vector(Configuration::parameter_count(k, c.n()));
    d /= d.norm();
    const Configuration dir = Configuration::from_vector(k, c.n(), d);
    const ComplexVector lin = integrability_jacobian(c) * d;
    const ComplexMatrix fd = oracle::finite_difference(c, dir, 1e-6, false);
    ComplexVector fdv(k * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) fdv(i * k + j) = fd(i, j);
    EXPECT_LE((lin - fdv).norm(), 1e-5);
    const ComplexMatrix diff = integrability_differential(c, dir);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) EXPECT_LT(std::abs(diff(i, j) - lin(i * k + j)), 1e-12);
  }
}

TEST(Jacobian, OrbitTangentsInKernel) {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 3;
    const Configuration c = test::sampled(k, k + 1, 300 + trial);
    const TangentGroupElement h{rng.gaussian(k, k), rng.gaussian(k, k)};
    EXPECT_LE(integrability_differential(c, lie_act(h, c)).norm(), 1e-9);
  }
}

TEST(ModuliDimension, SpecExamples) {
  EXPECT_EQ(moduli_dimension(Configuration::zero(0, 2)), 0);
  EXPECT_TRUE(smoothness_check(Configuration::zero(0, 2)));
  EXPECT_EQ(moduli_dimension(test::sampled(1, 2, 0)), 4);
  EXPECT_EQ(moduli_dimension(test::sampled(2, 2, 0)), 8);
  EXPECT_THROW(smoothness_check(Configuration::zero(1, 1)), PreconditionError);
  EXPECT_THROW(moduli_dimension(Configuration::zero(1, 2)), PreconditionError);
}

TEST(ModuliDimension, KernelAccountingGrid) {
  for (int k = 1; k <= 3; ++k) {
    for (int n = std::max(2, k); n <= 4; ++n) {
      for (std::uint64_t seed = 0; seed < 2; ++seed) {
        const Configuration c = test::sampled(k, n, seed);
        const DimensionReport rep = moduli_dimension_report(c);
        EXPECT_EQ(rep.kernel_dimension, 2 * k * k + 2 * n * k);
        EXPECT_EQ(rep.moduli_dimension, oracle::expected_moduli_dimension(k, n));
        EXPECT_EQ(rep.moduli_dimension, 2 * n * k);
        EXPECT_TRUE(rep.surjective);
        EXPECT_EQ(rep.stabilizer_dimension, 0);
        EXPECT_GT(rep.jacobian_gap, 1e3);
      }
    }
  }
}

TEST(Smoothness, RandomValidSamples) {
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 3;
    const int n = std::max(2, k) + trial % (5 - std::max(2, k));
    EXPECT_TRUE(smoothness_check(test::sampled(k, n, 400 + trial)));
  }
}
