#include <gtest/gtest.h>

#include "monadforge/acceptance/oracles.hpp"
#include "monadforge/configuration.hpp"
#include "monadforge/nondegeneracy.hpp"
#include "monadforge/rng.hpp"
#include "test_support.hpp"

using namespace monadforge;
using test::mat;
using test::scalar;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Schema;
}

}  // namespace

TEST(ConfigurationShape, RejectsWrongShapes) {
  EXPECT_EQ(kind_of([] {
              Configuration(2, 1, ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2),
                            ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2),
                            ComplexMatrix::Zero(1, 2));
            }),
            ErrorKind::Shape);
  EXPECT_EQ(kind_of([] { Configuration::zero(1, 0); }), ErrorKind::Shape);
  EXPECT_EQ(kind_of([] { Configuration::zero(-1, 1); }), ErrorKind::Shape);
}

TEST(ConfigurationShape, RejectsNonFinite) {
  ComplexMatrix bad = ComplexMatrix::Zero(1, 1);
  bad(0, 0) = Complex(kInfinity, 0.0);
  EXPECT_EQ(kind_of([&] {
              Configuration(1, 1, bad, scalar(0.0), scalar(0.0), scalar(0.0), scalar(0.0));
            }),
            ErrorKind::MalformedInput);
}

TEST(ConfigurationShape, VectorRoundTrip) {
  Rng rng(1);
  const Configuration c = oracle::gaussian_configuration(3, 2, rng);
  const ComplexVector v = c.to_vector();
  EXPECT_EQ(v.size(), Configuration::parameter_count(3, 2));
  EXPECT_TRUE(Configuration::from_vector(3, 2, v) == c);
}

TEST(IntegrabilityResidual, SpecExamples) {
  EXPECT_EQ(integrability_residual(Configuration::zero(2, 2)).norm(), 0.0);
  EXPECT_EQ(integrability_residual(test::scalar_k1n2()).norm(), 0.0);

  const Configuration nil(2, 2, mat(2, 2, {0.0, 1.0, 0.0, 0.0}), mat(2, 2, {0.0, 0.0, 1.0, 0.0}),
                          ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2),
                          ComplexMatrix::Zero(2, 2));
  const ComplexMatrix r = integrability_residual(nil);
  EXPECT_TRUE(r == mat(2, 2, {1.0, 0.0, 0.0, -1.0}));
}

TEST(CheckIntegrable, SpecExamples) {
  const auto zero = check_integrable(Configuration::zero(1, 1));
  EXPECT_TRUE(zero.integrable);
  EXPECT_EQ(zero.residual_norm, 0.0);

  const Configuration nil(2, 2, mat(2, 2, {0.0, 1.0, 0.0, 0.0}), mat(2, 2, {0.0, 0.0, 1.0, 0.0}),
                          ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2),
                          ComplexMatrix::Zero(2, 2));
  const auto n = check_integrable(nil);
  EXPECT_FALSE(n.integrable);
  EXPECT_NEAR(n.residual_norm, std::sqrt(2.0), 1e-15);

  EXPECT_TRUE(check_integrable(test::valid_k1n2()).integrable);
}

TEST(CheckIntegrable, ThresholdFormula) {
  Rng rng(2);
  const Configuration c = oracle::gaussian_configuration(2, 3, rng);
  const auto check = check_integrable(c);
  const double expected = 1e-9 * (1.0 + c.a1().norm() * c.x().norm() * c.a2().norm() +
                                  c.b().norm() * c.c().norm());
  EXPECT_NEAR(check.threshold, expected, 1e-24);
}

TEST(CheckNondegenerate, SpecExamples) {
  const auto valid = check_nondegenerate(test::valid_k1n2());
  EXPECT_TRUE(valid.nondegenerate);
  EXPECT_GT(valid.margin, 0.0);
  EXPECT_FALSE(valid.witness);

  const auto zero = check_nondegenerate(Configuration::zero(1, 1));
  ASSERT_FALSE(zero.nondegenerate);
  ASSERT_TRUE(zero.witness);
  EXPECT_EQ(zero.witness->side, WitnessSide::Forward);
  EXPECT_EQ(zero.witness->lambda[0], Complex{});
  EXPECT_EQ(zero.witness->lambda[1], Complex{});
  EXPECT_NEAR(std::abs(zero.witness->mu[0] - 1.0), 0.0, 1e-15);
  EXPECT_EQ(zero.witness->mu[1], Complex{});
  EXPECT_NEAR(std::abs(zero.witness->vec(0) - 1.0), 0.0, 1e-15);

  // a1=1, a2=2, x=3, b=0, c=5: dual witness, lambda=(3,6), mu ~ (2,-1), w=1.
  const Configuration dual(1, 1, scalar(1.0), scalar(2.0), scalar(3.0), scalar(0.0), scalar(5.0));
  const auto d = check_nondegenerate(dual);
  ASSERT_FALSE(d.nondegenerate);
  ASSERT_TRUE(d.witness);
  const auto& w = *d.witness;
  EXPECT_EQ(w.side, WitnessSide::Dual);
  EXPECT_NEAR(std::abs(w.lambda[0] - 3.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(w.lambda[1] - 6.0), 0.0, 1e-12);
  const double s = std::sqrt(5.0);
  EXPECT_NEAR(std::abs(w.mu[0] - 2.0 / s), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(w.mu[1] + 1.0 / s), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(w.vec(0) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(d.margin, 0.0);
}

TEST(Validate, SpecExamples) {
  for (int n : {1, 3}) {
    const auto empty = validate(Configuration::zero(0, n));
    EXPECT_TRUE(empty.valid());
    EXPECT_EQ(empty.integrability_residual_norm, 0.0);
    EXPECT_EQ(empty.margin, kInfinity);
  }
  EXPECT_TRUE(validate(test::valid_k1n2()).valid());
  const auto zero = validate(Configuration::zero(1, 1));
  EXPECT_TRUE(zero.integrable);
  EXPECT_FALSE(zero.nondegenerate);
  EXPECT_FALSE(zero.valid());
}

TEST(Validate, WitnessIffDegenerate) {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 1 + trial % 3;
    const Configuration c = trial % 2 ? oracle::gaussian_configuration(k, 1 + trial % 4, rng)
                                      : oracle::flat_integrable_configuration(k, 2, rng);
    const auto report = validate(c);
    EXPECT_EQ(report.nondegenerate, !report.witness.has_value());
  }
}

TEST(Act, SpecExamples) {
  const Configuration c = test::scalar_k1n2();
  EXPECT_TRUE(act(GroupElement::identity(1), c) == c);

  const Configuration moved = act(GroupElement(scalar(2.0), scalar(1.0)), c);
  EXPECT_EQ(moved.a1()(0, 0), Complex(2.0));
  EXPECT_EQ(moved.a2()(0, 0), Complex(4.0));
  EXPECT_EQ(moved.x()(0, 0), Complex(1.5));
  EXPECT_TRUE(moved.b() == mat(1, 2, {0.0, 2.0}));
  EXPECT_TRUE(moved.c() == c.c());
}

TEST(Act, SingularGroupElementRejected) {
  EXPECT_EQ(kind_of([] { GroupElement(scalar(0.0), scalar(1.0)); }),
            ErrorKind::InvalidGroupElement);
  EXPECT_EQ(kind_of([] {
              GroupElement(mat(2, 2, {1.0, 2.0, 2.0, 4.0}), ComplexMatrix::Identity(2, 2));
            }),
            ErrorKind::InvalidGroupElement);
}

TEST(Act, GroupLaw) {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + trial % 4;
    const Configuration c = oracle::gaussian_configuration(k, 2, rng);
    const GroupElement g = random_group_element(k, rng);
    const GroupElement h = random_group_element(k, rng);
    const Configuration lhs = act(g, act(h, c));
    const Configuration rhs = act(g * h, c);
    EXPECT_LT((lhs - rhs).norm(), 1e-10 * (1 + c.norm()) * 100);
  }
}

TEST(Act, ValidSampleStaysValid) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Configuration c = test::sampled(1 + trial % 3, 3, trial);
    EXPECT_TRUE(validate(act(random_group_element(c.k(), rng), c)).valid());
  }
}

TEST(Equivariance, ResidualTransformsByG) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 4;
    const int n = 1 + trial % 6;
    const Configuration c = oracle::gaussian_configuration(k, n, rng);
    const GroupElement g = random_group_element(k, rng);
    const ComplexMatrix lhs = integrability_residual(act(g, c));
    const ComplexMatrix rhs = g.g0() * integrability_residual(c) * g.g1_inverse();
    const double scale = 1 + g.g0().norm() * g.g1_inverse().norm() *
                                 (c.a1().norm() * c.x().norm() * c.a2().norm() +
                                  c.b().norm() * c.c().norm());
    EXPECT_LE((lhs - rhs).norm(), 1e-10 * scale);
  }
}

TEST(Validity, GroupInvariantOnValidAndInvalid) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 3;
    const int n = std::max(2, k) + trial % 2;
    const Configuration valid = test::sampled(k, n, 100 + trial);
    const Configuration invalid = trial % 2 ? oracle::gaussian_configuration(k, n, rng)
                                            : oracle::flat_integrable_configuration(k, n, rng);
    const GroupElement g = random_group_element(k, rng, 1e3);
    EXPECT_TRUE(validate(act(g, valid)).valid());
    EXPECT_FALSE(validate(invalid).valid());
    EXPECT_FALSE(validate(act(g, invalid)).valid());
  }
}

TEST(LieAct, SpecExamples) {
  const Configuration c = test::scalar_k1n2();
  const Configuration zero = lie_act({scalar(0.0), scalar(0.0)}, c);
  EXPECT_EQ(zero.norm(), 0.0);

  const Configuration id = lie_act({scalar(1.0), scalar(1.0)}, c);
  EXPECT_EQ(id.a1().norm() + id.a2().norm() + id.x().norm(), 0.0);
  EXPECT_TRUE(id.b() == c.b());
  EXPECT_TRUE(id.c() == ComplexMatrix(-c.c()));
}

TEST(LieAct, FiniteDifferenceOfAction) {
  Rng rng(8);
  const double eps = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 3;
    const Configuration c = oracle::gaussian_configuration(k, 2, rng);
    const TangentGroupElement h{rng.gaussian(k, k), rng.gaussian(k, k)};
    const ComplexMatrix id = ComplexMatrix::Identity(k, k);
    const GroupElement g(id + eps * h.h0, id + eps * h.h1);
    const Configuration fd = (act(g, c) - c) * Complex(1.0 / eps);
    EXPECT_LT((fd - lie_act(h, c)).norm(), 1e-4 * (1 + c.norm()) * (1 + h.h0.norm() + h.h1.norm()));
  }
}

TEST(LieAct, MatrixMatchesOperator) {
  Rng rng(9);
  const Configuration c = oracle::gaussian_configuration(2, 3, rng);
  const TangentGroupElement h{rng.gaussian(2, 2), rng.gaussian(2, 2)};
  const ComplexMatrix m = lie_act_matrix(c);
  ComplexVector hv(8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      hv(i * 2 + j) = h.h0(i, j);
      hv(4 + i * 2 + j) = h.h1(i, j);
    }
  EXPECT_LT((m * hv - lie_act(h, c).to_vector()).norm(), 1e-12);
}

TEST(Stabilizer, SpecExamples) {
  EXPECT_EQ(stabilizer_dimension(Configuration::zero(1, 1)), 2);
  EXPECT_EQ(stabilizer_dimension(test::valid_k1n2()), 0);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const Configuration block(2, 2, id, id, id, ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2));
  EXPECT_GE(stabilizer_dimension(block), 1);
  EXPECT_FALSE(check_nondegenerate(block).nondegenerate);
  EXPECT_EQ(stabilizer_dimension(Configuration::zero(0, 2)), 0);
}

TEST(Stabilizer, FreeOnNondegenerateSamples) {
  for (int k = 1; k <= 3; ++k) {
    for (int n = std::max(2, k); n <= 4; ++n) {
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Configuration c = test::sampled(k, n, seed);
        const auto nd = check_nondegenerate(c);
        ASSERT_TRUE(nd.nondegenerate);
        if (nd.margin > 1e-6) {
          EXPECT_EQ(stabilizer_dimension(c), 0) << k << ' ' << n << ' ' << seed;
        }
      }
    }
  }
}

TEST(Stabilizer, IntegrableFlatDataDegenerateWithStabilizer) {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + trial % 3;
    const Configuration c = oracle::flat_integrable_configuration(k, 1 + trial % 4, rng);
    ASSERT_TRUE(check_integrable(c).integrable);
    EXPECT_FALSE(check_nondegenerate(c).nondegenerate);
    EXPECT_GE(stabilizer_dimension(c), 1);
  }
}

TEST(RequireValid, CarriesReport) {
  try {
    require_valid(Configuration::zero(1, 1), ToleranceModel{}, "test");
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
    EXPECT_FALSE(e.report().nondegenerate);
    EXPECT_TRUE(e.report().witness.has_value());
  }
}
