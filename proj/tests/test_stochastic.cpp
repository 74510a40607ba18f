#include <gtest/gtest.h>

#include "pam/selftest.hpp"

using namespace pam;

namespace {

const Ambient Z3{3, 0};

Ball ball(int level, long center) { return make_ball(Z3, level, Rational(center)); }

OrthStochMeasure haar_xi() { return build_orthogonal_measure(Measure::haar(Z3, 5), 2); }

LocallyConstantFn step(int level, std::vector<long> values) {
  std::size_t i = 0;
  std::map<Ball, Rational> by_atom;
  for (const Ball& a : ClopenSet::whole(Z3).refine(level)) by_atom.emplace(a, Rational(values.at(i++)));
  return scalar_fn(Z3, level, [&](const Ball& a) { return by_atom.at(a); });
}

}  // namespace

TEST(Expectation, Examples) {
  const SpacePtr s = FiniteProbSpace::rademacher(5, 1);
  const RandomVariable sign = RandomVariable::sign(s, 0);
  EXPECT_TRUE(sign.expectation().is_zero());
  EXPECT_EQ(RandomVariable::constant(s, Cyclotomic(Rational(7, 2))).expectation(), Cyclotomic(Rational(7, 2)));
  EXPECT_EQ((sign * sign).expectation(), Cyclotomic(1));
  EXPECT_EQ(sign * sign, RandomVariable::constant(s, Cyclotomic(1)));
}

TEST(Expectation, AgreesWithEnumeration) {
  const SpacePtr s = std::make_shared<const FiniteProbSpace>(
      7, std::vector<Factor>{{{"a", "b", "c"}, {Rational(1, 3), Rational(1, 2), Rational(1, 6)}},
                             {{"+", "-"}, {Rational(1, 2), Rational(1, 2)}},
                             {{"x", "y"}, {Rational(3), Rational(-2)}}});
  selftest::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    RandomVariable x = RandomVariable::constant(s, Cyclotomic(Rational(rng.uniform(-3, 3))));
    for (int k = 0; k < 3; ++k) {
      const auto f = static_cast<std::uint32_t>(rng.uniform(0, 2));
      const auto o = static_cast<std::uint32_t>(rng.uniform(0, static_cast<long>(s->factors()[f].masses.size()) - 1));
      const RandomVariable ind = RandomVariable::indicator(s, f, o);
      x = rng.chance(50) ? x * (ind + RandomVariable::constant(s, Cyclotomic(1))) : x + Cyclotomic(Rational(rng.uniform(1, 4))) * ind;
    }
    EXPECT_EQ(x.expectation(), expectation_by_enumeration(x));
  }
}

TEST(ProbabilitySpace, Validation) {
  EXPECT_THROW(FiniteProbSpace(5, {{{"a", "b"}, {Rational(1, 2), Rational(1, 3)}}}), Error);
  EXPECT_THROW(FiniteProbSpace(5, {{{"a", "b"}, {Rational(1, 5), Rational(4, 5)}}}), Error);
  try {
    (void)FiniteProbSpace::rademacher(2, 3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_prime);
  }
}

TEST(BuildOrthogonal, HaarLevelTwo) {
  const OrthStochMeasure xi = haar_xi();
  ASSERT_EQ(xi.atoms().size(), 9U);
  for (const StochAtom& a : xi.atoms()) EXPECT_EQ(a.c, Rational(1, 3));
  const ClopenSet a = single(ball(1, 0));
  const RandomVariable xa = xi.of(a);
  EXPECT_EQ(expectation_by_enumeration(xa * xa), Cyclotomic(Rational(1, 3)));
  const RandomVariable xb = xi.of(ball(2, 1));
  EXPECT_TRUE(expectation_by_enumeration(xi.of(ball(2, 0)) * xb).is_zero());
}

TEST(BuildOrthogonal, Errors) {
  try {
    (void)build_orthogonal_measure(Measure::haar(Z3, 5), 1);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_square_atom);
  }
  try {
    (void)build_orthogonal_measure(Measure::haar(Z3, 2), 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_prime);
  }
}

TEST(VerifyM, ConstructedPassesAndTamperedFails) {
  const OrthStochMeasure xi = haar_xi();
  const MReport ok = verify_m_conditions(xi, 2);
  EXPECT_TRUE(ok.all());
  EXPECT_TRUE(ok.empty_set);
  EXPECT_EQ(ok.balls, 13U);

  std::vector<StochAtom> atoms = xi.atoms();
  atoms[4].c += 1;
  const MReport bad = verify_m_conditions(OrthStochMeasure(xi.structure(), 2, atoms, xi.space()), 2);
  EXPECT_FALSE(bad.orthogonal);
  EXPECT_TRUE(bad.empty_set);
  EXPECT_FALSE(bad.failures.empty());
}

TEST(StochasticIntegral, Examples) {
  const OrthStochMeasure xi = haar_xi();
  EXPECT_EQ(stochastic_integral(step(0, {4}), xi), Cyclotomic(4) * xi.of(whole_ball(Z3)));
  const ClopenSet a = single(ball(1, 2));
  EXPECT_EQ(stochastic_integral(LocallyConstantFn::indicator(a), xi), xi.of(a));
  const RandomVariable eta = stochastic_integral(step(1, {3, 1, 1}), xi);
  EXPECT_TRUE(expectation_by_enumeration(eta).is_zero());
  // M(eta^2) = int f^2 dh = 9/3 + 1/3 + 1/3.
  EXPECT_EQ(expectation_by_enumeration(eta * eta), Cyclotomic(Rational(11, 3)));
}

TEST(StochasticIntegral, TooFineFunctionRejected) {
  const OrthStochMeasure xi = build_orthogonal_measure(Measure::haar(Z3, 5), 0);
  try {
    (void)stochastic_integral(step(1, {1, 2, 3}), xi);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::refine_required);
  }
}

TEST(Isometry, Examples) {
  const OrthStochMeasure xi = haar_xi();
  const IsometryCheck whole = isometry_identity_check(step(0, {1}), step(0, {1}), xi);
  EXPECT_TRUE(whole.holds);
  EXPECT_EQ(whole.lhs, Cyclotomic(1));
  const IsometryCheck disjoint = isometry_identity_check(LocallyConstantFn::indicator(single(ball(1, 0))),
                                                         LocallyConstantFn::indicator(single(ball(1, 1))), xi);
  EXPECT_TRUE(disjoint.holds);
  EXPECT_TRUE(disjoint.lhs.is_zero());
}

TEST(Weighted, Examples) {
  const OrthStochMeasure xi = haar_xi();
  const WeightedMeasure one = weighted_measure(xi, step(0, {1}));
  for (const Ball& b : all_balls(Z3, 2)) {
    EXPECT_EQ(one.rho.of(b), xi.of(b));
    EXPECT_EQ(one.nu.eval(b), xi.structure().eval(b));
  }
  const LocallyConstantFn g = step(2, {2, 1, 1, 1, 1, 1, 1, 1, 1});
  const WeightedMeasure w = weighted_measure(xi, g);
  for (const Ball& a : ClopenSet::whole(Z3).refine(2)) {
    const RandomVariable ra = w.rho.of(a);
    const Rational ga = g.at(a).scalar_value();
    EXPECT_EQ(expectation_by_enumeration(ra * ra), Cyclotomic(ga * ga * Rational(1, 9)));
    EXPECT_EQ(invert_weighted(w.rho, g, single(a)), xi.of(a));
  }
  const LocallyConstantFn z = step(2, {0, 1, 1, 1, 1, 1, 1, 1, 1});
  try {
    (void)invert_weighted(weighted_measure(xi, z).rho, z, ClopenSet::whole(Z3));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::division_by_zero);
  }
}

TEST(StochasticFubini, ZeroWeight) {
  const OrthStochMeasure xi = haar_xi();
  const ProductFn g = ProductFn::from_atoms(Z3, Z3, 1, 1, ValueShape::scalar(), [](const Ball& a, const Ball& b) {
    return MeasureValue::scalar(a.center() + 2 * b.center());
  });
  const StochasticFubini r = stochastic_fubini(step(0, {0}), g, xi, Measure::haar(Z3, 5));
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.lhs.is_zero());
  EXPECT_TRUE(r.rhs.is_zero());
}

TEST(StochasticSuites, Pass) {
  selftest::Config cfg;
  cfg.random_cases = 40;
  for (const auto& name : {"m-conditions", "isometry", "weighted-roundtrip", "stochastic-fubini", "mutation"}) {
    for (const auto& r : selftest::run_suite(name, cfg)) EXPECT_TRUE(r.pass) << r.name << ": " << r.detail;
  }
}
