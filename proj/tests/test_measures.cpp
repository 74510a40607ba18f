#include <gtest/gtest.h>

#include "pam/selftest.hpp"

using namespace pam;

namespace {

const Ambient Z3{3, 0};

Ball ball(int level, long center, const Ambient& g = Z3) { return make_ball(g, level, Rational(center)); }

LocallyConstantFn step(const Ambient& g, int level, std::vector<Rational> values) {
  std::size_t i = 0;
  const auto atoms = ClopenSet::whole(g).refine(level);
  std::map<Ball, Rational> by_atom;
  for (const Ball& a : atoms) by_atom.emplace(a, values.at(i++));
  return scalar_fn(g, level, [&](const Ball& a) { return by_atom.at(a); });
}

// f = 2 Ch_{3Z_3}.
Measure two_on_3z3(long p) { return Measure::density(p, step(Z3, 1, {2, 0, 0})); }

// Largest |mu(S)| over all unions S of the given disjoint balls.
UltraNorm subset_sup(const Measure& mu, const std::vector<Ball>& cells) {
  UltraNorm best = UltraNorm::zero(mu.value_prime());
  const std::size_t n = cells.size();
  std::vector<Rational> mass;
  for (const Ball& c : cells) mass.push_back(mu.eval(c).scalar_value());
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1U) s += mass[i];
    }
    best = max(best, padic_valuation(s, mu.value_prime()));
  }
  return best;
}

}  // namespace

TEST(MeasureEval, Examples) {
  const Measure h = Measure::haar(Z3, 5);
  EXPECT_EQ(h.eval(whole_ball(Z3)).scalar_value(), 1);
  for (const Ball& b : ClopenSet::whole(Z3).refine(2)) EXPECT_EQ(h.eval(b).scalar_value(), Rational(1, 9));
  EXPECT_EQ(two_on_3z3(5).eval(whole_ball(Z3)).scalar_value(), Rational(2, 3));
}

TEST(MeasureEval, HaarNeedsCoprimePrimes) {
  try {
    (void)Measure::haar(Z3, 3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
}

TEST(MeasureEval, DomainMismatchRejected) {
  const Measure h = Measure::haar(Z3, 5);
  EXPECT_THROW((void)h.eval(make_ball(Ambient{5, 0}, 0, Rational(0))), Error);
}

TEST(BallNorm, Examples) {
  EXPECT_EQ(Measure::haar(Z3, 2).ball_norm(whole_ball(Z3)), UltraNorm::unit(2));
  EXPECT_EQ(two_on_3z3(2).ball_norm(whole_ball(Z3)).value(), Rational(1, 2));
  const Measure a = Measure::atomic(Z3, 2, ValueShape::scalar(), {{Rational(0), MeasureValue::scalar(4)}});
  EXPECT_EQ(a.ball_norm(whole_ball(Z3)).value(), Rational(1, 4));
}

TEST(BallNorm, MatchesSubsetEnumeration) {
  selftest::Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    const long p = i % 2 == 0 ? 2 : 5;
    const Measure mu = i % 3 == 0 ? selftest::random_atomic(rng, Z3, p, 4, 2)
                                  : Measure::sum({selftest::random_density(rng, Z3, 1, p), selftest::random_atomic(rng, Z3, p, 2, 2)});
    // Level-3 cells separate the atoms (depth 2) and lie below the density level.
    for (const Ball& a : all_balls(Z3, 1)) {
      const auto cells = single(a).refine(a.level + 2);
      if (cells.size() > 12) continue;
      EXPECT_EQ(mu.ball_norm(a), subset_sup(mu, cells)) << describe(a);
    }
  }
}

TEST(NMu, Examples) {
  const Measure h = Measure::haar(Z3, 2);
  for (long x : {0L, 1L, 5L, 26L}) EXPECT_EQ(h.n_mu(Rational(x)), UltraNorm::unit(2));
  const Measure a = Measure::atomic(Z3, 5, ValueShape::scalar(), {{Rational(4), MeasureValue::scalar(Rational(25, 2))}});
  EXPECT_EQ(a.n_mu(Rational(4)).exponent, 2L);
  EXPECT_TRUE(a.n_mu(Rational(1)).is_zero());
  const Measure d = two_on_3z3(2);
  EXPECT_EQ(d.n_mu(Rational(0)).value(), Rational(1, 2));
  EXPECT_TRUE(d.n_mu(Rational(1)).is_zero());
}

TEST(NMu, IsTheLimitOfTheBallChain) {
  const Measure mu = Measure::sum({two_on_3z3(2), Measure::atomic(Z3, 2, ValueShape::scalar(), {{Rational(9), MeasureValue::scalar(8)}})});
  for (long x : {0L, 9L, 3L, 1L}) {
    const auto chain = mu.n_mu_chain(Rational(x), 6);
    EXPECT_EQ(chain.back(), mu.n_mu(Rational(x)));
    for (std::size_t k = 1; k < chain.size(); ++k) EXPECT_FALSE(chain[k - 1] < chain[k]);
  }
}

TEST(Integrate, Examples) {
  const Measure h = Measure::haar(Z3, 5);
  const ClopenSet a = single(ball(1, 2));
  EXPECT_EQ(integrate(LocallyConstantFn::indicator(a), h), h.eval(a));
  EXPECT_EQ(integrate(step(Z3, 0, {1}), h).scalar_value(), 1);
  EXPECT_EQ(integrate(step(Z3, 1, {3, 1, 1}), h).scalar_value(), Rational(5, 3));
}

TEST(Integrate, ShapeMismatchRejected) {
  const Measure h = Measure::haar(Z3, 5, MeasureValue::vector({1, 2}));
  const LocallyConstantFn f = LocallyConstantFn::constant(ClopenSet::whole(Z3), MeasureValue::vector({1, 1}));
  EXPECT_THROW((void)integrate(f, h), Error);
}

TEST(LqNorm, Examples) {
  const Measure h = Measure::haar(Z3, 2);
  for (int q : {1, 2, 3}) {
    const RootNorm n = lq_norm(step(Z3, 0, {12}), h, q);
    EXPECT_EQ(n.exponent, Rational(2)) << q;
  }
  EXPECT_TRUE(lq_norm(step(Z3, 1, {0, 0, 0}), h, 2).is_zero());
  // sup |2|^2 N = 1/4, so the norm is (1/4)^(1/2) = 2^-1.
  EXPECT_EQ(lq_norm(step(Z3, 1, {2, 0, 0}), h, 2).exponent, Rational(1));
  // A fractional exponent: |2|^1 |2|^(0) over a mass-2 atom with q = 2.
  const Measure a = Measure::atomic(Z3, 2, ValueShape::scalar(), {{Rational(0), MeasureValue::scalar(2)}});
  EXPECT_EQ(lq_norm(step(Z3, 0, {1}), a, 2).exponent, Rational(1, 2));
}

TEST(Integrability, Examples) {
  const Measure h = Measure::haar(Z3, 5);
  const IntegrabilityReport r = integrability_report(step(Z3, 1, {1, 5, 7}), h);
  EXPECT_TRUE(r.integrable);
  for (const auto& t : r.thresholds) EXPECT_EQ(t.delta, UltraNorm::unit(5));

  const Measure a = Measure::atomic(Z3, 5, ValueShape::scalar(), {{Rational(0), MeasureValue::scalar(5)}});
  const IntegrabilityReport ra = integrability_report(step(Z3, 0, {1}), a);
  EXPECT_TRUE(ra.integrable);
  ASSERT_FALSE(ra.thresholds.empty());
  EXPECT_EQ(ra.thresholds.front().points, std::vector<Rational>{0});
  EXPECT_EQ(ra.thresholds.front().delta.exponent, 1L);

  const IntegrabilityReport rz = integrability_report(step(Z3, 0, {0}), h);
  EXPECT_TRUE(rz.integrable);
  for (const auto& t : rz.thresholds) {
    EXPECT_TRUE(t.balls.empty());
    EXPECT_TRUE(t.points.empty());
  }
}

TEST(ProductMeasure, Examples) {
  const Measure h = Measure::haar(Z3, 2);
  const ProductMeasure hh(h, h);
  EXPECT_EQ(hh.eval(ball(1, 1), ball(1, 2)).scalar_value(), Rational(1, 9));
  for (long x : {0L, 1L, 4L}) {
    const NProductCheck c = product_n_identity_check(hh, Rational(x), Rational(2));
    EXPECT_TRUE(c.holds);
    EXPECT_EQ(c.product, UltraNorm::unit(2));
  }
  const ProductMeasure dh(two_on_3z3(2), h);
  for (long y : {0L, 1L, 7L}) {
    const NProductCheck c = product_n_identity_check(dh, Rational(0), Rational(y));
    EXPECT_TRUE(c.holds);
    EXPECT_EQ(c.product.value(), Rational(1, 2));
  }
}

TEST(ProductMeasure, OverlappingRectanglesRejected) {
  const ProductMeasure hh(Measure::haar(Z3, 2), Measure::haar(Z3, 2));
  EXPECT_THROW((void)hh.eval({{ball(0, 0), ball(1, 0)}, {ball(1, 0), ball(1, 0)}}), Error);
  EXPECT_EQ(hh.eval({{ball(1, 0), ball(1, 0)}, {ball(1, 1), ball(1, 0)}}).scalar_value(), Rational(2, 9));
}

TEST(Fubini, Examples) {
  const Measure h = Measure::haar(Z3, 5);
  const ProductMeasure hh(h, h);
  const ProductFn ind = ProductFn::from_atoms(Z3, Z3, 1, 1, ValueShape::scalar(), [](const Ball& a, const Ball& b) {
    return MeasureValue::scalar(a.center() == 1 && b.center() == 2 ? 1 : 0);
  });
  const FubiniResult r = fubini_check(ind, hh);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.product.scalar_value(), Rational(1, 9));
  ASSERT_TRUE(r.reversed);
  EXPECT_EQ(r.reversed->scalar_value(), Rational(1, 9));

  const ProductFn zero = ProductFn::from_atoms(Z3, Z3, 0, 0, ValueShape::scalar(),
                                               [](const Ball&, const Ball&) { return MeasureValue::scalar(0); });
  const FubiniResult z = fubini_check(zero, hh);
  EXPECT_TRUE(z.holds);
  EXPECT_TRUE(z.product.is_zero());

  // Nine-atom double sum, computed directly.
  Rational direct = 0;
  const ProductFn f = ProductFn::from_atoms(Z3, Z3, 1, 1, ValueShape::scalar(), [&](const Ball& a, const Ball& b) {
    const Rational v = a.center() * 7 - b.center() * b.center() + 1;
    direct += v / 9;
    return MeasureValue::scalar(v);
  });
  const FubiniResult rf = fubini_check(f, hh);
  EXPECT_TRUE(rf.holds);
  EXPECT_EQ(rf.product.scalar_value(), direct);
}

TEST(Pushforward, Examples) {
  const Measure h = Measure::haar(Z3, 5);
  EXPECT_TRUE(same_measure(h.pushforward_values(LinearValueMap::identity(ValueShape::scalar())), h));
  EXPECT_EQ(h.pushforward_values(LinearValueMap::scaling(2, ValueShape::scalar())).eval(whole_ball(Z3)).scalar_value(), 2);
  const Measure diag = Measure::haar(Z3, 5, MeasureValue::matrix(2, {1, 0, 0, 2}));
  const Measure tr = diag.pushforward_values(LinearValueMap::trace(2));
  for (const Ball& b : all_balls(Z3, 2)) EXPECT_EQ(tr.eval(b).scalar_value(), 3 * h.eval(b).scalar_value());
}

TEST(Convolve, Examples) {
  const Measure h = Measure::haar(Z3, 5);
  const Measure hh = convolve(h, h);
  for (const Ball& b : all_balls(Z3, 3)) EXPECT_EQ(hh.eval(b), h.eval(b));

  const Measure delta0 = Measure::atomic(Z3, 5, ValueShape::scalar(), {{Rational(0), MeasureValue::scalar(1)}});
  selftest::Rng rng(2);
  const Measure mu = Measure::sum({selftest::random_density(rng, Z3, 2, 5), selftest::random_atomic(rng, Z3, 5, 2)});
  const Measure dm = convolve(delta0, mu);
  for (const Ball& b : all_balls(Z3, 3)) EXPECT_EQ(dm.eval(b), mu.eval(b));

  const Measure da = Measure::atomic(Z3, 5, ValueShape::scalar(), {{Rational(4), MeasureValue::scalar(1)}});
  const Measure db = Measure::atomic(Z3, 5, ValueShape::scalar(), {{Rational(25), MeasureValue::scalar(1)}});
  const Measure dab = convolve(da, db);
  ASSERT_EQ(dab.decomposition().points.size(), 1U);
  EXPECT_EQ(dab.decomposition().points.begin()->first, Rational(29));
}

TEST(Convolve, MatchesDirectDoubleSum) {
  // (mu * nu)(B) = sum over level-D cells a, b of mu(a) nu(b) [a + b in B].
  selftest::Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    const Measure mu = selftest::random_density(rng, Z3, 1, 5);
    const Measure nu = selftest::random_density(rng, Z3, 2, 5);
    const Measure c = convolve(mu, nu);
    const auto cells = ClopenSet::whole(Z3).refine(2);
    for (const Ball& b : all_balls(Z3, 2)) {
      Rational direct = 0;
      for (const Ball& x : cells) {
        for (const Ball& y : cells) {
          if (ball_contains(b, x.center() + y.center())) {
            direct += mu.eval(x).scalar_value() * nu.eval(y).scalar_value();
          }
        }
      }
      EXPECT_EQ(c.eval(b).scalar_value(), direct) << describe(b);
    }
  }
}

TEST(TotalNorm, Examples) {
  EXPECT_EQ(Measure::haar(Z3, 2).total_norm(), UltraNorm::unit(2));
  EXPECT_EQ(Measure::haar(Z3, 2, MeasureValue::scalar(4)).total_norm().value(), Rational(1, 4));
  const Measure a = Measure::atomic(Z3, 2, ValueShape::scalar(),
                                    {{Rational(0), MeasureValue::scalar(1)}, {Rational(1), MeasureValue::scalar(2)}});
  EXPECT_EQ(a.total_norm(), UltraNorm::unit(2));
}

TEST(MeasureSuites, Pass) {
  selftest::Config cfg;
  cfg.random_cases = 50;
  for (const auto& name : {"measures", "n-characterization"}) {
    for (const auto& r : selftest::run_suite(name, cfg)) EXPECT_TRUE(r.pass) << r.name << ": " << r.detail;
  }
}
