#include <gtest/gtest.h>

#include "pam/selftest.hpp"

using namespace pam;

namespace {

FinVector vec(long p, std::vector<long> xs) {
  FinVector::Entries e;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] != 0) e[i] = Rational(xs[i]);
  }
  return FinVector(p, e);
}

}  // namespace

TEST(Pairing, Examples) {
  EXPECT_EQ(pairing(vec(5, {1, 2}), vec(5, {3, 4})), 11);
  EXPECT_EQ(pairing(vec(5, {1, 0, 0}), vec(5, {0, 0, 7})), 0);
  EXPECT_THROW((void)pairing(vec(5, {1}), vec(3, {1})), Error);
}

TEST(RankOne, EntriesAreProducts) {
  const FinMatrix m = rank_one(vec(5, {1, 2}), vec(5, {3, 4}));
  EXPECT_EQ(m.at(0, 0), 3);
  EXPECT_EQ(m.at(0, 1), 4);
  EXPECT_EQ(m.at(1, 0), 6);
  EXPECT_EQ(m.at(1, 1), 8);
  EXPECT_EQ(trace(m), 11);
}

TEST(Trace, SumOfDiagonal) {
  const FinMatrix m(3, {{{0, 0}, Rational(1, 3)}, {{0, 5}, Rational(9)}, {{5, 5}, Rational(2)}});
  EXPECT_EQ(trace(m), Rational(7, 3));
  EXPECT_EQ(op_norm(m).exponent, -1L);
  EXPECT_EQ(transpose(m).at(5, 0), 9);
}

TEST(Trace, BoundedByOperatorNorm) {
  selftest::Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const FinMatrix m = selftest::random_matrix(rng, 3);
    // Oracle: brute-force max over the dense 5x5 block.
    UltraNorm best = UltraNorm::zero(3);
    for (std::uint64_t a = 0; a < 5; ++a) {
      for (std::uint64_t b = 0; b < 5; ++b) best = max(best, padic_valuation(m.at(a, b), 3));
    }
    EXPECT_EQ(op_norm(m), best);
    EXPECT_FALSE(best < padic_valuation(trace(m), 3));
  }
}

TEST(TraceMeasure, DiagonalHaar) {
  const Ambient g{3, 0};
  const Measure diag = Measure::haar(g, 5, MeasureValue::matrix(2, {1, 0, 0, 2}));
  const Measure t = trace_measure(diag);
  EXPECT_EQ(t.eval(whole_ball(g)).scalar_value(), 3);
  EXPECT_THROW((void)trace_measure(Measure::haar(g, 5)), Error);
}

TEST(TraceSuite, Passes) {
  selftest::Config cfg;
  cfg.random_cases = 100;
  for (const auto& r : selftest::run_suite("trace", cfg)) EXPECT_TRUE(r.pass) << r.name << ": " << r.detail;
}
