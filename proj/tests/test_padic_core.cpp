#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "pam/selftest.hpp"

using namespace pam;

namespace {

// Numerical value of a cyclotomic element, as an oracle independent of the
// exact reduction.
std::complex<double> numeric(const Cyclotomic& c) {
  std::complex<double> out = 0;
  const double order = c.level() == 0 ? 1.0 : static_cast<double>(pow_u64(c.prime(), c.level()));
  for (const auto& [k, q] : c.coefficients()) {
    const double angle = 2 * std::numbers::pi * static_cast<double>(k) / order;
    out += q.get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return out;
}

// Fractional part from the base-r digits of the numerator.
Rational frac_by_digits(const Rational& x, long r) {
  Rational shifted = x;
  long k = 0;
  while (shifted.get_den() != 1) {
    shifted *= r;
    ++k;
  }
  const Integer d(static_cast<unsigned long>(pow_u64(r, k)));
  Integer n = shifted.get_num() % d;
  if (n < 0) n += d;
  Rational out = 0;
  for (long j = 0; j < k; ++j) {
    const Integer digit = n % r;
    n /= r;
    out += Rational(digit) * rpow(r, j - k);
  }
  return out;
}

}  // namespace

TEST(PadicValuation, Examples) {
  EXPECT_EQ(padic_valuation(Rational(2), 2), (UltraNorm{2, 1L}));
  EXPECT_EQ(padic_valuation(Rational(2), 2).value(), Rational(1, 2));
  EXPECT_TRUE(padic_valuation(Rational(0), 5).is_zero());
  const UltraNorm n = padic_valuation(Rational(9, 4), 3);
  EXPECT_EQ(n.exponent, 2L);
  EXPECT_EQ(n.value(), Rational(1, 9));
}

TEST(PadicValuation, RejectsNonPrime) {
  try {
    (void)padic_valuation(Rational(3), 6);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
}

TEST(PadicValuation, OrderingOfNorms) {
  const UltraNorm zero = UltraNorm::zero(3);
  const UltraNorm third = padic_valuation(Rational(3), 3);
  const UltraNorm one = UltraNorm::unit(3);
  EXPECT_TRUE(zero < third);
  EXPECT_TRUE(third < one);
  EXPECT_EQ(max(third, one), one);
}

TEST(FracPart, Examples) {
  EXPECT_EQ(frac_part(Rational(5), 3).value, 0);
  EXPECT_EQ(frac_part(Rational(1, 3), 3).value, Rational(1, 3));
  EXPECT_EQ(frac_part(Rational(7, 4), 2).value, Rational(3, 4));
}

TEST(FracPart, RejectsForeignDenominator) {
  try {
    (void)frac_part(Rational(1, 5), 3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(FracPart, MatchesDigitExpansion) {
  selftest::Rng rng(11);
  for (long r : {2L, 3L, 5L, 7L}) {
    for (int i = 0; i < 400; ++i) {
      const Rational x = Rational(rng.uniform(-5000, 5000)) * rpow(r, -rng.uniform(0, 5));
      const Rational f = frac_part(x, r).value;
      EXPECT_EQ(f, frac_by_digits(x, r)) << to_string(x);
      EXPECT_GE(f, 0);
      EXPECT_LT(f, 1);
    }
  }
}

TEST(Cyclotomic, Examples) {
  const Cyclotomic z = Cyclotomic::zeta_power(3, 1, 1);
  const Cyclotomic z2 = Cyclotomic::zeta_power(3, 1, 2);
  EXPECT_EQ(z * z2, Cyclotomic(1));
  EXPECT_EQ(Cyclotomic(1) * z, z);
  EXPECT_EQ((Cyclotomic(1) + z) * (Cyclotomic(1) + z2), Cyclotomic(1));
  EXPECT_EQ(root_of_unity(frac_part(Rational(0), 3)), Cyclotomic(1));
  EXPECT_EQ(root_of_unity(frac_part(Rational(1, 3), 3)), z);
  EXPECT_EQ(root_of_unity(frac_part(Rational(1, 2), 2)), Cyclotomic(-1));
}

TEST(Cyclotomic, MismatchedPrimesRejected) {
  const Cyclotomic a = Cyclotomic::zeta_power(3, 1, 1);
  const Cyclotomic b = Cyclotomic::zeta_power(5, 1, 1);
  EXPECT_THROW((void)(a * b), Error);
}

TEST(Cyclotomic, AgreesWithComplexEvaluation) {
  selftest::Rng rng(5);
  for (long r : {2L, 3L, 5L}) {
    for (int i = 0; i < 200; ++i) {
      auto draw = [&] {
        const int level = static_cast<int>(rng.uniform(1, r == 5 ? 2 : 3));
        const auto order = static_cast<long>(pow_u64(r, level));
        Cyclotomic::Coeffs c;
        for (int k = 0; k < 3; ++k) c[static_cast<std::uint64_t>(rng.uniform(0, order - 1))] += Rational(rng.uniform(-4, 4), rng.uniform(1, 3));
        return Cyclotomic::from_coeffs(r, level, c);
      };
      const Cyclotomic a = draw();
      const Cyclotomic b = draw();
      EXPECT_LT(std::abs(numeric(a * b) - numeric(a) * numeric(b)), 1e-9);
      EXPECT_LT(std::abs(numeric(a + b) - (numeric(a) + numeric(b))), 1e-9);
      if (!a.is_zero()) {
        EXPECT_LT(std::abs(numeric(a.inverse()) * numeric(a) - 1.0), 1e-9);
      }
    }
  }
}

TEST(Cyclotomic, EqualityIsNumericEquality) {
  // 1 + zeta_9^3 + zeta_9^6 = 0 is a relation the exact form must detect.
  const Cyclotomic s = Cyclotomic(1) + Cyclotomic::zeta_power(3, 2, 3) + Cyclotomic::zeta_power(3, 2, 6);
  EXPECT_TRUE(s.is_zero());
  EXPECT_LT(std::abs(numeric(Cyclotomic::zeta_power(3, 2, 3) + Cyclotomic::zeta_power(3, 2, 6)) + 1.0), 1e-12);
}

TEST(PadicCoreSuite, UltrametricAndSubstrateSuitesPass) {
  selftest::Config cfg;
  cfg.random_cases = 100;
  for (const auto& name : {"ultrametric", "substrate"}) {
    for (const auto& r : selftest::run_suite(name, cfg)) EXPECT_TRUE(r.pass) << r.name << ": " << r.detail;
  }
}
