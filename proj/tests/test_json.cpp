#include <gtest/gtest.h>

#include "pam/selftest.hpp"

using namespace pam;
using io::Json;

namespace {

// parse(serialize(x)) serializes to the same text.
template <typename T, typename Parse>
void expect_roundtrip(const T& x, Parse parse) {
  const Json j = io::to_json(x);
  const Json again = io::to_json(parse(Json::parse(j.dump())));
  EXPECT_EQ(j.dump(), again.dump());
}

}  // namespace

TEST(Json, CanonicalForms) {
  EXPECT_EQ(io::to_json(ratio(6, 4)), "3/2");
  EXPECT_EQ(io::to_json(Rational(-5)), "-5");
  EXPECT_EQ(io::to_json(padic_valuation(Rational(9, 4), 3)).dump(), R"({"base":3,"exp":2})");
  EXPECT_EQ(io::to_json(UltraNorm::zero(5)).dump(), R"({"base":5,"exp":null})");
  EXPECT_EQ(io::to_json(make_ball(Ambient{3, 0}, 1, Rational(2))).dump(), R"({"center":"2","level":1,"m0":0,"r":3})");
  EXPECT_EQ(io::to_json(Cyclotomic::zeta_power(3, 1, 1)).dump(), R"({"coeffs":{"1":"1"},"level":1,"r":3})");
}

TEST(Json, MalformedInputsAreSchemaErrors) {
  for (const char* text : {R"({"kind":"haar","r":3,"m0":0})", R"({"kind":"cube","r":3,"m0":0,"p":5})",
                           R"({"kind":"haar","r":"three","m0":0,"p":5})"}) {
    try {
      (void)io::measure_from(Json::parse(text));
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::schema) << text;
    }
  }
  EXPECT_THROW((void)io::rational_from(Json("1/0")), Error);
  EXPECT_THROW((void)io::rational_from(Json("2/x")), Error);
}

TEST(Json, RoundTripProperty) {
  selftest::Rng rng(99);
  for (int i = 0; i < 60; ++i) {
    const long r = i % 3 == 0 ? 2 : (i % 3 == 1 ? 3 : 5);
    const long p = r == 5 ? 3 : 5;
    const Ambient g{r, static_cast<int>(rng.uniform(0, 1))};

    const Rational q = selftest::random_rational(rng, p);
    EXPECT_EQ(io::rational_from(io::to_json(q)), q);
    EXPECT_EQ(io::norm_from(io::to_json(padic_valuation(q, p))), padic_valuation(q, p));

    Cyclotomic::Coeffs cc;
    for (int k = 0; k < 3; ++k) cc[static_cast<std::uint64_t>(rng.uniform(0, static_cast<long>(r * r) - 1))] += selftest::random_rational(rng, p);
    const Cyclotomic c = Cyclotomic::from_coeffs(r, 2, cc);
    EXPECT_EQ(io::cyclotomic_from(io::to_json(c)), c);

    const auto balls = all_balls(g, 2);
    std::vector<Ball> raw;
    for (int k = 0; k < 3; ++k) raw.push_back(balls[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(balls.size()) - 1))]);
    const ClopenSet s = ClopenSet::canonicalize(g, raw);
    EXPECT_EQ(io::set_from(io::to_json(s)), s);
    EXPECT_EQ(io::ball_from(io::to_json(raw[0])), raw[0]);

    const LocallyConstantFn f = selftest::random_fn(rng, g, 2, p);
    expect_roundtrip(f, [](const Json& j) { return io::fn_from(j); });

    const Measure m = Measure::sum({selftest::random_density(rng, g, 1, p), selftest::random_atomic(rng, g, p, 2),
                                    Measure::haar(g, p, MeasureValue::scalar(selftest::random_nonzero(rng, p)))});
    expect_roundtrip(m, [](const Json& j) { return io::measure_from(j); });

    const ProductFn pf = selftest::random_product_fn(rng, g, g, 1, 1, p);
    expect_roundtrip(pf, [](const Json& j) { return io::product_fn_from(j); });

    expect_roundtrip(selftest::random_matrix(rng, p), [](const Json& j) { return io::matrix_from(j); });
    expect_roundtrip(selftest::random_vector(rng, p), [](const Json& j) { return io::vector_from(j); });
  }
}

TEST(Json, MatrixMeasureRoundTrip) {
  const Measure m = Measure::haar(Ambient{3, 0}, 5, MeasureValue::matrix(2, {1, Rational(1, 5), 0, 2}));
  expect_roundtrip(m, [](const Json& j) { return io::measure_from(j); });
}

TEST(Json, StochasticAndSpectralRoundTrip) {
  const OrthStochMeasure xi = build_orthogonal_measure(Measure::haar(Ambient{3, 0}, 5), 2);
  expect_roundtrip(xi, [](const Json& j) { return io::xi_from(j); });
  const OrthStochMeasure back = io::xi_from(io::to_json(xi));
  EXPECT_EQ(back.of(whole_ball(Ambient{3, 0})), xi.of(whole_ball(Ambient{3, 0})));

  const SpectralSpec spec{3, 5, {Rational(1), Rational(1, 3)}, {Rational(1), Rational(4)}};
  expect_roundtrip(spec, [](const Json& j) { return io::spec_from(j); });
}

TEST(Selftest, ReportIsDeterministic) {
  selftest::Config cfg;
  cfg.max_level = 1;
  cfg.random_cases = 20;
  cfg.seed = 42;
  const std::string a = selftest::report_json(cfg, selftest::run_all(cfg)).dump();
  const std::string b = selftest::report_json(cfg, selftest::run_all(cfg)).dump();
  EXPECT_EQ(a, b);
  cfg.seed = 43;
  EXPECT_NE(selftest::report_json(cfg, selftest::run_all(cfg)).dump(), a);
}

TEST(Selftest, ConfigValidation) {
  EXPECT_THROW((void)selftest::config_from(Json::parse(R"({"primes":[[3,3]]})")), Error);
  EXPECT_THROW((void)selftest::config_from(Json::parse(R"({"primes":[[4,5]]})")), Error);
  EXPECT_THROW((void)selftest::config_from(Json::parse(R"({"maxLevel":9})")), Error);
  const selftest::Config c = selftest::config_from(Json::parse(R"({"primes":[[7,2]],"seed":5})"));
  EXPECT_EQ(c.primes.size(), 1U);
  EXPECT_EQ(c.seed, 5U);
  EXPECT_EQ(c.max_level, 2);
}

TEST(Selftest, LowerLevelRunsFewerCases) {
  selftest::Config lo;
  lo.max_level = 1;
  selftest::Config hi;
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
  for (const auto& r : selftest::run_suite("n-characterization", lo)) {
    EXPECT_TRUE(r.pass);
    n_lo += r.cases;
  }
  for (const auto& r : selftest::run_suite("n-characterization", hi)) n_hi += r.cases;
  EXPECT_LT(n_lo, n_hi);
}
