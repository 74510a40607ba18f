#pragma once

/**
 * Seeded property suites over every module. Each suite draws from its own
 * generator (seed mixed with the suite number), so suites can run alone or in
 * any order and still give identical results.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pam/json_io.hpp"

namespace pam::selftest {

struct Config {
  std::vector<std::pair<long, long>> primes{{3, 5}, {5, 3}, {2, 5}};
  int max_level = 2;
  int random_cases = 200;
  std::uint64_t seed = 0;
};

struct CheckResult {
  std::string suite;
  std::string name;
  std::string anchor;
  bool pass = true;
  std::size_t cases = 0;
  std::string detail;
};

/// mt19937_64 with explicit modulo mapping, so draws do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform-ish integer in [lo, hi].
  long uniform(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(next() % span);
  }

  bool chance(int percent) { return uniform(0, 99) < percent; }

 private:
  std::mt19937_64 gen_;
};

inline Rng suite_rng(const Config& cfg, int suite) {
  return Rng(cfg.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(suite) * 0xBF58476D1CE4E5B9ULL + 1);
}

// ---------------------------------------------------------------------------
// Random objects.

inline Rational random_rational(Rng& rng, long p, int zero_percent = 10) {
  if (rng.chance(zero_percent)) return Rational(0);
  Rational q(rng.uniform(1, 12) * (rng.chance(50) ? -1 : 1), rng.uniform(1, 12));
  q.canonicalize();
  return q * rpow(p, rng.uniform(-2, 2));
}

inline Rational random_nonzero(Rng& rng, long p) { return random_rational(rng, p, 0); }

inline LocallyConstantFn random_fn(Rng& rng, const Ambient& g, int level, long p, int zero_percent = 10) {
  return scalar_fn(g, level, [&](const Ball&) { return random_rational(rng, p, zero_percent); });
}

inline LocallyConstantFn random_nowhere_zero_fn(Rng& rng, const Ambient& g, int level, long p) {
  return scalar_fn(g, level, [&](const Ball&) { return random_nonzero(rng, p); });
}

/// A point r^(-m0) k of G with 0 <= k < r^(m0 + depth).
inline Rational random_point(Rng& rng, const Ambient& g, int depth) {
  const auto n = static_cast<long>(pow_u64(g.r, g.m0 + depth));
  Rational x(rng.uniform(0, n - 1));
  return x * rpow(g.r, -g.m0);
}

inline Measure random_density(Rng& rng, const Ambient& g, int level, long p) {
  return Measure::density(p, random_fn(rng, g, level, p, 25));
}

inline Measure random_atomic(Rng& rng, const Ambient& g, long p, int count, int depth = 3) {
  Measure::Atoms atoms;
  const auto room = pow_u64(g.r, g.m0 + depth);
  if (static_cast<std::uint64_t>(count) > room) count = static_cast<int>(room);
  while (static_cast<int>(atoms.size()) < count) {
    atoms.emplace(random_point(rng, g, depth), MeasureValue::scalar(random_nonzero(rng, p)));
  }
  return Measure::atomic(g, p, ValueShape::scalar(), std::move(atoms));
}

/// Density whose level-L atom masses are nonzero rational squares.
inline Measure square_density(Rng& rng, const Ambient& g, int level, long p) {
  const Rational scale = rpow(g.r, level + g.m0);
  return Measure::density(p, scalar_fn(g, level, [&](const Ball&) {
                            const Rational q = random_nonzero(rng, p);
                            return scale * q * q;
                          }));
}

inline bool le(const UltraNorm& a, const UltraNorm& b) { return !(b < a); }

inline std::string pair_label(long r, long p) { return "r=" + std::to_string(r) + ",p=" + std::to_string(p); }

/// Collects failures for one check; the detail keeps the first few.
class Tally {
 public:
  Tally(std::string suite, std::string name, std::string anchor) {
    res_.suite = std::move(suite);
    res_.name = std::move(name);
    res_.anchor = std::move(anchor);
  }

  void expect(bool ok, const std::function<std::string()>& what) {
    ++res_.cases;
    if (ok) return;
    if (res_.pass) res_.detail = what();
    res_.pass = false;
  }

  void skip(const std::string& why) { res_.detail = "skipped: " + why; }

  CheckResult done() { return res_; }

 private:
  CheckResult res_;
};

using Results = std::vector<CheckResult>;

inline int even_level(int max_level) { return std::max(0, max_level - (max_level % 2)); }

// ---------------------------------------------------------------------------
// 1. Ultrametric axioms.

inline Results suite_ultrametric(const Config& cfg) {
  Rng rng = suite_rng(cfg, 1);
  Results out;
  const int n = std::max(1000, cfg.random_cases * 5);
  for (long p : {2L, 3L, 5L}) {
    Tally mult("ultrametric", "multiplicativity p=" + std::to_string(p), "|xy| = |x||y|");
    Tally tri("ultrametric", "strong triangle p=" + std::to_string(p), "|x+y| <= max(|x|,|y|), equality when unequal");
    Tally frac("ultrametric", "fractional part p=" + std::to_string(p), "frac(x) + frac(-x) in {0,1}");
    for (int i = 0; i < n; ++i) {
      const Rational x = random_rational(rng, p);
      const Rational y = random_rational(rng, p);
      const UltraNorm nx = padic_valuation(x, p);
      const UltraNorm ny = padic_valuation(y, p);
      mult.expect(padic_valuation(x * y, p) == nx * ny, [&] { return "x=" + to_string(x) + " y=" + to_string(y); });
      const UltraNorm ns = padic_valuation(x + y, p);
      const bool ok = le(ns, max(nx, ny)) && (nx == ny || ns == max(nx, ny));
      tri.expect(ok, [&] { return "x=" + to_string(x) + " y=" + to_string(y); });
      const Rational z = Rational(rng.uniform(-200, 200)) * rpow(p, -rng.uniform(0, 4));
      const Rational s = frac_part(z, p).value + frac_part(-z, p).value;
      frac.expect(s == 0 || s == 1, [&] { return "x=" + to_string(z); });
    }
    out.push_back(mult.done());
    out.push_back(tri.done());
    out.push_back(frac.done());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2. N_mu characterizes ||A||_mu.

namespace detail {

/// Largest u(mu(B)) over balls B inside each ball, found from mu(B) itself on
/// every ball down to `deepest`.
inline std::map<Ball, UltraNorm> brute_ball_sup(const Measure& mu, int deepest) {
  std::map<Ball, UltraNorm> sup;
  const Ambient& g = mu.ambient();
  const long p = mu.value_prime();
  for (int lvl = deepest; lvl >= -g.m0; --lvl) {
    const std::uint64_t count = pow_u64(g.r, lvl + g.m0);
    for (std::uint64_t i = 0; i < count; ++i) {
      const Ball b{g, lvl, i};
      UltraNorm best = mu.eval(b).norm(p);
      if (lvl < deepest) {
        for (const Ball& c : b.children()) best = max(best, sup.at(c));
      }
      sup.emplace(b, best);
    }
  }
  return sup;
}

/// sup over x in each ball of N_mu(x), from N_mu at one point-free
/// representative per working atom and at every point mass.
inline std::map<Ball, UltraNorm> n_sup(const Measure& mu, int working) {
  const Ambient& g = mu.ambient();
  const Decomposition& d = mu.decomposition();
  std::map<Ball, UltraNorm> sup;
  for (const Ball& b : ClopenSet::whole(g).refine(working)) {
    UltraNorm best = UltraNorm::zero(mu.value_prime());
    for (const Ball& c : b.children()) {
      bool empty = true;
      for (const auto& [x, v] : d.points) empty = empty && !ball_contains(c, x);
      if (empty) {
        best = max(best, mu.n_mu(c.center()));
        break;
      }
    }
    for (const auto& [x, v] : d.points) {
      if (ball_contains(b, x)) best = max(best, mu.n_mu(x));
    }
    sup.emplace(b, best);
  }
  for (int lvl = working - 1; lvl >= -g.m0; --lvl) {
    const std::uint64_t count = pow_u64(g.r, lvl + g.m0);
    for (std::uint64_t i = 0; i < count; ++i) {
      const Ball b{g, lvl, i};
      UltraNorm best = UltraNorm::zero(mu.value_prime());
      for (const Ball& c : b.children()) best = max(best, sup.at(c));
      sup.emplace(b, best);
    }
  }
  return sup;
}

}  // namespace detail

inline CheckResult check_n_characterization(const std::string& label, const Measure& mu, int max_level) {
  Tally t("n-characterization", label, "||Ch_A||_{N_mu} = ||A||_mu");
  int working = std::max(max_level, mu.decomposition().level);
  for (const auto& [x, v] : mu.decomposition().points) working = std::max(working, mu.stationary_level(x));
  const auto by_mass = detail::brute_ball_sup(mu, working + 1);
  const auto by_n = detail::n_sup(mu, working);
  for (const Ball& a : all_balls(mu.ambient(), max_level)) {
    const UltraNorm lhs = by_n.at(a);
    const UltraNorm rhs = by_mass.at(a);
    t.expect(lhs == rhs && rhs == mu.ball_norm(a), [&] { return describe(a); });
  }
  return t.done();
}

inline Results suite_n_characterization(const Config& cfg) {
  Rng rng = suite_rng(cfg, 2);
  Results out;
  const int top = cfg.max_level + 1;
  for (const auto& [r, p] : cfg.primes) {
    const std::string tag = pair_label(r, p);
    const Ambient z{r, 0};
    const Ambient wide{r, 1};
    out.push_back(check_n_characterization(tag + " haar", Measure::haar(z, p), top));
    out.push_back(check_n_characterization(tag + " density", random_density(rng, z, std::min(2, top), p), top));
    out.push_back(check_n_characterization(tag + " density m0=1", random_density(rng, wide, 1, p), top));
    out.push_back(check_n_characterization(tag + " atomic", random_atomic(rng, z, p, 4), top));
    out.push_back(check_n_characterization(
        tag + " sum", Measure::sum({random_density(rng, z, 1, p), random_atomic(rng, z, p, 3)}), top));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 3. M-conditions of constructed stochastic measures.

inline Results suite_m_conditions(const Config& cfg) {
  Results out;
  for (const auto& [r, p] : cfg.primes) {
    for (int level = 0; level <= even_level(cfg.max_level); level += 2) {
      Tally t("m-conditions", pair_label(r, p) + " haar level " + std::to_string(level),
              "xi(empty)=0, additivity, M(xi(A)xi(B)) = mu(A n B)");
      if (p == 2) {
        t.skip("no default probability space for p = 2");
        out.push_back(t.done());
        continue;
      }
      const OrthStochMeasure xi = build_orthogonal_measure(Measure::haar(Ambient{r, 0}, p), level);
      const MReport rep = verify_m_conditions(xi, level);
      t.expect(rep.all(), [&] { return rep.failures.empty() ? std::string("report failed") : rep.failures.front(); });
      CheckResult res = t.done();
      res.cases = rep.pairs;
      out.push_back(res);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 4. Isometry of the stochastic integral.

inline Results suite_isometry(const Config& cfg) {
  Rng rng = suite_rng(cfg, 4);
  Results out;
  const int level = even_level(cfg.max_level);
  for (const auto& [r, p] : cfg.primes) {
    const Ambient g{r, 0};
    Tally iso("isometry", pair_label(r, p) + " haar", "M(int f dxi int g dxi) = int f g dmu");
    Tally sq("isometry", pair_label(r, p) + " square density", "M(int f dxi int g dxi) = int f g dmu");
    Tally cont("isometry", pair_label(r, p) + " continuity bound", "|M (int (f-g) dxi)^2| <= ||f-g||_{2,mu}^2");
    if (p == 2) {
      for (Tally* t : {&iso, &sq, &cont}) {
        t->skip("no default probability space for p = 2");
        out.push_back(t->done());
      }
      continue;
    }
    const OrthStochMeasure haar_xi = build_orthogonal_measure(Measure::haar(g, p), level);
    const OrthStochMeasure dens_xi = build_orthogonal_measure(square_density(rng, g, std::max(1, level), p),
                                                              std::max(1, level));
    for (int i = 0; i < cfg.random_cases; ++i) {
      const LocallyConstantFn f = random_fn(rng, g, static_cast<int>(rng.uniform(0, level)), p);
      const LocallyConstantFn h = random_fn(rng, g, static_cast<int>(rng.uniform(0, level)), p);
      const IsometryCheck c = isometry_identity_check(f, h, haar_xi);
      iso.expect(c.holds, [&] { return "case " + std::to_string(i); });

      const LocallyConstantFn diff = f - h;
      const Cyclotomic e = (stochastic_integral(diff, haar_xi) * stochastic_integral(diff, haar_xi)).expectation();
      const RootNorm bound = lq_norm(diff, haar_xi.structure(), 2);
      bool ok = true;
      if (!e.is_zero()) {
        const Rational v = valuation(e.to_rational(), p);
        ok = !bound.is_zero() && v >= 2 * *bound.exponent;
      }
      cont.expect(ok, [&] { return "case " + std::to_string(i); });
    }
    for (int i = 0; i < std::max(20, cfg.random_cases / 4); ++i) {
      const int lvl = std::max(1, level);
      const LocallyConstantFn f = random_fn(rng, g, static_cast<int>(rng.uniform(0, lvl)), p);
      const LocallyConstantFn h = random_fn(rng, g, static_cast<int>(rng.uniform(0, lvl)), p);
      sq.expect(isometry_identity_check(f, h, dens_xi).holds, [&] { return "case " + std::to_string(i); });
    }
    out.push_back(iso.done());
    out.push_back(sq.done());
    out.push_back(cont.done());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 5. Weighted measure and its inversion.

inline Results suite_weighted(const Config& cfg) {
  Rng rng = suite_rng(cfg, 5);
  Results out;
  const int level = std::max(1, even_level(cfg.max_level));
  for (const auto& [r, p] : cfg.primes) {
    const std::string tag = pair_label(r, p);
    Tally inv("weighted-roundtrip", tag + " inversion", "xi(A) = int Ch_A / g drho");
    Tally fwd("weighted-roundtrip", tag + " weighted integral", "int f drho = int f g dxi");
    Tally str("weighted-roundtrip", tag + " weighted structure", "rho is orthogonal with structure g^2 mu");
    Tally zero("weighted-roundtrip", tag + " zero weight refused", "inversion needs g != 0 on every atom");
    if (p == 2) {
      for (Tally* t : {&inv, &fwd, &str, &zero}) {
        t->skip("no default probability space for p = 2");
        out.push_back(t->done());
      }
      continue;
    }
    const Ambient g{r, 0};
    const OrthStochMeasure xi = build_orthogonal_measure(square_density(rng, g, level, p), level);
    const int cases = std::max(5, cfg.random_cases / 20);
    for (int i = 0; i < cases; ++i) {
      const LocallyConstantFn w = random_nowhere_zero_fn(rng, g, static_cast<int>(rng.uniform(0, level)), p);
      const WeightedMeasure wm = weighted_measure(xi, w);
      for (const Ball& a : all_balls(g, level)) {
        inv.expect(invert_weighted(wm.rho, w, single(a)) == xi.of(a), [&] { return describe(a); });
      }
      const LocallyConstantFn f = random_fn(rng, g, static_cast<int>(rng.uniform(0, level)), p);
      fwd.expect(stochastic_integral(f, wm.rho) == stochastic_integral(f * w, xi), [&] { return "case " + std::to_string(i); });
      const MReport rep = verify_m_conditions(wm.rho, level);
      str.expect(rep.all(), [&] { return rep.failures.empty() ? std::string() : rep.failures.front(); });
    }
    LocallyConstantFn w = random_nowhere_zero_fn(rng, g, level, p);
    LocallyConstantFn::Values vals = w.values();
    vals.begin()->second = MeasureValue::scalar(0);
    w = LocallyConstantFn(w.domain(), w.level(), w.shape(), vals);
    const WeightedMeasure wm = weighted_measure(xi, w);
    bool refused = false;
    try {
      (void)invert_weighted(wm.rho, w, ClopenSet::whole(g));
    } catch (const Error& e) {
      refused = e.kind() == ErrorKind::division_by_zero;
    }
    zero.expect(refused, [] { return std::string("inversion through a zero weight was not refused"); });
    out.push_back(inv.done());
    out.push_back(fwd.done());
    out.push_back(str.done());
    out.push_back(zero.done());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 6. Stochastic Fubini.

inline ProductFn random_product_fn(Rng& rng, const Ambient& t, const Ambient& g, int lt, int lg, long p) {
  return ProductFn::from_atoms(t, g, lt, lg, ValueShape::scalar(), [&](const Ball&, const Ball&) {
    return MeasureValue::scalar(random_rational(rng, p));
  });
}

inline Results suite_stochastic_fubini(const Config& cfg) {
  Rng rng = suite_rng(cfg, 6);
  Results out;
  for (const auto& [r, p] : cfg.primes) {
    const std::string tag = pair_label(r, p);
    Tally t("stochastic-fubini", tag + " random kernels", "int_T z (int_G g dxi) dh = int_G (int_T z g dh) dxi");
    Tally sep("stochastic-fubini", tag + " separable kernels", "both sides equal (int z g1 dh) int g2 dxi");
    if (p == 2) {
      t.skip("no default probability space for p = 2");
      sep.skip("no default probability space for p = 2");
      out.push_back(t.done());
      out.push_back(sep.done());
      continue;
    }
    const Ambient g{r, 0};
    const OrthStochMeasure xi = build_orthogonal_measure(square_density(rng, g, 1, p), 1);
    const int cases = std::max(50, cfg.random_cases / 4);
    for (int i = 0; i < cases; ++i) {
      const Measure h = rng.chance(50) ? Measure::haar(g, p) : random_density(rng, g, 1, p);
      const LocallyConstantFn z = random_fn(rng, g, static_cast<int>(rng.uniform(0, 1)), p);
      const ProductFn k = random_product_fn(rng, g, g, static_cast<int>(rng.uniform(0, 1)),
                                            static_cast<int>(rng.uniform(0, 1)), p);
      t.expect(stochastic_fubini(z, k, xi, h).holds, [&] { return "case " + std::to_string(i); });
    }
    for (int i = 0; i < 10; ++i) {
      const Measure h = Measure::haar(g, p);
      const LocallyConstantFn z = random_fn(rng, g, 1, p);
      const LocallyConstantFn g1 = random_fn(rng, g, 1, p);
      const LocallyConstantFn g2 = random_fn(rng, g, 1, p);
      const ProductFn k = ProductFn::from_atoms(g, g, 1, 1, ValueShape::scalar(), [&](const Ball& a, const Ball& b) {
        return g1.at(a) * g2.at(b);
      });
      const StochasticFubini res = stochastic_fubini(z, k, xi, h);
      const Cyclotomic factor(integrate(z * g1, h).scalar_value());
      const RandomVariable want = factor * stochastic_integral(g2, xi);
      sep.expect(res.holds && res.lhs == want, [&] { return "case " + std::to_string(i); });
    }
    out.push_back(t.done());
    out.push_back(sep.done());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 7. Product measures.

inline Results suite_product(const Config& cfg) {
  Rng rng = suite_rng(cfg, 7);
  Results out;
  const int level = cfg.max_level;
  for (const auto& [r, p] : cfg.primes) {
    const std::string tag = pair_label(r, p);
    const Ambient g{r, 0};
    const Measure haar = Measure::haar(g, p);
    const Measure dens = random_density(rng, g, std::min(level, 2), p);
    const Measure atom = random_atomic(rng, g, p, 3, std::max(level, 1));
    const std::vector<std::pair<std::string, ProductMeasure>> kinds{
        {"haar x haar", ProductMeasure(haar, haar)}, {"density x atomic", ProductMeasure(dens, atom)}};
    for (const auto& [name, pm] : kinds) {
      Tally n("product", tag + " " + name + " N-product", "N_{mu x nu}(x,y) = N_mu(x) N_nu(y)");
      Tally fub("product", tag + " " + name + " Fubini rectangles", "iterated integrals equal the product integral");
      std::vector<Rational> xs;
      std::vector<Rational> ys;
      for (const Ball& b : ClopenSet::whole(g).refine(level)) xs.push_back(b.center());
      ys = xs;
      for (const auto& [x, v] : pm.left().decomposition().points) xs.push_back(x);
      for (const auto& [y, v] : pm.right().decomposition().points) ys.push_back(y);
      for (const Rational& x : xs) {
        for (const Rational& y : ys) {
          const NProductCheck c = product_n_identity_check(pm, x, y);
          n.expect(c.holds, [&] { return "x=" + to_string(x) + " y=" + to_string(y); });
        }
      }
      const auto balls = all_balls(g, level);
      for (const Ball& a : balls) {
        for (const Ball& b : balls) {
          const ProductFn f = ProductFn::from_atoms(g, g, a.level, b.level, ValueShape::scalar(),
                                                    [&](const Ball& x, const Ball& y) {
                                                      return MeasureValue::scalar(x == a && y == b ? 1 : 0);
                                                    });
          const FubiniResult res = fubini_check(f, pm);
          fub.expect(res.holds && res.reversed && res.product == pm.eval(a, b),
                     [&] { return describe(a) + " x " + describe(b); });
        }
      }
      out.push_back(n.done());
      out.push_back(fub.done());
    }
    Tally rnd("product", tag + " Fubini random", "iterated integrals equal the product integral");
    Tally mat("product", tag + " Fubini matrix-valued", "one iterated order for non-commuting values");
    for (int i = 0; i < std::max(10, cfg.random_cases / 10); ++i) {
      const ProductMeasure pm(random_density(rng, g, 1, p), rng.chance(50) ? haar : random_atomic(rng, g, p, 2));
      const ProductFn f = random_product_fn(rng, g, g, level, level, p);
      const FubiniResult res = fubini_check(f, pm);
      rnd.expect(res.holds && res.reversed.has_value(), [&] { return "case " + std::to_string(i); });
    }
    for (int i = 0; i < 5; ++i) {
      auto mat_fn = scalar_fn(g, 1, [&](const Ball&) { return Rational(1); });
      const LocallyConstantFn m = LocallyConstantFn::from_atoms(g, 1, ValueShape::matrix(2), [&](const Ball&) {
        std::vector<Rational> e;
        for (int k = 0; k < 4; ++k) e.push_back(random_rational(rng, p));
        return MeasureValue::matrix(2, e);
      });
      const ProductMeasure pm(Measure::density(p, m), Measure::density(p, m));
      const ProductFn f = ProductFn::from_atoms(g, g, 1, 1, ValueShape::matrix(2), [&](const Ball&, const Ball&) {
        std::vector<Rational> e;
        for (int k = 0; k < 4; ++k) e.push_back(random_rational(rng, p));
        return MeasureValue::matrix(2, e);
      });
      const FubiniResult res = fubini_check(f, pm);
      mat.expect(res.holds && !res.reversed, [&] { return "case " + std::to_string(i); });
      (void)mat_fn;
    }
    out.push_back(rnd.done());
    out.push_back(mat.done());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 8. Traces.

inline FinVector random_vector(Rng& rng, long p) {
  FinVector::Entries e;
  const int n = static_cast<int>(rng.uniform(0, 5));
  for (int k = 0; k < n; ++k) e[static_cast<std::uint64_t>(rng.uniform(0, 7))] = random_rational(rng, p);
  return FinVector(p, e);
}

inline FinMatrix random_matrix(Rng& rng, long p) {
  FinMatrix::Entries e;
  const int n = static_cast<int>(rng.uniform(0, 8));
  for (int k = 0; k < n; ++k) {
    e[{static_cast<std::uint64_t>(rng.uniform(0, 4)), static_cast<std::uint64_t>(rng.uniform(0, 4))}] =
        random_rational(rng, p);
  }
  return FinMatrix(p, e);
}

inline Results suite_trace(const Config& cfg) {
  Rng rng = suite_rng(cfg, 8);
  Results out;
  std::set<long> value_primes;
  for (const auto& [r, p] : cfg.primes) value_primes.insert(p);
  const int n = std::max(1000, cfg.random_cases * 5);
  for (long p : value_primes) {
    const std::string tag = "p=" + std::to_string(p);
    Tally ro("trace", tag + " rank-one trace", "Tr [a,b] = (a,b)");
    Tally bound("trace", tag + " trace bound", "|Tr F| <= sup |F_ij|");
    Tally lin("trace", tag + " linearity", "Tr(aF + bH) = a Tr F + b Tr H");
    Tally inv("trace", tag + " transpose", "W(W(F)) = F and (a,b) = Tr [b,a]");
    for (int i = 0; i < n; ++i) {
      const FinVector a = random_vector(rng, p);
      const FinVector b = random_vector(rng, p);
      ro.expect(trace(rank_one(a, b)) == pairing(a, b), [&] { return "case " + std::to_string(i); });
      inv.expect(pairing(a, b) == trace(rank_one(b, a)), [&] { return "case " + std::to_string(i); });
      const FinMatrix f = random_matrix(rng, p);
      const FinMatrix h = random_matrix(rng, p);
      bound.expect(le(padic_valuation(trace(f), p), op_norm(f)), [&] { return "case " + std::to_string(i); });
      inv.expect(transpose(transpose(f)) == f, [&] { return "case " + std::to_string(i); });
      const Rational x = random_rational(rng, p);
      const Rational y = random_rational(rng, p);
      lin.expect(trace(f.linear_combination(x, h, y)) == x * trace(f) + y * trace(h),
                 [&] { return "case " + std::to_string(i); });
    }
    out.push_back(ro.done());
    out.push_back(bound.done());
    out.push_back(lin.done());
    out.push_back(inv.done());
  }
  const int top = cfg.max_level + 1;
  for (const auto& [r, p] : cfg.primes) {
    const Ambient g{r, 0};
    Tally add("trace", pair_label(r, p) + " trace measure", "Tr mu is additive and |Tr mu(A)| <= u(mu(A))");
    const LocallyConstantFn m = LocallyConstantFn::from_atoms(g, std::min(2, top), ValueShape::matrix(2), [&](const Ball&) {
      std::vector<Rational> e;
      for (int k = 0; k < 4; ++k) e.push_back(random_rational(rng, p));
      return MeasureValue::matrix(2, e);
    });
    const Measure mu = Measure::density(p, m);
    const Measure tr = trace_measure(mu);
    const auto balls = all_balls(g, top);
    std::map<Ball, Rational> value;
    for (const Ball& b : balls) {
      const MeasureValue v = mu.eval(b);
      value.emplace(b, tr.eval(b).scalar_value());
      add.expect(value.at(b) == v.at(0, 0) + v.at(1, 1) && le(padic_valuation(value.at(b), p), v.norm(p)),
                 [&] { return describe(b); });
    }
    for (std::size_t i = 0; i < balls.size(); ++i) {
      for (std::size_t j = i + 1; j < balls.size(); ++j) {
        if (!balls[i].disjoint(balls[j])) continue;
        const ClopenSet u = set_union(single(balls[i]), single(balls[j]));
        add.expect(tr.eval(u).scalar_value() == value.at(balls[i]) + value.at(balls[j]),
                   [&] { return describe(balls[i]) + " u " + describe(balls[j]); });
      }
    }
    out.push_back(add.done());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 9. Characters and characteristic functionals.

inline Results suite_characters(const Config& cfg) {
  Rng rng = suite_rng(cfg, 9);
  Results out;
  std::set<std::pair<long, long>> pairs(cfg.primes.begin(), cfg.primes.end());
  std::set<long> done_r;
  for (const auto& [r, p] : pairs) {
    const std::string tag = pair_label(r, p);
    if (done_r.insert(r).second) {
      Tally hom("characters", tag + " homomorphism", "chi_s(x) chi_s(x') = chi_s(x + x')");
      Tally bil("characters", tag + " bilinearity", "chi_{s+s'}(x) = chi_s(x) chi_{s'}(x)");
      const long n = static_cast<long>(pow_u64(r, 3));
      const Rational step = rpow(r, -3);
      std::vector<Rational> grid;
      for (long a = 0; a < 2 * n; ++a) grid.push_back(Rational(a) * step);
      for (long s = 0; s < n; ++s) {
        std::vector<Cyclotomic> table;
        for (const Rational& x : grid) table.push_back(character_eval(grid[s], x, r, p));
        for (long x = 0; x < n; ++x) {
          for (long y = 0; y < n; ++y) {
            hom.expect(table[x] * table[y] == table[x + y], [&] {
              return "s=" + to_string(grid[s]) + " x=" + to_string(grid[x]) + " x'=" + to_string(grid[y]);
            });
          }
        }
      }
      // chi_s(x) is symmetric in s and x, so the same table shape serves.
      for (long x = 0; x < n; ++x) {
        std::vector<Cyclotomic> table;
        for (const Rational& s : grid) table.push_back(character_eval(s, grid[x], r, p));
        for (long s = 0; s < n; ++s) {
          for (long t = 0; t < n; ++t) {
            bil.expect(table[s] * table[t] == table[s + t], [&] { return "x=" + to_string(grid[x]); });
          }
        }
      }
      out.push_back(hom.done());
      out.push_back(bil.done());
    }
    const Ambient g{r, 0};
    Tally haar("characters", tag + " Haar functional", "h^(s) = 1 for ord s >= 0, 0 for ord s = -1");
    const Measure h = Measure::haar(g, p);
    for (long k = 0; k <= 3; ++k) {
      for (long a = 1; a <= r * r; ++a) {
        const Rational s = Rational(a) * rpow(r, k);
        haar.expect(char_functional(h, s) == Cyclotomic(1), [&] { return "s=" + to_string(s); });
      }
    }
    for (long a = 1; a < 3 * r; ++a) {
      if (a % r == 0) continue;
      const Rational s = ratio(a, r);
      haar.expect(char_functional(h, s).is_zero(), [&] { return "s=" + to_string(s); });
    }
    out.push_back(haar.done());

    Tally conv("characters", tag + " convolution", "(mu * nu)^(s) = mu^(s) nu^(s)");
    for (int i = 0; i < 50; ++i) {
      const Ambient amb{r, static_cast<int>(rng.uniform(0, 1))};
      const Measure mu = random_density(rng, amb, static_cast<int>(rng.uniform(0, std::min(cfg.max_level, 2))), p);
      const Measure nu = random_density(rng, amb, static_cast<int>(rng.uniform(0, std::min(cfg.max_level, 2))), p);
      const Measure mn = convolve(mu, nu);
      for (int k = 0; k < 3; ++k) {
        const Rational s = Rational(rng.uniform(0, static_cast<long>(pow_u64(r, 3)) - 1)) * rpow(r, -3);
        conv.expect(char_functional(mn, s) == char_functional(mu, s) * char_functional(nu, s),
                    [&] { return "case " + std::to_string(i) + " s=" + to_string(s); });
      }
    }
    out.push_back(conv.done());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 10. Spectral synthesis and recovery.

/// Distinct frequencies a / r, 0 <= a < r^2.
inline std::vector<Rational> frequency_pool(Rng& rng, long r) {
  const long n = r * r;
  std::vector<long> all;
  for (long a = 0; a < n; ++a) all.push_back(a);
  for (long i = n - 1; i > 0; --i) std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(rng.uniform(0, i))]);
  std::vector<Rational> pool;
  for (std::size_t i = 0; i < std::min<std::size_t>(5, all.size()); ++i) pool.push_back(ratio(all[i], r));
  for (Rational& y : pool) y.canonicalize();
  return pool;
}

inline Results suite_spectral(const Config& cfg) {
  Rng rng = suite_rng(cfg, 10);
  Results out;
  for (const auto& [r, p] : cfg.primes) {
    const std::string tag = pair_label(r, p);
    Tally cov("spectral", tag + " covariance", "B(t,q) = mu_spec^(t + q)");
    Tally masses("spectral", tag + " recovered masses", "masses recovered exactly");
    Tally orth("spectral", tag + " recovered xi", "recovered xi is an orthogonal stochastic measure");
    Tally round("spectral", tag + " xi roundtrip", "recovered xi equals the synthesizing xi");
    Tally spur("spectral", tag + " spurious candidate", "a spurious frequency gets mass 0");
    Tally mean("spectral", tag + " mean zero", "M eta(t) = 0");
    if (p == 2) {
      for (Tally* t : {&cov, &masses, &orth, &round, &spur, &mean}) {
        t->skip("no default probability space for p = 2");
        out.push_back(t->done());
      }
      continue;
    }
    const std::vector<Rational> pool = frequency_pool(rng, r);
    const std::size_t n = pool.size();
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      if (__builtin_popcount(mask) > 4) continue;
      SpectralSpec spec{r, p, {}, {}};
      std::optional<Rational> spare;
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask & (1U << i)) != 0) {
          spec.frequencies.push_back(pool[i]);
          const Rational q = random_nonzero(rng, p);
          spec.masses.push_back(q * q);
        } else if (!spare) {
          spare = pool[i];
        }
      }
      const std::string label = "mask " + std::to_string(mask);
      const StationaryProcess proc = synthesize(spec);
      const Ambient g = ambient_for(r, spec.frequencies);
      const Measure mu_spec = spectral_measure(spec, g);
      const int sep = std::max(0, separation_level(g, spec.frequencies));
      const long grid_n = std::max<long>(static_cast<long>(spec.frequencies.size()) + 2,
                                         std::min<long>(27, static_cast<long>(pow_u64(r, sep + 1))));
      std::vector<Rational> grid;
      std::vector<RandomVariable> eta;
      for (long i = 0; i < grid_n; ++i) {
        grid.push_back(Rational(i) * rpow(r, -sep));
        eta.push_back(proc.sample(grid.back()));
        mean.expect(eta.back().expectation().is_zero(), [&] { return label; });
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i; j < grid.size(); ++j) {
          cov.expect((eta[i] * eta[j]).expectation() == char_functional(mu_spec, grid[i] + grid[j]),
                     [&] { return label + " t=" + to_string(grid[i]) + " q=" + to_string(grid[j]); });
        }
      }
      const Recovery rec = spectral_recover(proc, spec.frequencies);
      bool exact = rec.masses_rational && rec.consistent;
      for (std::size_t k = 0; exact && k < spec.masses.size(); ++k) exact = rec.masses[k] == Cyclotomic(spec.masses[k]);
      masses.expect(exact, [&] { return label; });
      orth.expect(rec.m_conditions.all() && rec.failures.empty(),
                  [&] { return label + (rec.failures.empty() ? std::string() : ": " + rec.failures.front()); });
      for (std::size_t k = 0; k < spec.frequencies.size(); ++k) {
        const Ball own = ball_at(rec.ambient, spec.frequencies[k], rec.level);
        round.expect(rec.xi_hat.count(own) != 0 && rec.xi_hat.at(own) == proc.xi_k(k), [&] { return label; });
      }
      if (spare && spec.frequencies.size() < 4) {
        std::vector<Rational> cands = spec.frequencies;
        cands.push_back(*spare);
        const Recovery extra = spectral_recover(proc, cands);
        spur.expect(extra.masses_rational && extra.masses.back().is_zero() && extra.consistent,
                    [&] { return label; });
      }
    }
    for (Tally* t : {&cov, &masses, &orth, &round, &spur, &mean}) out.push_back(t->done());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 11. Corrupted inputs must be detected.

inline Results suite_mutation(const Config& cfg) {
  Results out;
  long r = 3;
  long p = 5;
  for (const auto& [rr, pp] : cfg.primes) {
    if (pp != 2) {
      r = rr;
      p = pp;
      break;
    }
  }
  const Ambient g{r, 0};
  const int level = std::max(1, even_level(cfg.max_level));
  const OrthStochMeasure xi = build_orthogonal_measure(Measure::haar(g, p), level == 1 ? 0 : level);
  {
    Tally t("mutation", "perturbed c_k", "corrupted xi fails orthogonality");
    std::vector<StochAtom> atoms = xi.atoms();
    atoms.front().c += 1;
    const OrthStochMeasure bad(xi.structure(), xi.level(), atoms, xi.space());
    const MReport rep = verify_m_conditions(bad, xi.level());
    t.expect(!rep.orthogonal, [] { return std::string("perturbed coefficient went unnoticed"); });
    out.push_back(t.done());
  }
  {
    Tally t("mutation", "perturbed structure atom", "corrupted structure measure fails orthogonality");
    const Measure bad_mu = Measure::sum({xi.structure(), Measure::atomic(g, p, ValueShape::scalar(),
                                                                         {{Rational(0), MeasureValue::scalar(1)}})});
    const OrthStochMeasure bad(bad_mu, xi.level(), xi.atoms(), xi.space());
    const MReport rep = verify_m_conditions(bad, xi.level());
    t.expect(!rep.orthogonal, [] { return std::string("perturbed structure measure went unnoticed"); });
    out.push_back(t.done());
  }
  {
    Tally t("mutation", "transposed matrix entry", "corrupted rank-one matrix differs from [a,b]");
    const FinVector a(p, {{0, Rational(1)}, {1, Rational(2)}});
    const FinVector b(p, {{0, Rational(3)}, {1, Rational(4)}});
    FinMatrix::Entries e = rank_one(a, b).entries();
    std::swap(e[{0, 1}], e[{1, 0}]);
    const FinMatrix bad(p, e);
    t.expect(!(bad == rank_one(a, b)), [] { return std::string("transposed entry went unnoticed"); });
    out.push_back(t.done());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Supporting invariants of the substrate modules.

inline Results suite_substrate(const Config& cfg) {
  Rng rng = suite_rng(cfg, 12);
  Results out;
  Tally cyc("substrate", "cyclotomic ring laws", "associativity, distributivity, Phi(zeta) = 0");
  for (long r : {2L, 3L, 5L}) {
    for (int i = 0; i < std::max(100, cfg.random_cases / 2); ++i) {
      auto rand_cyc = [&] {
        const int lvl = static_cast<int>(rng.uniform(0, r == 5 ? 2 : 3));
        Cyclotomic::Coeffs c;
        const std::uint64_t order = pow_u64(r, lvl);
        for (int k = 0; k < 3; ++k) c[static_cast<std::uint64_t>(rng.uniform(0, static_cast<long>(order) - 1))] += random_rational(rng, r);
        return lvl == 0 ? Cyclotomic(c[0], r) : Cyclotomic::from_coeffs(r, lvl, c);
      };
      const Cyclotomic a = rand_cyc();
      const Cyclotomic b = rand_cyc();
      const Cyclotomic c = rand_cyc();
      cyc.expect((a * b) * c == a * (b * c) && a * (b + c) == a * b + a * c && a * b == b * a,
                 [&] { return "r=" + std::to_string(r) + " case " + std::to_string(i); });
      if (!a.is_zero()) cyc.expect(a * a.inverse() == Cyclotomic(1), [&] { return "inverse"; });
    }
    for (int m = 1; m <= 3; ++m) {
      Cyclotomic phi(Rational(0), r);
      const std::uint64_t step = pow_u64(r, m - 1);
      for (long j = 0; j < r; ++j) phi += Cyclotomic::zeta_power(r, m, static_cast<std::uint64_t>(j) * step);
      cyc.expect(phi.is_zero(), [&] { return "Phi at level " + std::to_string(m); });
    }
  }
  out.push_back(cyc.done());

  Tally bool_laws("substrate", "ball ring laws", "Boolean ring identities and canonical forms");
  for (long r : {2L, 3L, 5L}) {
    const Ambient g{r, 0};
    const auto balls = all_balls(g, 2);
    auto rand_set = [&] {
      std::vector<Ball> bs;
      const int k = static_cast<int>(rng.uniform(0, 4));
      for (int i = 0; i < k; ++i) bs.push_back(balls[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(balls.size()) - 1))]);
      return ClopenSet::canonicalize(g, bs);
    };
    for (int i = 0; i < 100; ++i) {
      const ClopenSet a = rand_set();
      const ClopenSet b = rand_set();
      const ClopenSet c = rand_set();
      const bool ok =
          set_union(set_union(a, b), c) == set_union(a, set_union(b, c)) &&
          set_intersection(a, set_union(b, c)) == set_union(set_intersection(a, b), set_intersection(a, c)) &&
          set_complement(set_union(a, b)) == set_intersection(set_complement(a), set_complement(b)) &&
          set_union(a, set_complement(a)) == ClopenSet::whole(g) &&
          ClopenSet::canonicalize(g, a.balls()) == a && a.refine(3) == set_union(a, a).refine(3);
      bool_laws.expect(ok, [&] { return "r=" + std::to_string(r) + " case " + std::to_string(i); });
    }
    for (const Ball& b : balls) {
      bool_laws.expect(ClopenSet::canonicalize(g, b.children()) == single(b), [&] { return describe(b); });
    }
  }
  out.push_back(bool_laws.done());

  Tally unit("substrate", "root of unity homomorphism", "zeta^(e1) zeta^(e2) = zeta^(e1 + e2 mod 1)");
  for (long r : {2L, 3L, 5L}) {
    const long n = static_cast<long>(pow_u64(r, 3));
    std::vector<Cyclotomic> table;
    for (long a = 0; a < n; ++a) table.push_back(root_of_unity(frac_part(ratio(a, n), r)));
    for (long a = 0; a < n; ++a) {
      for (long b = 0; b < n; ++b) {
        unit.expect(table[a] * table[b] == table[(a + b) % n], [&] { return std::to_string(a) + "+" + std::to_string(b); });
      }
    }
  }
  out.push_back(unit.done());
  return out;
}

inline Results suite_measures(const Config& cfg) {
  Rng rng = suite_rng(cfg, 13);
  Results out;
  for (const auto& [r, p] : cfg.primes) {
    const std::string tag = pair_label(r, p);
    const Ambient g{r, 0};
    std::vector<std::pair<std::string, Measure>> fixtures{
        {"haar", Measure::haar(g, p)},
        {"density", random_density(rng, g, 2, p)},
        {"atomic", random_atomic(rng, g, p, 4)},
        {"sum", Measure::sum({random_density(rng, g, 1, p), random_atomic(rng, g, p, 2)})}};
    for (const auto& [name, mu] : fixtures) {
      Tally add("measures", tag + " " + name + " additivity", "mu(A u B) = mu(A) + mu(B)");
      Tally chain("measures", tag + " " + name + " shrinking chain", "chain norms decrease to N_mu(x)");
      Tally total("measures", tag + " " + name + " total norm", "||mu|| = ||G||_mu = sup N_mu");
      Tally push("measures", tag + " " + name + " pushforward", "u(F mu(A)) <= ||F|| u(mu(A)), F(int f dmu) = int f dF(mu)");
      const auto balls = all_balls(g, cfg.max_level);
      for (std::size_t i = 0; i < balls.size(); ++i) {
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
          if (!balls[i].disjoint(balls[j])) continue;
          add.expect(mu.eval(set_union(single(balls[i]), single(balls[j]))) == mu.eval(balls[i]) + mu.eval(balls[j]),
                     [&] { return describe(balls[i]) + " u " + describe(balls[j]); });
        }
      }
      std::vector<Rational> points;
      for (int i = 0; i < 10; ++i) points.push_back(random_point(rng, g, 3));
      for (const auto& [x, v] : mu.decomposition().points) points.push_back(x);
      for (const Rational& x : points) {
        const int deep = mu.stationary_level(x) + 2;
        const auto norms = mu.n_mu_chain(x, deep);
        bool ok = true;
        for (std::size_t k = 1; k < norms.size(); ++k) ok = ok && le(norms[k], norms[k - 1]);
        ok = ok && norms.back() == mu.n_mu(x);
        const bool is_atom = mu.decomposition().points.count(x) != 0;
        if (!is_atom && mu.decomposition().density.empty()) ok = ok && mu.eval(ball_at(g, x, deep)).is_zero();
        chain.expect(ok, [&] { return "x=" + to_string(x); });
      }
      bool total_ok = true;
      try {
        (void)mu.total_norm();
      } catch (const IdentityFailure&) {
        total_ok = false;
      }
      total.expect(total_ok, [] { return std::string("total norm routes disagree"); });
      const Rational c = random_nonzero(rng, p);
      const LinearValueMap f = LinearValueMap::scaling(c, ValueShape::scalar());
      const Measure nu = mu.pushforward_values(f);
      for (const Ball& b : balls) {
        push.expect(le(nu.eval(b).norm(p), f.norm(p) * mu.eval(b).norm(p)), [&] { return describe(b); });
      }
      for (int i = 0; i < 5; ++i) {
        const LocallyConstantFn h = random_fn(rng, g, 2, p);
        push.expect(f.apply(integrate(h, mu)) == integrate(h, nu), [&] { return "intertwining"; });
      }
      for (Tally* t : {&add, &chain, &total, &push}) out.push_back(t->done());
    }
    Tally conv("measures", tag + " convolution norm", "||mu * nu|| <= ||mu|| ||nu||, (mu*nu)(G) = mu(G) nu(G)");
    for (int i = 0; i < 20; ++i) {
      const Measure a = rng.chance(70) ? random_density(rng, g, 1, p) : random_atomic(rng, g, p, 2, 1);
      const Measure b = rng.chance(70) ? random_density(rng, g, 2, p) : random_atomic(rng, g, p, 2, 1);
      const Measure ab = convolve(a, b);
      conv.expect(le(ab.total_norm(), a.total_norm() * b.total_norm()) &&
                      ab.eval(whole_ball(g)) == a.eval(whole_ball(g)) * b.eval(whole_ball(g)),
                  [&] { return "case " + std::to_string(i); });
    }
    out.push_back(conv.done());
    Tally integ("measures", tag + " integral bound", "|int f dmu| <= ||f||_{1,mu}; integrability threshold sets");
    for (int i = 0; i < 20; ++i) {
      const Measure mu = rng.chance(50) ? random_density(rng, g, 1, p) : Measure::sum({random_density(rng, g, 1, p), random_atomic(rng, g, p, 2)});
      const LocallyConstantFn f = random_fn(rng, g, 2, p);
      const MeasureValue v = integrate(f, mu);
      const RootNorm l1 = lq_norm(f, mu, 1);
      const UltraNorm nv = v.norm(p);
      const bool bound = nv.is_zero() || (!l1.is_zero() && Rational(*nv.exponent) >= *l1.exponent);
      const IntegrabilityReport rep = integrability_report(f, mu);
      integ.expect(bound && rep.integrable, [&] { return "case " + std::to_string(i); });
    }
    out.push_back(integ.done());
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Suite {
  std::string name;
  std::function<Results(const Config&)> run;
};

inline const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {"ultrametric", suite_ultrametric},
      {"n-characterization", suite_n_characterization},
      {"m-conditions", suite_m_conditions},
      {"isometry", suite_isometry},
      {"weighted-roundtrip", suite_weighted},
      {"stochastic-fubini", suite_stochastic_fubini},
      {"product", suite_product},
      {"trace", suite_trace},
      {"characters", suite_characters},
      {"spectral", suite_spectral},
      {"mutation", suite_mutation},
      {"substrate", suite_substrate},
      {"measures", suite_measures},
  };
  return all;
}

inline Results run_suite(const std::string& name, const Config& cfg) {
  for (const Suite& s : suites()) {
    if (s.name == name) return s.run(cfg);
  }
  fail(ErrorKind::invalid_argument, "unknown suite '" + name + "'");
}

inline bool all_pass(const Results& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckResult& c) { return c.pass; });
}

inline io::Json config_json(const Config& cfg) {
  io::Json primes = io::Json::array();
  for (const auto& [r, p] : cfg.primes) primes.push_back(io::Json::array({r, p}));
  return io::Json{{"primes", primes}, {"maxLevel", cfg.max_level}, {"randomCases", cfg.random_cases}, {"seed", cfg.seed}};
}

inline Config config_from(const io::Json& j) {
  Config cfg;
  if (j.contains("primes")) {
    cfg.primes.clear();
    for (const io::Json& pr : j.at("primes")) {
      if (!pr.is_array() || pr.size() != 2) fail(ErrorKind::schema, "primes entries must be [r, p]");
      const long r = pr[0].get<long>();
      const long p = pr[1].get<long>();
      require_prime(r, "space prime r");
      require_prime(p, "value prime p");
      if (r == p) fail(ErrorKind::invalid_argument, "selftest primes need gcd(r,p) = 1");
      cfg.primes.emplace_back(r, p);
    }
  }
  if (j.contains("maxLevel")) cfg.max_level = j.at("maxLevel").get<int>();
  if (j.contains("randomCases")) cfg.random_cases = j.at("randomCases").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (cfg.max_level < 0 || cfg.max_level > 3) fail(ErrorKind::invalid_argument, "maxLevel must be in 0..3");
  if (cfg.random_cases < 1) fail(ErrorKind::invalid_argument, "randomCases must be positive");
  return cfg;
}

/// Entries sorted by (suite, case); no timings, so equal configs give equal bytes.
inline io::Json report_json(const Config& cfg, Results results) {
  std::sort(results.begin(), results.end(), [](const CheckResult& a, const CheckResult& b) {
    return std::tie(a.suite, a.name) < std::tie(b.suite, b.name);
  });
  io::Json entries = io::Json::array();
  for (const CheckResult& c : results) {
    entries.push_back(io::Json{{"suite", c.suite},
                               {"case", c.name},
                               {"identity", c.anchor},
                               {"pass", c.pass},
                               {"cases", c.cases},
                               {"detail", c.detail}});
  }
  return io::Json{{"config", config_json(cfg)}, {"generator", "mt19937_64"}, {"entries", entries}, {"pass", all_pass(results)}};
}

inline Results run_all(const Config& cfg) {
  Results all;
  for (const Suite& s : suites()) {
    Results r = s.run(cfg);
    all.insert(all.end(), r.begin(), r.end());
  }
  return all;
}

}  // namespace pam::selftest
