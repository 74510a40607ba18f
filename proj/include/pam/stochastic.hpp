#pragma once

/**
 * Elementary orthogonal stochastic measures on the ring generated by the
 * level-L balls of G, and their stochastic integrals.
 *
 * Atom k carries xi(A_k) = c_k s_k with s_k an independent fair sign, so
 * M xi(A_k) = 0 and M(xi(A_j) xi(A_k)) = [j = k] c_k^2. Choosing
 * c_k^2 = mu(A_k) makes mu the structure measure.
 */

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pam/measure.hpp"
#include "pam/probability.hpp"

namespace pam {

struct StochAtom {
  Ball ball;
  Rational c;
  std::optional<std::uint32_t> factor;
};

inline std::string describe(const Ball& b) {
  return "ball(level=" + std::to_string(b.level) + ",center=" + to_string(b.center()) + ")";
}

class OrthStochMeasure {
 public:
  OrthStochMeasure(Measure mu, int level, std::vector<StochAtom> atoms, SpacePtr space)
      : mu_(std::move(mu)), level_(level), atoms_(std::move(atoms)), space_(std::move(space)) {
    if (!(mu_.shape() == ValueShape::scalar())) {
      fail(ErrorKind::invalid_argument, "structure measure must be scalar");
    }
    if (level_ < -mu_.ambient().m0) fail(ErrorKind::invalid_argument, "atom level below -m0");
    const auto expected = ClopenSet::whole(mu_.ambient()).refine(level_);
    std::sort(atoms_.begin(), atoms_.end(), [](const StochAtom& a, const StochAtom& b) { return a.ball < b.ball; });
    if (atoms_.size() != expected.size()) {
      fail(ErrorKind::invalid_argument, "stochastic measure must list every level-" + std::to_string(level_) +
                                            " atom exactly once");
    }
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      const StochAtom& a = atoms_[k];
      if (!(a.ball == expected[k])) fail(ErrorKind::invalid_argument, "atom list does not match the level");
      if (a.c != 0 && !a.factor) fail(ErrorKind::invalid_argument, "nonzero atom " + describe(a.ball) + " has no factor");
      if (a.factor && *a.factor >= space_->size()) fail(ErrorKind::invalid_argument, "factor index out of range");
      index_.emplace(a.ball, k);
      if (a.factor) {
        rvs_.push_back(Cyclotomic(a.c) * RandomVariable::sign(space_, *a.factor));
      } else {
        rvs_.emplace_back(space_);
      }
    }
  }

  const Measure& structure() const { return mu_; }
  const Ambient& ambient() const { return mu_.ambient(); }
  int level() const { return level_; }
  const std::vector<StochAtom>& atoms() const { return atoms_; }
  const SpacePtr& space() const { return space_; }

  const RandomVariable& atom_rv(const Ball& atom) const { return rvs_.at(index_.at(atom)); }

  RandomVariable of(const Ball& b) const {
    if (b.level > level_) {
      fail(ErrorKind::refine_required, describe(b) + " is finer than the atom level " + std::to_string(level_) +
                                           "; rebuild xi at a deeper level");
    }
    if (b.level == level_) return atom_rv(b);
    RandomVariable out(space_);
    for (const Ball& a : single(b).refine(level_)) out += atom_rv(a);
    return out;
  }

  RandomVariable of(const ClopenSet& s) const {
    require_same(ambient(), s.ambient());
    RandomVariable out(space_);
    for (const Ball& b : s.balls()) out += of(b);
    return out;
  }

 private:
  Measure mu_;
  int level_;
  std::vector<StochAtom> atoms_;
  SpacePtr space_;
  std::map<Ball, std::size_t> index_;
  std::vector<RandomVariable> rvs_;
};

/// One fair sign per atom of positive mass, c_k = sqrt(mu(A_k)).
inline OrthStochMeasure build_orthogonal_measure(const Measure& mu, int level) {
  if (!(mu.shape() == ValueShape::scalar())) {
    fail(ErrorKind::invalid_argument, "structure measure must be scalar");
  }
  if (mu.value_prime() == 2) {
    fail(ErrorKind::unsupported_prime,
         "no default probability space for p = 2 (fair signs need |1/2|_p = 1); supply custom factors");
  }
  std::vector<StochAtom> atoms;
  std::uint32_t factors = 0;
  for (const Ball& a : ClopenSet::whole(mu.ambient()).refine(level)) {
    const Rational m = mu.eval(a).scalar_value();
    const auto c = exact_sqrt(m);
    if (!c) {
      fail(ErrorKind::non_square_atom, "mass " + to_string(m) + " of " + describe(a) + " is not a rational square");
    }
    std::optional<std::uint32_t> factor;
    if (*c != 0) factor = factors++;
    atoms.push_back(StochAtom{a, *c, factor});
  }
  return OrthStochMeasure(mu, level, std::move(atoms), FiniteProbSpace::rademacher(mu.value_prime(), factors));
}

/// eta = sum_k f(A_k) xi(A_k).
inline RandomVariable stochastic_integral(const LocallyConstantFn& f, const OrthStochMeasure& xi) {
  require_same(f.ambient(), xi.ambient());
  if (!(f.shape() == ValueShape::scalar())) fail(ErrorKind::invalid_argument, "integrand must be scalar");
  if (f.level() > xi.level()) {
    fail(ErrorKind::refine_required, "integrand level " + std::to_string(f.level()) + " is finer than the atom level " +
                                         std::to_string(xi.level()) + "; rebuild xi at a deeper level");
  }
  RandomVariable out(xi.space());
  for (const StochAtom& a : xi.atoms()) {
    const Rational v = f.at(a.ball).scalar_value();
    if (v != 0) out += Cyclotomic(v) * xi.atom_rv(a.ball);
  }
  return out;
}

struct MReport {
  std::size_t balls = 0;
  std::size_t pairs = 0;
  bool empty_set = true;   // xi(empty) = 0
  bool mean_zero = true;   // M xi(A) = 0
  bool additive = true;    // xi(A u B) = xi(A) + xi(B), and xi(B) = sum over children
  bool orthogonal = true;  // M(xi(A) xi(B)) = mu(A n B), zero when disjoint
  bool structure_additive = true;     // M xi(A u B)^2 = mu(A) + mu(B) for disjoint A, B
  std::vector<std::string> failures;

  bool all() const { return empty_set && mean_zero && additive && orthogonal && structure_additive; }
};

/**
 * Checks the M-conditions for a set function given on balls, over every pair
 * from `balls`. Unions are evaluated through their canonical ball lists, so
 * merged sibling families exercise additivity across levels.
 */
template <typename XiOfBall>
MReport verify_m_conditions_on(const std::vector<Ball>& balls, int atom_level, const Measure& mu,
                               const SpacePtr& space, XiOfBall xi_of) {
  MReport rep;
  rep.balls = balls.size();
  auto of_set = [&](const ClopenSet& s) {
    RandomVariable out(space);
    for (const Ball& b : s.balls()) out += xi_of(b);
    return out;
  };
  std::vector<RandomVariable> rv;
  rv.reserve(balls.size());
  for (const Ball& b : balls) rv.push_back(xi_of(b));

  if (!of_set(ClopenSet(mu.ambient())).is_zero()) {
    rep.empty_set = false;
    rep.failures.push_back("empty-set: xi(empty) != 0");
  }
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (!rv[i].expectation().is_zero()) {
      rep.mean_zero = false;
      rep.failures.push_back("mean: M xi(" + describe(balls[i]) + ") != 0");
    }
    if (balls[i].level < atom_level) {
      RandomVariable sum(space);
      for (const Ball& c : balls[i].children()) sum += xi_of(c);
      if (!(sum == rv[i])) {
        rep.additive = false;
        rep.failures.push_back("additivity: xi(" + describe(balls[i]) + ") != sum over children");
      }
    }
  }
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (std::size_t j = i; j < balls.size(); ++j) {
      ++rep.pairs;
      const ClopenSet a = single(balls[i]);
      const ClopenSet b = single(balls[j]);
      const Rational want = mu.eval(set_intersection(a, b)).scalar_value();
      if (!((rv[i] * rv[j]).expectation() == Cyclotomic(want))) {
        rep.orthogonal = false;
        rep.failures.push_back("orthogonality: M(xi(" + describe(balls[i]) + ") xi(" + describe(balls[j]) +
                               ")) != mu(A n B)");
      }
      if (!balls[i].disjoint(balls[j])) continue;
      const RandomVariable joined = of_set(set_union(a, b));
      if (!(joined == rv[i] + rv[j])) {
        rep.additive = false;
        rep.failures.push_back("additivity: xi(" + describe(balls[i]) + " u " + describe(balls[j]) + ") != xi(A) + xi(B)");
      }
      const Rational sum = mu.eval(balls[i]).scalar_value() + mu.eval(balls[j]).scalar_value();
      if (!((joined * joined).expectation() == Cyclotomic(sum))) {
        rep.structure_additive = false;
        rep.failures.push_back("structure-additivity: M xi(A u B)^2 != mu(A) + mu(B) for " + describe(balls[i]) + ", " +
                               describe(balls[j]));
      }
    }
  }
  return rep;
}

/// Exhaustive over all ball pairs at levels -m0 .. max_level.
inline MReport verify_m_conditions(const OrthStochMeasure& xi, int max_level) {
  if (max_level > xi.level()) {
    fail(ErrorKind::refine_required, "verification level exceeds the atom level of xi");
  }
  return verify_m_conditions_on(all_balls(xi.ambient(), max_level), xi.level(), xi.structure(), xi.space(),
                                [&](const Ball& b) { return xi.of(b); });
}

struct IsometryCheck {
  Cyclotomic lhs;  // M(int f dxi * int g dxi)
  Cyclotomic rhs;  // int f g dmu
  bool holds = false;
};

inline IsometryCheck isometry_identity_check(const LocallyConstantFn& f, const LocallyConstantFn& g,
                                             const OrthStochMeasure& xi) {
  IsometryCheck out;
  out.lhs = (stochastic_integral(f, xi) * stochastic_integral(g, xi)).expectation();
  out.rhs = Cyclotomic(integrate(f * g, xi.structure()).scalar_value());
  out.holds = out.lhs == out.rhs;
  return out;
}

struct WeightedMeasure {
  OrthStochMeasure rho;  // rho(A) = int Ch_A g dxi
  Measure nu;            // nu(A) = int_A g^2 dmu
};

inline void require_atom_measurable(const LocallyConstantFn& g, const OrthStochMeasure& xi) {
  require_same(g.ambient(), xi.ambient());
  if (!(g.shape() == ValueShape::scalar())) fail(ErrorKind::invalid_argument, "weight must be scalar");
  if (g.level() > xi.level()) {
    fail(ErrorKind::refine_required, "weight is finer than the atom level; rebuild xi at a deeper level");
  }
}

inline WeightedMeasure weighted_measure(const OrthStochMeasure& xi, const LocallyConstantFn& g) {
  require_atom_measurable(g, xi);
  Measure nu = xi.structure().with_density(g * g);
  std::vector<StochAtom> atoms;
  for (const StochAtom& a : xi.atoms()) atoms.push_back(StochAtom{a.ball, g.at(a.ball).scalar_value() * a.c, a.factor});
  return WeightedMeasure{OrthStochMeasure(nu, xi.level(), std::move(atoms), xi.space()), nu};
}

/// xi(A) = int Ch_A / g drho; refused on atoms where g vanishes.
inline RandomVariable invert_weighted(const OrthStochMeasure& rho, const LocallyConstantFn& g, const ClopenSet& a) {
  require_atom_measurable(g, rho);
  const LocallyConstantFn ch = LocallyConstantFn::indicator(a);
  const int level = std::max(ch.level(), g.level());
  if (level > rho.level()) fail(ErrorKind::refine_required, "set is finer than the atom level");
  const LocallyConstantFn h = LocallyConstantFn::from_atoms(
      rho.ambient(), level, ValueShape::scalar(), [&](const Ball& b) {
        const Rational w = g.at(b).scalar_value();
        if (w == 0) fail(ErrorKind::division_by_zero, "weight vanishes on " + describe(b));
        return MeasureValue::scalar(ch.at(b).scalar_value() / w);
      });
  return stochastic_integral(h, rho);
}

struct StochasticFubini {
  RandomVariable lhs;  // int_T z(t) (int_G g(t,y) xi(dy)) h(dt)
  RandomVariable rhs;  // int_G q(y) xi(dy), q(y) = int_T z(t) g(t,y) h(dt)
  bool holds = false;
};

inline StochasticFubini stochastic_fubini(const LocallyConstantFn& z, const ProductFn& g, const OrthStochMeasure& xi,
                                          const Measure& h) {
  require_same(z.ambient(), g.left());
  require_same(h.ambient(), g.left());
  require_same(xi.ambient(), g.right());
  if (!(h.shape() == ValueShape::scalar()) || !(z.shape() == ValueShape::scalar()) ||
      !(g.shape() == ValueShape::scalar())) {
    fail(ErrorKind::invalid_argument, "stochastic Fubini is stated for scalar z, g and h");
  }
  if (g.level_right() > xi.level()) {
    fail(ErrorKind::refine_required, "kernel is finer than the atom level of xi");
  }
  const int tl = std::max(z.level(), g.level_left());
  const ProductFn gr = g.refined(tl, g.level_right());
  const LocallyConstantFn zr = z.refined(tl);

  RandomVariable lhs(xi.space());
  for (const Ball& t : ClopenSet::whole(g.left()).refine(tl)) {
    const Rational w = zr.at(t).scalar_value() * h.eval(t).scalar_value();
    if (w != 0) lhs += Cyclotomic(w) * stochastic_integral(gr.section_left(t), xi);
  }
  const LocallyConstantFn q = LocallyConstantFn::from_atoms(
      g.right(), g.level_right(), ValueShape::scalar(),
      [&](const Ball& y) { return integrate(zr * gr.section_right(y), h); });
  RandomVariable rhs = stochastic_integral(q, xi);
  const bool holds = lhs == rhs;
  return StochasticFubini{std::move(lhs), std::move(rhs), holds};
}

}  // namespace pam
