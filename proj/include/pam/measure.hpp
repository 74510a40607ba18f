#pragma once

/**
 * Finitely additive measures on the ball ring of G with values in K, K^n or
 * Mat_n(K), K ⊃ Q_p.
 *
 * Every built-in measure is a density against the normalized Haar measure
 * h (h(G) = 1) plus finitely many point masses. The density part is constant
 * on the atoms of some level L, so for a ball B at depth d >= L + m0 inside
 * the atom a,
 *
 *     mu(B) = f_a r^(-d) + sum_{x in B} m_x.
 *
 * Because |r^(-d)|_p = 1, the supremum of u(mu(S)) over all ring subsets
 * S ⊂ A is attained on finitely many balls and equals
 *
 *     max( u(f_a) : a meets A ,  u(m_x) : x in A ).
 */

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "pam/clopen.hpp"
#include "pam/functions.hpp"
#include "pam/value.hpp"

namespace pam {

/// Density-plus-atoms normal form shared by every measure kind.
struct Decomposition {
  int level = 0;
  std::map<Ball, MeasureValue> density;    // nonzero density values on level-L atoms
  std::map<Rational, MeasureValue> points;  // nonzero point masses
};

class Measure {
 public:
  enum class Kind { haar, density, atomic, sum };
  using Atoms = std::map<Rational, MeasureValue>;

  static Measure haar(const Ambient& g, long p, const MeasureValue& total) {
    Measure m(g, p, total.shape(), Kind::haar);
    m.require_coprime();
    m.total_ = total;
    m.finish();
    return m;
  }

  static Measure haar(const Ambient& g, long p) { return haar(g, p, MeasureValue::scalar(1)); }

  static Measure density(long p, const LocallyConstantFn& f) {
    Measure m(f.ambient(), p, f.shape(), Kind::density);
    m.require_coprime();
    m.density_ = std::make_shared<const LocallyConstantFn>(f);
    m.finish();
    return m;
  }

  static Measure atomic(const Ambient& g, long p, ValueShape shape, Atoms atoms) {
    Measure m(g, p, shape, Kind::atomic);
    for (const auto& [x, v] : atoms) {
      if (!in_z_inv(x, g.r) || !in_ambient(g, x)) {
        fail(ErrorKind::domain, "atom " + to_string(x) + " is not an exact point of G");
      }
      if (!(v.shape() == shape)) fail(ErrorKind::invalid_argument, "atom mass has the wrong shape");
    }
    m.atoms_ = std::move(atoms);
    m.finish();
    return m;
  }

  static Measure sum(std::vector<Measure> components) {
    if (components.empty()) fail(ErrorKind::invalid_argument, "sum of no measures");
    const Measure& first = components.front();
    Measure m(first.g_, first.p_, first.shape_, Kind::sum);
    for (const Measure& c : components) m.require_compatible(c);
    m.components_ = std::move(components);
    m.finish();
    return m;
  }

  /// The simplest measure with the given normal form.
  static Measure from_decomposition(const Ambient& g, long p, ValueShape shape, const Decomposition& d) {
    std::vector<Measure> parts;
    if (!d.density.empty() || d.points.empty()) {
      parts.push_back(density(p, LocallyConstantFn::from_atoms(g, d.level, shape, [&](const Ball& a) {
        auto it = d.density.find(a);
        return it == d.density.end() ? MeasureValue::zero(shape) : it->second;
      })));
    }
    if (!d.points.empty()) parts.push_back(atomic(g, p, shape, d.points));
    if (parts.size() == 1) return parts.front();
    return sum(std::move(parts));
  }

  const Ambient& ambient() const { return g_; }
  long value_prime() const { return p_; }
  const ValueShape& shape() const { return shape_; }
  Kind kind() const { return kind_; }
  const MeasureValue& haar_total() const { return total_; }
  const LocallyConstantFn& density_fn() const { return *density_; }
  const Atoms& atoms() const { return atoms_; }
  const std::vector<Measure>& components() const { return components_; }
  const Decomposition& decomposition() const { return *dec_; }

  MeasureValue eval(const Ball& b) const {
    require_same(g_, b.ambient);
    const Decomposition& d = *dec_;
    MeasureValue out = MeasureValue::zero(shape_);
    if (b.level >= d.level) {
      auto it = d.density.find(b.ancestor(d.level));
      if (it != d.density.end()) out += rpow(g_.r, -b.depth()) * it->second;
    } else {
      const Rational atom_mass = rpow(g_.r, -(d.level + g_.m0));
      for (const auto& [a, v] : d.density) {
        if (b.contains(a)) out += atom_mass * v;
      }
    }
    for (const auto& [x, v] : d.points) {
      if (ball_contains(b, x)) out += v;
    }
    return out;
  }

  MeasureValue eval(const ClopenSet& a) const {
    require_same(g_, a.ambient());
    MeasureValue out = MeasureValue::zero(shape_);
    for (const Ball& b : a.balls()) out += eval(b);
    return out;
  }

  /// ||A||_mu = sup { u(mu(B)) : B ⊂ A, B in the ring }.
  UltraNorm ball_norm(const Ball& b) const {
    const Decomposition& d = *dec_;
    UltraNorm out = UltraNorm::zero(p_);
    if (b.level >= d.level) {
      auto it = d.density.find(b.ancestor(d.level));
      if (it != d.density.end()) out = it->second.norm(p_);
    } else {
      for (const auto& [a, v] : d.density) {
        if (b.contains(a)) out = max(out, v.norm(p_));
      }
    }
    for (const auto& [x, v] : d.points) {
      if (ball_contains(b, x)) out = max(out, v.norm(p_));
    }
    return out;
  }

  UltraNorm ball_norm(const ClopenSet& a) const {
    require_same(g_, a.ambient());
    UltraNorm out = UltraNorm::zero(p_);
    for (const Ball& b : a.balls()) out = max(out, ball_norm(b));
    return out;
  }

  /// Level from which the ball chain at x meets one density atom and no
  /// point mass other than x itself.
  int stationary_level(const Rational& x) const {
    const Decomposition& d = *dec_;
    int level = std::max(d.level, -g_.m0);
    for (const auto& [y, v] : d.points) {
      if (y != x) level = std::max(level, static_cast<int>(valuation(x - y, g_.r)) + 1);
    }
    return level;
  }

  /// ||ball(x, n)||_mu for n = -m0 .. up_to.
  std::vector<UltraNorm> n_mu_chain(const Rational& x, int up_to) const {
    std::vector<UltraNorm> out;
    for (int n = -g_.m0; n <= up_to; ++n) out.push_back(ball_norm(ball_at(g_, x, n)));
    return out;
  }

  /// N_mu(x) = inf over balls B containing x of ||B||_mu.
  UltraNorm n_mu(const Rational& x) const {
    if (!in_ambient(g_, x)) fail(ErrorKind::domain, "point " + to_string(x) + " lies outside G");
    return ball_norm(ball_at(g_, x, stationary_level(x)));
  }

  /// ||mu|| as ||G||_mu, cross-checked against sup_x N_mu(x).
  UltraNorm total_norm() const {
    const UltraNorm by_set = ball_norm(whole_ball(g_));
    UltraNorm by_points = UltraNorm::zero(p_);
    for (const auto& [a, v] : dec_->density) by_points = max(by_points, v.norm(p_));
    for (const auto& [x, v] : dec_->points) by_points = max(by_points, n_mu(x));
    if (!(by_set == by_points)) {
      throw IdentityFailure("total norm: ||G||_mu differs from sup N_mu");
    }
    return by_set;
  }

  /// nu(A) = integral over A of g dmu for a scalar step function g.
  Measure with_density(const LocallyConstantFn& g) const {
    require_same(g_, g.ambient());
    if (!(g.shape() == ValueShape::scalar())) {
      fail(ErrorKind::invalid_argument, "density must be scalar");
    }
    const Decomposition& d = *dec_;
    Decomposition out;
    out.level = std::max(d.level, g.level());
    for (const auto& [a, v] : d.density) {
      for (const Ball& c : ClopenSet::canonicalize(g_, {a}).refine(out.level)) {
        MeasureValue w = g.at(c).scalar_value() * v;
        if (!w.is_zero()) out.density.emplace(c, std::move(w));
      }
    }
    for (const auto& [x, v] : d.points) {
      MeasureValue w = g.at(x).scalar_value() * v;
      if (!w.is_zero()) out.points.emplace(x, std::move(w));
    }
    return from_decomposition(g_, p_, shape_, out);
  }

  /// nu(A) = F(mu(A)).
  Measure pushforward_values(const LinearValueMap& f) const {
    if (!(f.in == shape_)) {
      fail(ErrorKind::invalid_argument, "linear map expects " + f.in.to_string() + ", measure is " +
                                            shape_.to_string());
    }
    if (kind_ == Kind::haar) return haar(g_, p_, f.apply(total_));
    Decomposition out;
    out.level = dec_->level;
    for (const auto& [a, v] : dec_->density) {
      MeasureValue w = f.apply(v);
      if (!w.is_zero()) out.density.emplace(a, std::move(w));
    }
    for (const auto& [x, v] : dec_->points) {
      MeasureValue w = f.apply(v);
      if (!w.is_zero()) out.points.emplace(x, std::move(w));
    }
    return from_decomposition(g_, p_, f.out, out);
  }

  /// Same density and atoms refined to a common level; equal iff the two
  /// measures agree on every ball.
  friend bool same_measure(const Measure& a, const Measure& b) {
    if (!(a.g_ == b.g_) || a.p_ != b.p_ || !(a.shape_ == b.shape_)) return false;
    const int level = std::max(a.dec_->level, b.dec_->level);
    return refined_density(a, level) == refined_density(b, level) && a.dec_->points == b.dec_->points;
  }

 private:
  Measure(Ambient g, long p, ValueShape shape, Kind kind)
      : g_(g), p_(p), shape_(shape), kind_(kind), total_(MeasureValue::zero(shape)) {
    validate(g_);
    require_prime(p_, "value prime p");
  }

  void require_coprime() const {
    if (g_.r == p_) {
      fail(ErrorKind::invalid_argument, "Haar-based measures need gcd(r,p) = 1, got r = p = " +
                                            std::to_string(p_));
    }
  }

  void require_compatible(const Measure& other) const {
    require_same(g_, other.g_);
    if (p_ != other.p_) fail(ErrorKind::invalid_argument, "measures over different value primes");
    if (!(shape_ == other.shape_)) fail(ErrorKind::invalid_argument, "measures with different value shapes");
  }

  static std::map<Ball, MeasureValue> refined_density(const Measure& m, int level) {
    std::map<Ball, MeasureValue> out;
    for (const auto& [a, v] : m.dec_->density) {
      for (const Ball& c : ClopenSet::canonicalize(m.g_, {a}).refine(level)) out.emplace(c, v);
    }
    return out;
  }

  void finish() {
    auto d = std::make_shared<Decomposition>();
    d->level = -g_.m0;
    switch (kind_) {
      case Kind::haar:
        if (!total_.is_zero()) d->density.emplace(whole_ball(g_), total_);
        break;
      case Kind::density:
        if (!(density_->ambient() == g_)) fail(ErrorKind::invalid_argument, "density on a different ball");
        d->level = density_->level();
        for (const auto& [a, v] : density_->values()) {
          if (!v.is_zero()) d->density.emplace(a, v);
        }
        break;
      case Kind::atomic:
        for (const auto& [x, v] : atoms_) {
          if (!v.is_zero()) d->points.emplace(x, v);
        }
        break;
      case Kind::sum: {
        for (const Measure& c : components_) d->level = std::max(d->level, c.dec_->level);
        std::map<Ball, MeasureValue> dens;
        std::map<Rational, MeasureValue> pts;
        for (const Measure& c : components_) {
          for (const auto& [a, v] : refined_density(c, d->level)) {
            auto [it, fresh] = dens.emplace(a, v);
            if (!fresh) it->second += v;
          }
          for (const auto& [x, v] : c.dec_->points) {
            auto [it, fresh] = pts.emplace(x, v);
            if (!fresh) it->second += v;
          }
        }
        for (auto& [a, v] : dens) {
          if (!v.is_zero()) d->density.emplace(a, std::move(v));
        }
        for (auto& [x, v] : pts) {
          if (!v.is_zero()) d->points.emplace(x, std::move(v));
        }
        break;
      }
    }
    dec_ = std::move(d);
  }

  Ambient g_;
  long p_;
  ValueShape shape_;
  Kind kind_;
  MeasureValue total_;
  std::shared_ptr<const LocallyConstantFn> density_;
  Atoms atoms_;
  std::vector<Measure> components_;
  std::shared_ptr<const Decomposition> dec_;
};

inline void require_same_domain(const LocallyConstantFn& f, const Measure& mu) {
  require_same(f.ambient(), mu.ambient());
}

/// sum over the atoms of f of f(atom) mu(atom).
inline MeasureValue integrate(const LocallyConstantFn& f, const Measure& mu) {
  require_same_domain(f, mu);
  std::optional<MeasureValue> out;
  for (const auto& [a, v] : f.values()) {
    MeasureValue term = v * mu.eval(a);
    if (out) {
      *out += term;
    } else {
      out = std::move(term);
    }
  }
  if (!out) return MeasureValue::zero(f.shape()) * MeasureValue::zero(mu.shape());
  return *out;
}

/// Exponent of (sup_x u(f(x))^q N_mu(x))^(1/q).
inline RootNorm lq_norm(const LocallyConstantFn& f, const Measure& mu, int q) {
  require_same_domain(f, mu);
  if (q < 1) fail(ErrorKind::invalid_argument, "q must be >= 1");
  const long p = mu.value_prime();
  std::optional<long> best;  // exponent of the sup before the root
  for (const auto& [a, v] : f.values()) {
    const UltraNorm fv = v.norm(p);
    const UltraNorm nb = mu.ball_norm(a);
    if (fv.is_zero() || nb.is_zero()) continue;
    const long e = q * *fv.exponent + *nb.exponent;
    if (!best || e < *best) best = e;
  }
  if (!best) return RootNorm{p, std::nullopt};
  Rational e(*best, q);
  e.canonicalize();
  return RootNorm{p, e};
}

/// Finite surrogate for the integrability criterion: for each threshold
/// epsilon among the values of u(f) N_mu, the set {u(f) N_mu >= epsilon}
/// as balls plus isolated points, and the least N_mu on it.
struct IntegrabilityReport {
  struct Threshold {
    long epsilon_exponent = 0;
    std::vector<Ball> balls;
    std::vector<Rational> points;
    UltraNorm delta;
  };
  bool constant_on_support = true;
  bool integrable = true;
  int working_level = 0;
  std::vector<Threshold> thresholds;
};

inline IntegrabilityReport integrability_report(const LocallyConstantFn& f, const Measure& mu) {
  require_same_domain(f, mu);
  const long p = mu.value_prime();
  const Decomposition& d = mu.decomposition();
  IntegrabilityReport rep;
  int level = std::max(f.level(), d.level);
  for (const auto& [x, v] : d.points) level = std::max(level, mu.stationary_level(x));
  rep.working_level = level;

  // Off the point masses N_mu is constant on each working atom; at a point it
  // is N_mu(x).
  struct Piece {
    UltraNorm weight;
    UltraNorm n;
    std::optional<Ball> ball;
    std::optional<Rational> point;
  };
  std::vector<Piece> pieces;
  for (const Ball& b : ClopenSet::whole(mu.ambient()).refine(level)) {
    auto it = d.density.find(b.ancestor(d.level));
    const UltraNorm n = it == d.density.end() ? UltraNorm::zero(p) : it->second.norm(p);
    pieces.push_back(Piece{f.at(b).norm(p) * n, n, b, std::nullopt});
  }
  for (const auto& [x, v] : d.points) {
    const UltraNorm n = mu.n_mu(x);
    pieces.push_back(Piece{f.at(x).norm(p) * n, n, std::nullopt, x});
  }
  std::vector<long> exps;
  for (const Piece& pc : pieces) {
    if (!pc.weight.is_zero()) exps.push_back(*pc.weight.exponent);
  }
  std::sort(exps.begin(), exps.end());
  exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
  for (long e : exps) {
    IntegrabilityReport::Threshold t;
    t.epsilon_exponent = e;
    t.delta = UltraNorm::zero(p);
    bool first = true;
    for (const Piece& pc : pieces) {
      if (pc.weight.is_zero() || *pc.weight.exponent > e) continue;
      if (pc.ball) t.balls.push_back(*pc.ball);
      if (pc.point) t.points.push_back(*pc.point);
      if (first || pc.n < t.delta) t.delta = pc.n;
      first = false;
    }
    if (t.delta.is_zero()) rep.integrable = false;
    rep.thresholds.push_back(std::move(t));
  }
  return rep;
}

/// (mu * nu)(A) = (mu x nu)({(x,y) : x + y in A}) on the additive group G.
inline Measure convolve(const Measure& mu, const Measure& nu) {
  require_same(mu.ambient(), nu.ambient());
  if (mu.value_prime() != nu.value_prime()) {
    fail(ErrorKind::invalid_argument, "convolution of measures over different value primes");
  }
  const Ambient g = mu.ambient();
  const Decomposition& a = mu.decomposition();
  const Decomposition& b = nu.decomposition();
  const int level = std::max(a.level, b.level);
  const int depth = level + g.m0;
  const std::uint64_t order = pow_u64(g.r, depth);
  const Rational cell = rpow(g.r, -depth);
  const ValueShape shape = (MeasureValue::zero(mu.shape()) * MeasureValue::zero(nu.shape())).shape();

  auto refine = [&](const Decomposition& d) {
    std::map<std::uint64_t, MeasureValue> out;
    for (const auto& [atom, v] : d.density) {
      for (const Ball& c : ClopenSet::canonicalize(g, {atom}).refine(level)) out.emplace(c.index, v);
    }
    return out;
  };
  const auto fa = refine(a);
  const auto fb = refine(b);

  std::map<std::uint64_t, MeasureValue> dens;
  auto add = [&](std::uint64_t idx, MeasureValue v) {
    auto [it, fresh] = dens.emplace(idx, v);
    if (!fresh) it->second += v;
  };
  // Density value of a depth-D cell c: r^(-D) sum_a f_a g_(c-a).
  for (const auto& [i, u] : fa) {
    for (const auto& [j, v] : fb) add((i + j) % order, cell * (u * v));
  }
  // Density translated by a point mass.
  for (const auto& [i, u] : fa) {
    for (const auto& [y, m] : b.points) add((i + point_index(g, y, depth)) % order, u * m);
  }
  for (const auto& [x, m] : a.points) {
    for (const auto& [j, v] : fb) add((point_index(g, x, depth) + j) % order, m * v);
  }
  Decomposition out;
  out.level = level;
  for (auto& [idx, v] : dens) {
    if (!v.is_zero()) out.density.emplace(Ball{g, level, idx}, std::move(v));
  }
  for (const auto& [x, m] : a.points) {
    for (const auto& [y, n] : b.points) {
      auto [it, fresh] = out.points.emplace(x + y, m * n);
      if (!fresh) it->second += m * n;
    }
  }
  std::erase_if(out.points, [](const auto& kv) { return kv.second.is_zero(); });
  return Measure::from_decomposition(g, mu.value_prime(), shape, out);
}

}  // namespace pam
