#pragma once

/**
 * Additive characters chi_s(x) = zeta^{frac(s x)} of Q_r with exact values in
 * Q(zeta_{r^M}), characteristic functionals of measures, and stationary
 * processes eta(t) = sum_k chi(t y_k) xi_k synthesized from a finite spectral
 * measure sum_k m_k delta_{y_k}.
 */

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pam/linalg.hpp"
#include "pam/stochastic.hpp"

namespace pam {

inline Cyclotomic character_eval(const Rational& s, const Rational& x, long r, long p) {
  require_prime(p, "value prime p");
  if (r == p) fail(ErrorKind::invalid_argument, "characters need gcd(r,p) = 1");
  return root_of_unity(frac_part(s * x, r));
}

/// mu^(s) = integral of chi_s over G; chi_s is constant on balls of level
/// max(-m0, -v_r(s)).
inline Cyclotomic char_functional(const Measure& mu, const Rational& s) {
  if (!(mu.shape() == ValueShape::scalar())) {
    fail(ErrorKind::invalid_argument, "characteristic functional needs a scalar measure");
  }
  const Ambient& g = mu.ambient();
  const long p = mu.value_prime();
  require_z_inv(s, g.r, "frequency");
  const Decomposition& d = mu.decomposition();
  int level = -g.m0;
  if (s != 0) level = std::max(level, static_cast<int>(-valuation(s, g.r)));
  level = std::max(level, d.level);
  Cyclotomic out(Rational(0), g.r);
  const Rational cell = rpow(g.r, -(level + g.m0));
  for (const auto& [a, v] : d.density) {
    for (const Ball& c : single(a).refine(level)) {
      out += character_eval(s, c.center(), g.r, p).scaled(cell * v.scalar_value());
    }
  }
  for (const auto& [x, v] : d.points) out += character_eval(s, x, g.r, p).scaled(v.scalar_value());
  return out;
}

struct SpectralSpec {
  long r = 3;
  long p = 5;
  std::vector<Rational> frequencies;
  std::vector<Rational> masses;
};

inline void validate(const SpectralSpec& spec) {
  require_prime(spec.r, "space prime r");
  require_prime(spec.p, "value prime p");
  if (spec.r == spec.p) fail(ErrorKind::invalid_argument, "spectral specs need gcd(r,p) = 1");
  if (spec.frequencies.empty() || spec.frequencies.size() != spec.masses.size()) {
    fail(ErrorKind::invalid_argument, "spectral spec needs one mass per frequency");
  }
  for (std::size_t i = 0; i < spec.frequencies.size(); ++i) {
    require_z_inv(spec.frequencies[i], spec.r, "frequency");
    for (std::size_t j = 0; j < i; ++j) {
      if (spec.frequencies[i] == spec.frequencies[j]) fail(ErrorKind::invalid_argument, "frequencies must be distinct");
    }
    if (spec.masses[i] == 0) fail(ErrorKind::invalid_argument, "spectral masses must be nonzero");
    if (!exact_sqrt(spec.masses[i])) {
      fail(ErrorKind::non_square_atom, "spectral mass " + to_string(spec.masses[i]) + " is not a rational square");
    }
  }
}

/// The smallest ball r^(-m0) Z_r holding every point.
inline Ambient ambient_for(long r, const std::vector<Rational>& points) {
  int m0 = 0;
  for (const Rational& y : points) {
    if (y != 0) m0 = std::max(m0, static_cast<int>(-valuation(y, r)));
  }
  return Ambient{r, m0};
}

/// Least level at which the balls around distinct points are disjoint.
inline int separation_level(const Ambient& g, const std::vector<Rational>& points) {
  int level = -g.m0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] != points[j]) {
        level = std::max(level, static_cast<int>(valuation(points[i] - points[j], g.r)) + 1);
      }
    }
  }
  return level;
}

inline Measure spectral_measure(const SpectralSpec& spec, const Ambient& g) {
  Measure::Atoms atoms;
  for (std::size_t k = 0; k < spec.frequencies.size(); ++k) {
    atoms.emplace(spec.frequencies[k], MeasureValue::scalar(spec.masses[k]));
  }
  return Measure::atomic(g, spec.p, ValueShape::scalar(), std::move(atoms));
}

class StationaryProcess {
 public:
  StationaryProcess(SpectralSpec spec, OrthStochMeasure xi) : spec_(std::move(spec)), xi_(std::move(xi)) {
    for (const Rational& y : spec_.frequencies) {
      xi_k_.push_back(xi_.of(ball_at(xi_.ambient(), y, xi_.level())));
    }
  }

  const SpectralSpec& spec() const { return spec_; }
  const OrthStochMeasure& xi() const { return xi_; }
  /// xi of the atom holding the k-th frequency.
  const RandomVariable& xi_k(std::size_t k) const { return xi_k_.at(k); }

  RandomVariable sample(const Rational& t) const {
    RandomVariable out(xi_.space());
    for (std::size_t k = 0; k < xi_k_.size(); ++k) {
      out += character_eval(t, spec_.frequencies[k], spec_.r, spec_.p) * xi_k_[k];
    }
    return out;
  }

 private:
  SpectralSpec spec_;
  OrthStochMeasure xi_;
  std::vector<RandomVariable> xi_k_;
};

inline StationaryProcess synthesize(const SpectralSpec& spec) {
  validate(spec);
  const Ambient g = ambient_for(spec.r, spec.frequencies);
  const int level = separation_level(g, spec.frequencies);
  return StationaryProcess(spec, build_orthogonal_measure(spectral_measure(spec, g), level));
}

/// B(t, q) = M(eta(t) eta(q)) with the bilinear pairing.
inline Cyclotomic covariance(const StationaryProcess& proc, const Rational& t, const Rational& q) {
  return (proc.sample(t) * proc.sample(q)).expectation();
}

/// t_i = i r^(-M), i = 0 .. K-1, where M separates the candidates; the
/// character matrix is then a Vandermonde matrix in distinct roots of unity.
inline std::vector<Rational> auto_times(long r, const std::vector<Rational>& candidates) {
  const Ambient g = ambient_for(r, candidates);
  const int m = std::max(0, separation_level(g, candidates));
  std::vector<Rational> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) out.push_back(Rational(static_cast<long>(i)) * rpow(r, -m));
  return out;
}

struct Recovery {
  std::vector<Rational> times;
  std::vector<Rational> candidates;
  std::vector<Cyclotomic> masses;
  bool masses_rational = true;
  bool consistent = true;  // predicted covariances match at extra times
  Ambient ambient;
  int level = 0;
  std::map<Ball, RandomVariable> xi_hat;  // on candidate-holding balls
  MReport m_conditions;
  std::vector<std::string> failures;
};

namespace detail {

inline DenseMatrix<Cyclotomic> character_matrix(const SpectralSpec& spec, const std::vector<Rational>& times,
                                                const std::vector<Rational>& candidates) {
  DenseMatrix<Cyclotomic> x(times.size(), std::vector<Cyclotomic>(candidates.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t k = 0; k < candidates.size(); ++k) x[i][k] = character_eval(times[i], candidates[k], spec.r, spec.p);
  }
  return x;
}

}  // namespace detail

/**
 * Recovers the spectral masses from covariances B(t_i, 0) = sum_k chi(t_i y_k) m_k
 * and the stochastic measure as xi^(A) = sum_i alpha_i eta(t_i) with
 * sum_i alpha_i chi(t_i y_k) = [y_k in A], then checks the M-conditions of
 * xi^ against the recovered masses.
 */
inline Recovery spectral_recover(const StationaryProcess& proc, const std::vector<Rational>& candidates,
                                 std::optional<std::vector<Rational>> times = std::nullopt) {
  const SpectralSpec& spec = proc.spec();
  Recovery rec;
  rec.candidates = candidates;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    require_z_inv(candidates[i], spec.r, "candidate");
    for (std::size_t j = 0; j < i; ++j) {
      if (candidates[i] == candidates[j]) fail(ErrorKind::invalid_argument, "candidates must be distinct");
    }
  }
  rec.times = times ? *times : auto_times(spec.r, candidates);
  if (rec.times.size() != candidates.size()) {
    fail(ErrorKind::times_degenerate, "need exactly one time per candidate frequency");
  }
  const auto x = detail::character_matrix(spec, rec.times, candidates);
  const RandomVariable eta0 = proc.sample(0);
  std::vector<RandomVariable> eta;
  std::vector<Cyclotomic> b;
  for (const Rational& t : rec.times) {
    eta.push_back(proc.sample(t));
    b.push_back((eta.back() * eta0).expectation());
  }
  const auto m = bareiss_solve(x, b);
  if (!m) fail(ErrorKind::times_degenerate, "character matrix is singular for these times");
  rec.masses = *m;
  for (const Cyclotomic& c : rec.masses) rec.masses_rational = rec.masses_rational && c.is_rational();

  // Extra times beyond the solve.
  std::vector<Rational> check_times = rec.times;
  const int sep = std::max(0, separation_level(ambient_for(spec.r, candidates), candidates));
  for (std::size_t i = candidates.size(); i < candidates.size() + 2; ++i) {
    check_times.push_back(Rational(static_cast<long>(i)) * rpow(spec.r, -sep));
  }
  for (const Rational& t : check_times) {
    Cyclotomic predicted(Rational(0), spec.r);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      predicted += character_eval(t, candidates[k], spec.r, spec.p) * rec.masses[k];
    }
    if (!(predicted == covariance(proc, t, 0))) {
      rec.consistent = false;
      rec.failures.push_back("covariance at t = " + to_string(t) + " disagrees with the recovered masses");
    }
  }
  if (!rec.masses_rational) {
    rec.failures.push_back("recovered masses are not rational");
    return rec;
  }

  // xi^ on balls of the candidate ball ring.
  rec.ambient = ambient_for(spec.r, candidates);
  rec.level = separation_level(rec.ambient, candidates);
  DenseMatrix<Cyclotomic> xt(candidates.size(), std::vector<Cyclotomic>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t k = 0; k < candidates.size(); ++k) xt[k][i] = x[i][k];
  }
  auto xi_hat = [&](const Ball& a) {
    std::vector<Cyclotomic> e(candidates.size());
    bool any = false;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const bool in = ball_contains(a, candidates[k]);
      e[k] = Cyclotomic(in ? 1 : 0);
      any = any || in;
    }
    RandomVariable out(proc.xi().space());
    if (!any) return out;
    const auto alpha = bareiss_solve(xt, e);
    if (!alpha) fail(ErrorKind::times_degenerate, "character matrix is singular for these times");
    for (std::size_t i = 0; i < alpha->size(); ++i) out += (*alpha)[i] * eta[i];
    return out;
  };
  Measure::Atoms atoms;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!rec.masses[k].is_zero()) atoms.emplace(candidates[k], MeasureValue::scalar(rec.masses[k].to_rational()));
  }
  const Measure recovered = Measure::atomic(rec.ambient, spec.p, ValueShape::scalar(), std::move(atoms));
  std::vector<Ball> balls;
  for (int lvl = -rec.ambient.m0; lvl <= rec.level; ++lvl) {
    std::set<Ball> here;
    for (const Rational& y : candidates) here.insert(ball_at(rec.ambient, y, lvl));
    balls.insert(balls.end(), here.begin(), here.end());
  }
  std::map<Ball, RandomVariable> cache;
  auto cached = [&](const Ball& a) -> RandomVariable {
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, xi_hat(a)).first;
    return it->second;
  };
  rec.m_conditions = verify_m_conditions_on(balls, rec.level, recovered, proc.xi().space(), cached);
  for (const Ball& a : balls) rec.xi_hat.emplace(a, cached(a));
  for (const std::string& f : rec.m_conditions.failures) rec.failures.push_back(f);
  return rec;
}

}  // namespace pam
