#pragma once

/**
 * Finite product probability spaces with K-valued probabilities, and random
 * variables on them.
 *
 * Omega is the product of finitely many factors; factor i has outcomes
 * 0 .. n_i - 1 with masses P_i(o). A random variable is stored as a
 * polynomial in the outcome indicators I_{i,o} for o >= 1 (the indicator of
 * outcome 0 is 1 - sum_{o>=1} I_{i,o}). Products of indicators over distinct
 * factors form a basis of the functions on Omega, so two random variables
 * agree at every outcome iff their polynomials are equal.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pam/cyclotomic.hpp"

namespace pam {

struct Factor {
  std::vector<std::string> labels;
  std::vector<Rational> masses;
};

class FiniteProbSpace {
 public:
  /// Checks sum P_i = 1 and |P_i(o)|_p <= 1 per factor; together these give
  /// P(Omega) = 1 and ||P|| = 1.
  FiniteProbSpace(long p, std::vector<Factor> factors) : p_(p), factors_(std::move(factors)) {
    require_prime(p_, "value prime p");
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const Factor& f = factors_[i];
      if (f.masses.empty() || f.masses.size() != f.labels.size()) {
        fail(ErrorKind::invalid_argument, "factor " + std::to_string(i) + " needs one label per mass");
      }
      Rational total = 0;
      for (const Rational& m : f.masses) {
        total += m;
        if (m != 0 && valuation(m, p_) < 0) {
          fail(ErrorKind::invalid_argument, "factor " + std::to_string(i) + " has a mass of p-adic norm > 1: " +
                                                to_string(m));
        }
      }
      if (total != 1) fail(ErrorKind::invalid_argument, "factor " + std::to_string(i) + " masses do not sum to 1");
    }
  }

  /// n independent fair signs: outcome 0 is +1, outcome 1 is -1.
  static std::shared_ptr<const FiniteProbSpace> rademacher(long p, std::size_t n) {
    if (p == 2) {
      fail(ErrorKind::unsupported_prime,
           "fair signs need |1/2|_p = 1; for p = 2 supply custom probability factors");
    }
    const Rational half(1, 2);
    return std::make_shared<const FiniteProbSpace>(
        p, std::vector<Factor>(n, Factor{{"+1", "-1"}, {half, half}}));
  }

  long prime() const { return p_; }
  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }

  const Rational& mass(std::size_t factor, std::size_t outcome) const {
    return factors_.at(factor).masses.at(outcome);
  }

  friend bool operator==(const FiniteProbSpace& a, const FiniteProbSpace& b) {
    if (a.p_ != b.p_ || a.factors_.size() != b.factors_.size()) return false;
    for (std::size_t i = 0; i < a.factors_.size(); ++i) {
      if (a.factors_[i].labels != b.factors_[i].labels || a.factors_[i].masses != b.factors_[i].masses) {
        return false;
      }
    }
    return true;
  }

 private:
  long p_;
  std::vector<Factor> factors_;
};

using SpacePtr = std::shared_ptr<const FiniteProbSpace>;

class RandomVariable {
 public:
  /// Sorted (factor, outcome >= 1) pairs over distinct factors.
  using Monomial = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  using Terms = std::map<Monomial, Cyclotomic>;

  explicit RandomVariable(SpacePtr space) : space_(std::move(space)) {}

  static RandomVariable constant(SpacePtr space, const Cyclotomic& c) {
    RandomVariable out(std::move(space));
    if (!c.is_zero()) out.terms_.emplace(Monomial{}, c);
    return out;
  }

  /// The indicator of {omega : omega_factor = outcome}.
  static RandomVariable indicator(SpacePtr space, std::uint32_t factor, std::uint32_t outcome) {
    const std::size_t n = space->factors().at(factor).masses.size();
    if (outcome >= n) fail(ErrorKind::invalid_argument, "outcome index out of range");
    RandomVariable out(space);
    if (outcome > 0) {
      out.terms_.emplace(Monomial{{factor, outcome}}, Cyclotomic(1));
      return out;
    }
    out.terms_.emplace(Monomial{}, Cyclotomic(1));
    for (std::uint32_t o = 1; o < n; ++o) out.terms_.emplace(Monomial{{factor, o}}, Cyclotomic(-1));
    return out;
  }

  /// s = 1 - 2 I_{factor,1} on a two-outcome factor.
  static RandomVariable sign(SpacePtr space, std::uint32_t factor) {
    if (space->factors().at(factor).masses.size() != 2) {
      fail(ErrorKind::invalid_argument, "sign variable needs a two-outcome factor");
    }
    RandomVariable out(std::move(space));
    out.terms_.emplace(Monomial{}, Cyclotomic(1));
    out.terms_.emplace(Monomial{{factor, 1}}, Cyclotomic(-2));
    return out;
  }

  const SpacePtr& space() const { return space_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// M(xi) = sum_omega xi(omega) P({omega}).
  Cyclotomic expectation() const {
    Cyclotomic out;
    for (const auto& [mono, c] : terms_) {
      Rational prob = 1;
      for (const auto& [f, o] : mono) prob *= space_->mass(f, o);
      out += c.scaled(prob);
    }
    return out;
  }

  Cyclotomic evaluate(const std::vector<std::uint32_t>& omega) const {
    if (omega.size() != space_->size()) fail(ErrorKind::invalid_argument, "outcome tuple has the wrong length");
    Cyclotomic out;
    for (const auto& [mono, c] : terms_) {
      bool active = true;
      for (const auto& [f, o] : mono) active = active && omega[f] == o;
      if (active) out += c;
    }
    return out;
  }

  /// Factors the variable actually depends on.
  std::vector<std::uint32_t> touched_factors() const {
    std::vector<std::uint32_t> out;
    for (const auto& [mono, c] : terms_) {
      for (const auto& [f, o] : mono) out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  RandomVariable& operator+=(const RandomVariable& other) {
    require_same_space(other);
    for (const auto& [mono, c] : other.terms_) add_term(mono, c);
    return *this;
  }

  RandomVariable& operator-=(const RandomVariable& other) {
    require_same_space(other);
    for (const auto& [mono, c] : other.terms_) add_term(mono, -c);
    return *this;
  }

  friend RandomVariable operator+(RandomVariable a, const RandomVariable& b) { return a += b; }
  friend RandomVariable operator-(RandomVariable a, const RandomVariable& b) { return a -= b; }

  friend RandomVariable operator*(const Cyclotomic& k, const RandomVariable& x) {
    RandomVariable out(x.space_);
    if (k.is_zero()) return out;
    for (const auto& [mono, c] : x.terms_) out.terms_.emplace(mono, k * c);
    return out;
  }

  friend RandomVariable operator*(const RandomVariable& a, const RandomVariable& b) {
    a.require_same_space(b);
    RandomVariable out(a.space_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial merged;
        if (multiply(ma, mb, merged)) out.add_term(merged, ca * cb);
      }
    }
    return out;
  }

  /// Pointwise equality on Omega.
  friend bool operator==(const RandomVariable& a, const RandomVariable& b) {
    return same_space(a, b) && a.terms_ == b.terms_;
  }

 private:
  static bool same_space(const RandomVariable& a, const RandomVariable& b) {
    return a.space_ == b.space_ || *a.space_ == *b.space_;
  }

  void require_same_space(const RandomVariable& other) const {
    if (!same_space(*this, other)) fail(ErrorKind::invalid_argument, "random variables on different spaces");
  }

  void add_term(const Monomial& mono, const Cyclotomic& c) {
    auto [it, fresh] = terms_.emplace(mono, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    } else if (c.is_zero()) {
      terms_.erase(it);
    }
  }

  /// I_{f,a} I_{f,b} = [a = b] I_{f,a}; false when the product vanishes.
  static bool multiply(const Monomial& a, const Monomial& b, Monomial& out) {
    out.clear();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.push_back(b[j++]);
      } else {
        if (a[i].second != b[j].second) return false;
        out.push_back(a[i]);
        ++i;
        ++j;
      }
    }
    return true;
  }

  SpacePtr space_;
  Terms terms_;
};

/// Enumerates the outcomes of the factors x depends on and sums
/// x(omega) P(omega). Independent of the polynomial expectation; limited to
/// 2^20 outcomes.
inline Cyclotomic expectation_by_enumeration(const RandomVariable& x) {
  const auto touched = x.touched_factors();
  const FiniteProbSpace& space = *x.space();
  std::uint64_t count = 1;
  for (auto f : touched) {
    count *= space.factors()[f].masses.size();
    if (count > (std::uint64_t{1} << 20)) {
      fail(ErrorKind::invalid_argument, "too many outcomes to enumerate");
    }
  }
  std::vector<std::uint32_t> omega(space.size(), 0);
  Cyclotomic out;
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t rest = k;
    Rational prob = 1;
    for (auto f : touched) {
      const std::size_t n = space.factors()[f].masses.size();
      omega[f] = static_cast<std::uint32_t>(rest % n);
      rest /= n;
      prob *= space.mass(f, omega[f]);
    }
    // Untouched factors sum out to total mass 1.
    out += x.evaluate(omega).scaled(prob);
  }
  return out;
}

}  // namespace pam
