#pragma once

/**
 * Exact arithmetic in the cyclotomic fields Q(zeta_{r^M}).
 *
 * Elements are stored sparsely in the power basis zeta^0 .. zeta^{phi-1},
 * phi = (r-1) r^(M-1), reduced with
 *
 *     Phi_{r^M}(x) = sum_{j=0}^{r-1} x^{j r^(M-1)} = 0.
 *
 * Every element is kept at the smallest level M that contains it, so equality
 * is coefficientwise. Level 0 is Q; rationals carry r = 0 when no prime has
 * been attached yet and combine freely with elements of any prime.
 */

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <string>

#include "pam/padic.hpp"
#include "pam/rational.hpp"

namespace pam {

class Cyclotomic {
 public:
  using Coeffs = std::map<std::uint64_t, Rational>;

  Cyclotomic() = default;
  Cyclotomic(const Rational& q, long r = 0) : r_(r) {  // NOLINT(google-explicit-constructor)
    if (q != 0) coeffs_[0] = q;
  }
  Cyclotomic(long n) : Cyclotomic(Rational(n)) {}  // NOLINT(google-explicit-constructor)

  /// Builds sum c_k zeta_{r^level}^k from arbitrary exponents k >= 0.
  static Cyclotomic from_coeffs(long r, int level, const Coeffs& coeffs) {
    require_prime(r, "cyclotomic prime");
    if (level < 0) fail(ErrorKind::invalid_argument, "negative cyclotomic level");
    const std::uint64_t order = pow_u64(r, level);
    Coeffs folded;
    for (const auto& [k, c] : coeffs) {
      if (c != 0) folded[k % order] += c;
    }
    Cyclotomic out;
    out.r_ = r;
    out.level_ = level;
    out.coeffs_ = std::move(folded);
    out.reduce();
    return out;
  }

  /// zeta_{r^level}^exponent.
  static Cyclotomic zeta_power(long r, int level, std::uint64_t exponent) {
    return from_coeffs(r, level, Coeffs{{exponent, Rational(1)}});
  }

  long prime() const { return r_; }
  int level() const { return level_; }
  const Coeffs& coefficients() const { return coeffs_; }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_rational() const { return level_ == 0; }

  Rational to_rational() const {
    if (!is_rational()) fail(ErrorKind::invalid_argument, "cyclotomic element is not rational");
    auto it = coeffs_.find(0);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  Cyclotomic operator-() const {
    Cyclotomic out = *this;
    for (auto& [k, c] : out.coeffs_) c = -c;
    return out;
  }

  Cyclotomic& operator+=(const Cyclotomic& other) { return accumulate(other, 1); }
  Cyclotomic& operator-=(const Cyclotomic& other) { return accumulate(other, -1); }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }

  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.is_zero() || b.is_zero()) return Cyclotomic(Rational(0), common_prime(a, b));
    if (a.is_rational()) return b.scaled(a.to_rational(), a.r_);
    if (b.is_rational()) return a.scaled(b.to_rational(), b.r_);
    const long r = common_prime(a, b);
    const int level = std::max(a.level_, b.level_);
    const Coeffs lhs = a.lifted(level);
    const Coeffs rhs = b.lifted(level);
    const std::uint64_t order = pow_u64(r, level);
    Coeffs prod;
    for (const auto& [i, x] : lhs) {
      for (const auto& [j, y] : rhs) {
        prod[(i + j) % order] += x * y;
      }
    }
    Cyclotomic out;
    out.r_ = r;
    out.level_ = level;
    out.coeffs_ = std::move(prod);
    out.reduce();
    return out;
  }

  Cyclotomic& operator*=(const Cyclotomic& other) { return *this = *this * other; }

  Cyclotomic scaled(const Rational& q, long other_prime = 0) const {
    Cyclotomic out;
    out.r_ = r_ != 0 ? r_ : other_prime;
    if (q == 0) return out;
    out.level_ = level_;
    out.coeffs_ = coeffs_;
    for (auto& [k, c] : out.coeffs_) c *= q;
    return out;
  }

  /// Galois conjugate zeta -> zeta^k, k prime to r.
  Cyclotomic conjugate(std::uint64_t k) const {
    if (level_ == 0) return *this;
    if (k % static_cast<std::uint64_t>(r_) == 0) {
      fail(ErrorKind::invalid_argument, "conjugation exponent must be prime to r");
    }
    const std::uint64_t order = pow_u64(r_, level_);
    Coeffs moved;
    for (const auto& [e, c] : coeffs_) {
      moved[static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(e) * k) % order)] += c;
    }
    return from_coeffs(r_, level_, moved);
  }

  /// Multiplicative inverse, computed down the tower of relative norms
  /// Q(zeta_{r^M}) / Q(zeta_{r^(M-1)}).
  Cyclotomic inverse() const {
    if (is_zero()) fail(ErrorKind::division_by_zero, "inverse of zero cyclotomic element");
    if (level_ == 0) return Cyclotomic(Rational(1) / to_rational(), r_);
    // The automorphisms fixing the next level down.
    Cyclotomic cofactor(Rational(1), r_);
    if (level_ == 1) {
      for (std::uint64_t k = 2; k < static_cast<std::uint64_t>(r_); ++k) cofactor *= conjugate(k);
    } else {
      const std::uint64_t step = pow_u64(r_, level_ - 1);
      for (std::uint64_t j = 1; j < static_cast<std::uint64_t>(r_); ++j) {
        cofactor *= conjugate(1 + j * step);
      }
    }
    const Cyclotomic norm = *this * cofactor;
    if (norm.level_ >= level_) {
      throw IdentityFailure("relative norm did not descend in the cyclotomic tower");
    }
    return cofactor * norm.inverse();
  }

  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.level_ != b.level_) return false;
    if (a.level_ > 0 && a.r_ != b.r_) return false;
    return a.coeffs_ == b.coeffs_;
  }

 private:
  static long common_prime(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.r_ != 0 && b.r_ != 0 && a.r_ != b.r_ && a.level_ > 0 && b.level_ > 0) {
      fail(ErrorKind::invalid_argument, "cyclotomic elements over different primes");
    }
    if (a.level_ > 0) return a.r_;
    if (b.level_ > 0) return b.r_;
    return a.r_ != 0 ? a.r_ : b.r_;
  }

  Cyclotomic& accumulate(const Cyclotomic& other, int sign) {
    const long r = common_prime(*this, other);
    if (other.is_zero()) {
      r_ = r;
      return *this;
    }
    const int level = std::max(level_, other.level_);
    Coeffs sum = lifted(level);
    for (const auto& [k, c] : other.lifted(level)) {
      if (sign > 0) {
        sum[k] += c;
      } else {
        sum[k] -= c;
      }
    }
    r_ = r;
    level_ = level;
    coeffs_ = std::move(sum);
    reduce();
    return *this;
  }

  /// Coefficients re-expressed at a higher level: zeta_{r^M} = zeta_{r^N}^{r^(N-M)}.
  Coeffs lifted(int level) const {
    if (level == level_ || level_ == 0) return coeffs_;
    const std::uint64_t stride = pow_u64(r_, level - level_);
    Coeffs out;
    for (const auto& [k, c] : coeffs_) out[k * stride] = c;
    return out;
  }

  void reduce() {
    if (level_ > 0) {
      const std::uint64_t order = pow_u64(r_, level_);
      const std::uint64_t step = order / static_cast<std::uint64_t>(r_);
      const std::uint64_t phi = order - step;
      while (!coeffs_.empty() && coeffs_.rbegin()->first >= phi) {
        auto top = std::prev(coeffs_.end());
        const std::uint64_t e = top->first;
        const Rational c = top->second;
        coeffs_.erase(top);
        if (c == 0) continue;
        for (long j = 0; j + 1 < r_; ++j) {
          coeffs_[e - phi + static_cast<std::uint64_t>(j) * step] -= c;
        }
      }
    }
    std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0; });
    // Drop to the smallest subfield containing the element.
    while (level_ > 0) {
      bool divisible = true;
      for (const auto& [k, c] : coeffs_) {
        if (k % static_cast<std::uint64_t>(r_) != 0) {
          divisible = false;
          break;
        }
      }
      if (!divisible) break;
      Coeffs down;
      for (const auto& [k, c] : coeffs_) down[k / static_cast<std::uint64_t>(r_)] = c;
      coeffs_ = std::move(down);
      --level_;
    }
  }

  long r_ = 0;
  int level_ = 0;
  Coeffs coeffs_;
};

inline bool is_zero(const Cyclotomic& x) { return x.is_zero(); }
inline bool is_zero(const Rational& x) { return x == 0; }

/// zeta_{r^M}^a for e = a / r^M in lowest terms.
inline Cyclotomic root_of_unity(const FracClass& e) {
  if (e.value < 0 || e.value >= 1) {
    fail(ErrorKind::invalid_argument, "fractional class outside [0,1)");
  }
  require_z_inv(e.value, e.r, "fractional class");
  if (e.value == 0) return Cyclotomic(Rational(1), e.r);
  const long level = int_valuation(e.value.get_den(), e.r);
  return Cyclotomic::zeta_power(e.r, static_cast<int>(level), e.value.get_num().get_ui());
}

}  // namespace pam
