#pragma once

/**
 * Exact rationals and non-archimedean norms.
 *
 * Rationals are GMP `mpq_class` values kept in canonical form (reduced,
 * positive denominator, zero is 0/1). Norms are never materialized as
 * floating point: an `UltraNorm` stores the exponent v of |x|_p = p^(-v),
 * so comparing norms is comparing integers.
 */

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "pam/error.hpp"

namespace pam {

using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline void require_prime(long p, const char* what) {
  if (!is_prime(p)) {
    fail(ErrorKind::invalid_argument,
         std::string(what) + " must be prime, got " + std::to_string(p));
  }
}

/// n/d in canonical form; the two-argument mpq_class constructor does not reduce.
inline Rational ratio(long n, long d) {
  if (d == 0) fail(ErrorKind::division_by_zero, "zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(10); }

/// Parses "n" or "n/d" (optional leading sign on n). Rejects anything else,
/// including zero denominators.
inline Rational parse_rational(std::string_view text) {
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  const std::size_t num_begin = i;
  while (i < text.size() && is_digit(text[i])) ++i;
  bool ok = i > num_begin;
  std::size_t den_begin = text.size();
  if (ok && i < text.size()) {
    ok = text[i] == '/';
    den_begin = ++i;
    while (i < text.size() && is_digit(text[i])) ++i;
    ok = ok && i > den_begin && i == text.size();
  }
  if (!ok) {
    fail(ErrorKind::schema, "malformed rational '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s[0] == '+') s.erase(0, 1);
  if (den_begin < text.size() && Integer(std::string(text.substr(den_begin))) == 0) {
    fail(ErrorKind::schema, "zero denominator in '" + std::string(text) + "'");
  }
  Rational q(s, 10);
  q.canonicalize();
  return q;
}

inline Integer ipow(long base, unsigned long e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), e);
  return out;
}

/// base^e as a machine word; throws when it would exceed 2^62.
inline std::uint64_t pow_u64(long base, long e) {
  if (e < 0) fail(ErrorKind::invalid_argument, "negative exponent in pow_u64");
  std::uint64_t out = 1;
  constexpr std::uint64_t limit = std::uint64_t{1} << 62;
  for (long k = 0; k < e; ++k) {
    if (out > limit / static_cast<std::uint64_t>(base)) {
      fail(ErrorKind::invalid_argument, "ball depth too large for the index width");
    }
    out *= static_cast<std::uint64_t>(base);
  }
  return out;
}

/// r^e for any integer e, as an exact rational.
inline Rational rpow(long r, long e) {
  if (e >= 0) return Rational(ipow(r, static_cast<unsigned long>(e)));
  return Rational(Integer(1), ipow(r, static_cast<unsigned long>(-e)));
}

/// Exponent of p in a nonzero integer.
inline long int_valuation(const Integer& n, long p) {
  if (n == 0) fail(ErrorKind::domain, "valuation of zero integer");
  Integer rest;
  Integer prime(p);
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

/// v_p(x) for nonzero x.
inline long valuation(const Rational& x, long p) {
  return int_valuation(x.get_num(), p) - int_valuation(x.get_den(), p);
}

/// True iff the denominator of x is a power of r, i.e. x lies in Z[1/r].
inline bool in_z_inv(const Rational& x, long r) {
  Integer rest;
  Integer prime(r);
  mpz_remove(rest.get_mpz_t(), x.get_den_mpz_t(), prime.get_mpz_t());
  return rest == 1;
}

inline std::optional<Rational> exact_sqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  if (mpz_perfect_square_p(x.get_num_mpz_t()) == 0 ||
      mpz_perfect_square_p(x.get_den_mpz_t()) == 0) {
    return std::nullopt;
  }
  Integer n;
  Integer d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  Rational out(n, d);
  out.canonicalize();
  return out;
}

/**
 * A value of the p-adic norm, |x|_p = base^(-exponent). An absent exponent
 * encodes +infinity, i.e. the norm of zero.
 */
struct UltraNorm {
  long base = 2;
  std::optional<long> exponent;

  static UltraNorm zero(long base) { return UltraNorm{base, std::nullopt}; }
  static UltraNorm unit(long base) { return UltraNorm{base, 0L}; }

  bool is_zero() const { return !exponent.has_value(); }

  Rational value() const {
    if (is_zero()) return Rational(0);
    return rpow(base, -*exponent);
  }

  UltraNorm operator*(const UltraNorm& other) const {
    if (is_zero() || other.is_zero()) return zero(base);
    return UltraNorm{base, *exponent + *other.exponent};
  }

  friend bool operator==(const UltraNorm& a, const UltraNorm& b) {
    return a.base == b.base && a.exponent == b.exponent;
  }

  /// Orders by the size of the norm: zero is smallest, larger exponents are
  /// smaller norms.
  friend std::strong_ordering operator<=>(const UltraNorm& a, const UltraNorm& b) {
    if (a.is_zero() || b.is_zero()) {
      return static_cast<int>(!a.is_zero()) <=> static_cast<int>(!b.is_zero());
    }
    return *b.exponent <=> *a.exponent;
  }
};

inline UltraNorm max(const UltraNorm& a, const UltraNorm& b) { return a < b ? b : a; }

/// |x|_p as an exponent.
inline UltraNorm padic_valuation(const Rational& x, long p) {
  require_prime(p, "valuation prime");
  if (x == 0) return UltraNorm::zero(p);
  return UltraNorm{p, valuation(x, p)};
}

/// Norm of the form base^(-exponent) with a rational exponent; produced by the
/// L^q seminorms, which take q-th roots.
struct RootNorm {
  long base = 2;
  std::optional<Rational> exponent;

  bool is_zero() const { return !exponent.has_value(); }

  friend bool operator==(const RootNorm& a, const RootNorm& b) {
    return a.base == b.base && a.exponent == b.exponent;
  }
};

}  // namespace pam
