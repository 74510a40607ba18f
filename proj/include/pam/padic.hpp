#pragma once

#include <string>

#include "pam/rational.hpp"

namespace pam {

/// Class of x modulo Z_(r), represented by the unique y in [0,1) with
/// denominator a power of r and x - y an r-adic integer.
struct FracClass {
  long r = 2;
  Rational value;

  friend bool operator==(const FracClass& a, const FracClass& b) {
    return a.r == b.r && a.value == b.value;
  }
};

inline void require_z_inv(const Rational& x, long r, const char* what) {
  if (!in_z_inv(x, r)) {
    fail(ErrorKind::domain, std::string(what) + " " + to_string(x) +
                                " is not in Z[1/" + std::to_string(r) + "]");
  }
}

/// Sum of the negative-power digits of the r-adic expansion of x.
inline FracClass frac_part(const Rational& x, long r) {
  require_prime(r, "residue prime");
  require_z_inv(x, r, "argument");
  const Integer& den = x.get_den();
  Integer rem;
  mpz_fdiv_r(rem.get_mpz_t(), x.get_num_mpz_t(), den.get_mpz_t());
  Rational value(rem, den);
  value.canonicalize();
  return FracClass{r, value};
}

/// Sum of two classes reduced back into [0,1).
inline FracClass operator+(const FracClass& a, const FracClass& b) {
  if (a.r != b.r) fail(ErrorKind::invalid_argument, "fractional classes over different primes");
  Rational s = a.value + b.value;
  if (s >= 1) s -= 1;
  return FracClass{a.r, s};
}

}  // namespace pam
