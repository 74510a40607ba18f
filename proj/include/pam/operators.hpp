#pragma once

/**
 * Finitely supported vectors and matrices over K, standing in for c_0(omega, K)
 * and the compact operators on it.
 */

#include <cstdint>
#include <map>
#include <utility>

#include "pam/measure.hpp"

namespace pam {

class FinVector {
 public:
  using Entries = std::map<std::uint64_t, Rational>;

  FinVector(long p, const Entries& entries) : p_(p) {
    require_prime(p_, "value prime p");
    for (const auto& [i, v] : entries) {
      if (v != 0) entries_.emplace(i, v);
    }
  }

  /// The basis vector e_i.
  static FinVector unit(long p, std::uint64_t i) { return FinVector(p, {{i, Rational(1)}}); }

  long prime() const { return p_; }
  const Entries& entries() const { return entries_; }

  Rational at(std::uint64_t i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? Rational(0) : it->second;
  }

  UltraNorm norm() const {
    UltraNorm out = UltraNorm::zero(p_);
    for (const auto& [i, v] : entries_) out = max(out, UltraNorm{p_, valuation(v, p_)});
    return out;
  }

  friend bool operator==(const FinVector&, const FinVector&) = default;

 private:
  long p_;
  Entries entries_;
};

class FinMatrix {
 public:
  using Index = std::pair<std::uint64_t, std::uint64_t>;
  using Entries = std::map<Index, Rational>;

  FinMatrix(long p, const Entries& entries) : p_(p) {
    require_prime(p_, "value prime p");
    for (const auto& [ij, v] : entries) {
      if (v != 0) entries_.emplace(ij, v);
    }
  }

  static FinMatrix identity(long p, std::uint64_t n) {
    Entries e;
    for (std::uint64_t i = 0; i < n; ++i) e.emplace(Index{i, i}, Rational(1));
    return FinMatrix(p, e);
  }

  long prime() const { return p_; }
  const Entries& entries() const { return entries_; }

  Rational at(std::uint64_t i, std::uint64_t j) const {
    auto it = entries_.find(Index{i, j});
    return it == entries_.end() ? Rational(0) : it->second;
  }

  FinMatrix linear_combination(const Rational& a, const FinMatrix& other, const Rational& b) const {
    require_same_prime(other);
    Entries e;
    for (const auto& [ij, v] : entries_) e[ij] += a * v;
    for (const auto& [ij, v] : other.entries_) e[ij] += b * v;
    return FinMatrix(p_, e);
  }

  friend bool operator==(const FinMatrix&, const FinMatrix&) = default;

 private:
  void require_same_prime(const FinMatrix& other) const {
    if (p_ != other.p_) fail(ErrorKind::invalid_argument, "matrices over different value primes");
  }

  long p_;
  Entries entries_;
};

namespace detail {

inline void require_same_prime(long a, long b) {
  if (a != b) fail(ErrorKind::invalid_argument, "vectors over different value primes");
}

}  // namespace detail

/// (a, b) = sum_j a_j b_j.
inline Rational pairing(const FinVector& a, const FinVector& b) {
  detail::require_same_prime(a.prime(), b.prime());
  Rational out = 0;
  for (const auto& [j, v] : a.entries()) out += v * b.at(j);
  return out;
}

/// [a, b] with entries a_l b_j.
inline FinMatrix rank_one(const FinVector& a, const FinVector& b) {
  detail::require_same_prime(a.prime(), b.prime());
  FinMatrix::Entries e;
  for (const auto& [l, x] : a.entries()) {
    for (const auto& [j, y] : b.entries()) e.emplace(FinMatrix::Index{l, j}, x * y);
  }
  return FinMatrix(a.prime(), e);
}

inline Rational trace(const FinMatrix& f) {
  Rational out = 0;
  for (const auto& [ij, v] : f.entries()) {
    if (ij.first == ij.second) out += v;
  }
  return out;
}

/// [W(F)]_{i,j} = F_{j,i}.
inline FinMatrix transpose(const FinMatrix& f) {
  FinMatrix::Entries e;
  for (const auto& [ij, v] : f.entries()) e.emplace(FinMatrix::Index{ij.second, ij.first}, v);
  return FinMatrix(f.prime(), e);
}

/// sup_{i,j} |F_{i,j}|_p, which for finite support is the operator norm on c_0.
inline UltraNorm op_norm(const FinMatrix& f) {
  UltraNorm out = UltraNorm::zero(f.prime());
  for (const auto& [ij, v] : f.entries()) out = max(out, UltraNorm{f.prime(), valuation(v, f.prime())});
  return out;
}

/// A -> Tr mu(A) for a Mat_n-valued measure.
inline Measure trace_measure(const Measure& mu) {
  if (mu.shape().kind != ValueShape::Kind::matrix) {
    fail(ErrorKind::invalid_argument, "trace_measure needs a matrix-valued measure, got " +
                                          mu.shape().to_string());
  }
  return mu.pushforward_values(LinearValueMap::trace(mu.shape().n));
}

}  // namespace pam
