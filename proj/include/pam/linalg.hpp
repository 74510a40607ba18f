#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pam/cyclotomic.hpp"

namespace pam {

/// Dense row-major square system over an exact field.
template <typename Field>
using DenseMatrix = std::vector<std::vector<Field>>;

/*
 * Fraction-free (Bareiss) elimination on the augmented matrix [A | b].
 *
 * Every division by the previous pivot is exact, so entries stay in the ring
 * generated by the input when that ring is a domain; over a field it is plain
 * elimination with one deferred division per step. Pivots are chosen by an
 * exact nonzero test. Returns nullopt when A is singular.
 *
 * Field needs +, -, *, / and a free function is_zero(const Field&).
 */
template <typename Field>
std::optional<std::vector<Field>> bareiss_solve(DenseMatrix<Field> a, std::vector<Field> b) {
  const std::size_t n = a.size();
  if (b.size() != n) fail(ErrorKind::invalid_argument, "right-hand side length mismatch");
  for (const auto& row : a) {
    if (row.size() != n) fail(ErrorKind::invalid_argument, "matrix is not square");
  }
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);

  Field prev(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && is_zero(a[pivot][k])) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != k) std::swap(a[pivot], a[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
      }
      a[i][k] = Field(0);
    }
    prev = a[k][k];
  }

  std::vector<Field> x(n, Field(0));
  for (std::size_t i = n; i-- > 0;) {
    Field acc = a[i][n];
    for (std::size_t j = i + 1; j < n; ++j) acc = acc - a[i][j] * x[j];
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace pam
