#pragma once

/**
 * Values a measure can take: scalars in K, vectors in K^n, or matrices in
 * Mat_n(K), with the max-entry non-archimedean seminorm
 *
 *     u(v) = max_i |v_i|_p.
 */

#include <string>
#include <vector>

#include "pam/rational.hpp"

namespace pam {

struct ValueShape {
  enum class Kind { scalar, vector, matrix };

  Kind kind = Kind::scalar;
  int n = 1;

  static ValueShape scalar() { return {Kind::scalar, 1}; }
  static ValueShape vector(int n) { return {Kind::vector, n}; }
  static ValueShape matrix(int n) { return {Kind::matrix, n}; }

  std::size_t size() const {
    switch (kind) {
      case Kind::scalar: return 1;
      case Kind::vector: return static_cast<std::size_t>(n);
      case Kind::matrix: return static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    }
    return 1;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::scalar: return "scalar";
      case Kind::vector: return "vector:" + std::to_string(n);
      case Kind::matrix: return "matrix:" + std::to_string(n);
    }
    return "scalar";
  }

  friend bool operator==(const ValueShape&, const ValueShape&) = default;
};

inline ValueShape parse_shape(const std::string& text) {
  if (text == "scalar") return ValueShape::scalar();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    int n = 0;
    try {
      n = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      n = 0;
    }
    if (n >= 1 && head == "vector") return ValueShape::vector(n);
    if (n >= 1 && head == "matrix") return ValueShape::matrix(n);
  }
  fail(ErrorKind::schema, "unknown value shape '" + text + "'");
}

class MeasureValue {
 public:
  MeasureValue() : entries_(1) {}

  static MeasureValue zero(ValueShape shape) { return MeasureValue(shape, std::vector<Rational>(shape.size())); }

  static MeasureValue scalar(const Rational& q) { return MeasureValue(ValueShape::scalar(), {q}); }

  static MeasureValue vector(std::vector<Rational> entries) {
    const int n = static_cast<int>(entries.size());
    if (n < 1) fail(ErrorKind::invalid_argument, "empty vector value");
    return MeasureValue(ValueShape::vector(n), std::move(entries));
  }

  /// Row-major n x n entries.
  static MeasureValue matrix(int n, std::vector<Rational> entries) {
    if (n < 1 || entries.size() != static_cast<std::size_t>(n * n)) {
      fail(ErrorKind::invalid_argument, "matrix value needs n*n entries");
    }
    return MeasureValue(ValueShape::matrix(n), std::move(entries));
  }

  static MeasureValue identity(int n) {
    MeasureValue out = zero(ValueShape::matrix(n));
    for (int i = 0; i < n; ++i) out.entries_[static_cast<std::size_t>(i * n + i)] = 1;
    return out;
  }

  const ValueShape& shape() const { return shape_; }
  const std::vector<Rational>& entries() const { return entries_; }
  bool is_scalar() const { return shape_.kind == ValueShape::Kind::scalar; }

  const Rational& scalar_value() const {
    if (!is_scalar()) fail(ErrorKind::invalid_argument, "expected a scalar value, got " + shape_.to_string());
    return entries_[0];
  }

  const Rational& at(int i, int j) const {
    return entries_[static_cast<std::size_t>(i * shape_.n + j)];
  }

  bool is_zero() const {
    for (const Rational& e : entries_) {
      if (e != 0) return false;
    }
    return true;
  }

  UltraNorm norm(long p) const {
    UltraNorm out = UltraNorm::zero(p);
    for (const Rational& e : entries_) {
      if (e != 0) out = max(out, UltraNorm{p, valuation(e, p)});
    }
    return out;
  }

  MeasureValue& operator+=(const MeasureValue& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
  }

  MeasureValue& operator-=(const MeasureValue& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
  }

  friend MeasureValue operator+(MeasureValue a, const MeasureValue& b) { return a += b; }
  friend MeasureValue operator-(MeasureValue a, const MeasureValue& b) { return a -= b; }

  MeasureValue operator-() const {
    MeasureValue out = *this;
    for (Rational& e : out.entries_) e = -e;
    return out;
  }

  friend MeasureValue operator*(const Rational& q, MeasureValue v) {
    for (Rational& e : v.entries_) e *= q;
    return v;
  }

  /// Products allowed by shape: scalar times anything, matrix times matrix,
  /// matrix times vector.
  friend MeasureValue operator*(const MeasureValue& a, const MeasureValue& b) {
    using K = ValueShape::Kind;
    if (a.is_scalar()) return a.entries_[0] * b;
    if (b.is_scalar()) return b.entries_[0] * a;
    if (a.shape_.kind == K::matrix && a.shape_.n == b.shape_.n) {
      const int n = a.shape_.n;
      const int cols = b.shape_.kind == K::matrix ? n : 1;
      std::vector<Rational> out(static_cast<std::size_t>(n * cols));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < cols; ++j) {
          Rational acc = 0;
          for (int k = 0; k < n; ++k) {
            acc += a.at(i, k) * b.entries_[static_cast<std::size_t>(k * cols + j)];
          }
          out[static_cast<std::size_t>(i * cols + j)] = acc;
        }
      }
      return MeasureValue(b.shape_, std::move(out));
    }
    fail(ErrorKind::invalid_argument,
         "cannot multiply values of shapes " + a.shape_.to_string() + " and " + b.shape_.to_string());
  }

  friend bool operator==(const MeasureValue& a, const MeasureValue& b) {
    return a.shape_ == b.shape_ && a.entries_ == b.entries_;
  }

 private:
  MeasureValue(ValueShape shape, std::vector<Rational> entries)
      : shape_(shape), entries_(std::move(entries)) {}

  void require_same_shape(const MeasureValue& other) const {
    if (!(shape_ == other.shape_)) {
      fail(ErrorKind::invalid_argument,
           "shape mismatch: " + shape_.to_string() + " vs " + other.shape_.to_string());
    }
  }

  ValueShape shape_;
  std::vector<Rational> entries_;
};

/// True iff a*b == b*a is guaranteed for values of these shapes.
inline bool commuting_shapes(const ValueShape& a, const ValueShape& b) {
  return a.kind == ValueShape::Kind::scalar || b.kind == ValueShape::Kind::scalar;
}

/**
 * K-linear map between value spaces, acting on the flattened entries:
 * out_i = sum_j coeffs[i][j] in_j.
 */
struct LinearValueMap {
  ValueShape in = ValueShape::scalar();
  ValueShape out = ValueShape::scalar();
  std::vector<Rational> coeffs;  // out.size() x in.size(), row-major

  static LinearValueMap identity(ValueShape shape) {
    return scaling(Rational(1), shape);
  }

  static LinearValueMap scaling(const Rational& c, ValueShape shape) {
    LinearValueMap f{shape, shape, std::vector<Rational>(shape.size() * shape.size())};
    for (std::size_t i = 0; i < shape.size(); ++i) f.coeffs[i * shape.size() + i] = c;
    return f;
  }

  /// Mat_n -> K, the sum of the diagonal.
  static LinearValueMap trace(int n) {
    const ValueShape in = ValueShape::matrix(n);
    LinearValueMap f{in, ValueShape::scalar(), std::vector<Rational>(in.size())};
    for (int i = 0; i < n; ++i) f.coeffs[static_cast<std::size_t>(i * n + i)] = 1;
    return f;
  }

  MeasureValue apply(const MeasureValue& v) const {
    if (!(v.shape() == in)) {
      fail(ErrorKind::invalid_argument,
           "linear map expects " + in.to_string() + ", got " + v.shape().to_string());
    }
    std::vector<Rational> res(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < in.size(); ++j) res[i] += coeffs[i * in.size() + j] * v.entries()[j];
    }
    switch (out.kind) {
      case ValueShape::Kind::scalar: return MeasureValue::scalar(res[0]);
      case ValueShape::Kind::vector: return MeasureValue::vector(std::move(res));
      case ValueShape::Kind::matrix: return MeasureValue::matrix(out.n, std::move(res));
    }
    return MeasureValue::scalar(res[0]);
  }

  /// Operator norm for the max-entry seminorms on both sides.
  UltraNorm norm(long p) const {
    UltraNorm n = UltraNorm::zero(p);
    for (const Rational& c : coeffs) {
      if (c != 0) n = max(n, UltraNorm{p, valuation(c, p)});
    }
    return n;
  }
};

}  // namespace pam
