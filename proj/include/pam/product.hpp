#pragma once

/**
 * The product measure mu x nu on G x H, determined by
 * (mu x nu)(A x B) = mu(A) nu(B) on rectangles.
 */

#include <optional>
#include <utility>
#include <vector>

#include "pam/measure.hpp"

namespace pam {

using Rectangle = std::pair<Ball, Ball>;

class ProductMeasure {
 public:
  ProductMeasure(Measure left, Measure right) : left_(std::move(left)), right_(std::move(right)) {
    if (left_.value_prime() != right_.value_prime()) {
      fail(ErrorKind::invalid_argument, "product of measures over different value primes");
    }
    // Fails on incompatible shapes.
    (void)(MeasureValue::zero(left_.shape()) * MeasureValue::zero(right_.shape()));
  }

  const Measure& left() const { return left_; }
  const Measure& right() const { return right_; }

  MeasureValue eval(const Ball& a, const Ball& b) const { return left_.eval(a) * right_.eval(b); }

  /// Additive extension to a finite union of pairwise disjoint rectangles.
  MeasureValue eval(const std::vector<Rectangle>& rects) const {
    MeasureValue out = MeasureValue::zero(left_.shape()) * MeasureValue::zero(right_.shape());
    for (std::size_t i = 0; i < rects.size(); ++i) {
      for (std::size_t j = i + 1; j < rects.size(); ++j) {
        if (!rects[i].first.disjoint(rects[j].first) && !rects[i].second.disjoint(rects[j].second)) {
          fail(ErrorKind::invalid_argument, "rectangles overlap");
        }
      }
      out += eval(rects[i].first, rects[i].second);
    }
    return out;
  }

 private:
  Measure left_;
  Measure right_;
};

struct NProductCheck {
  UltraNorm product;  // N_{mu x nu}(x, y) from rectangles
  UltraNorm factors;  // N_mu(x) N_nu(y)
  bool holds = false;
};

/**
 * N_{mu x nu}(x, y) computed from the product measure alone: the norm of the
 * product ball around (x, y) at level n is the largest u((mu x nu)(R)) over
 * the sub-rectangles R built from the ball and its children, once n is past
 * every density level and separates (x, y) from other point masses. The
 * value must be the same at n and n + 1.
 */
inline NProductCheck product_n_identity_check(const ProductMeasure& m, const Rational& x, const Rational& y) {
  const Measure& mu = m.left();
  const Measure& nu = m.right();
  if (!(mu.shape() == ValueShape::scalar()) || !(nu.shape() == ValueShape::scalar())) {
    fail(ErrorKind::invalid_argument, "the N-product identity is checked for scalar measures only");
  }
  const long p = mu.value_prime();
  const int n0 = std::max(mu.stationary_level(x), nu.stationary_level(y));
  auto cells = [](const Ball& b) {
    std::vector<Ball> out{b};
    for (const Ball& c : b.children()) out.push_back(c);
    return out;
  };
  auto at_level = [&](int n) {
    UltraNorm best = UltraNorm::zero(p);
    for (const Ball& a : cells(ball_at(mu.ambient(), x, n))) {
      for (const Ball& b : cells(ball_at(nu.ambient(), y, n))) best = max(best, m.eval(a, b).norm(p));
    }
    return best;
  };
  const UltraNorm here = at_level(n0);
  if (!(here == at_level(n0 + 1))) {
    throw IdentityFailure("product ball norms did not stabilize past the separation level");
  }
  NProductCheck out;
  out.product = here;
  out.factors = mu.n_mu(x) * nu.n_mu(y);
  out.holds = out.product == out.factors;
  return out;
}

struct FubiniResult {
  MeasureValue product;
  MeasureValue iterated;                // integrate over G first, then H
  std::optional<MeasureValue> reversed;  // over H first; only for commuting shapes
  bool holds = false;
};

inline FubiniResult fubini_check(const ProductFn& f, const ProductMeasure& m) {
  const Measure& mu = m.left();
  const Measure& nu = m.right();
  require_same(f.left(), mu.ambient());
  require_same(f.right(), nu.ambient());
  const auto ga = ClopenSet::whole(f.left()).refine(f.level_left());
  const auto hb = ClopenSet::whole(f.right()).refine(f.level_right());
  const ValueShape out_shape =
      (MeasureValue::zero(f.shape()) * (MeasureValue::zero(mu.shape()) * MeasureValue::zero(nu.shape()))).shape();

  FubiniResult res{MeasureValue::zero(out_shape), MeasureValue::zero(out_shape), std::nullopt, false};
  std::vector<MeasureValue> mu_a;
  std::vector<MeasureValue> nu_b;
  for (const Ball& a : ga) mu_a.push_back(mu.eval(a));
  for (const Ball& b : hb) nu_b.push_back(nu.eval(b));
  std::vector<std::vector<MeasureValue>> fv(ga.size());
  for (std::size_t i = 0; i < ga.size(); ++i) {
    for (const Ball& b : hb) fv[i].push_back(f.at(ga[i], b));
  }
  for (std::size_t i = 0; i < ga.size(); ++i) {
    for (std::size_t j = 0; j < hb.size(); ++j) res.product += fv[i][j] * (mu_a[i] * nu_b[j]);
  }
  // y -> integral over G of f(x, y) mu(dx), then against nu.
  for (std::size_t j = 0; j < hb.size(); ++j) {
    std::optional<MeasureValue> inner;
    for (std::size_t i = 0; i < ga.size(); ++i) {
      MeasureValue term = fv[i][j] * mu_a[i];
      inner = inner ? *inner + term : std::move(term);
    }
    res.iterated += *inner * nu_b[j];
  }
  res.holds = res.product == res.iterated;
  if (commuting_shapes(mu.shape(), nu.shape())) {
    MeasureValue rev = MeasureValue::zero(out_shape);
    for (std::size_t i = 0; i < ga.size(); ++i) {
      std::optional<MeasureValue> inner;
      for (std::size_t j = 0; j < hb.size(); ++j) {
        MeasureValue term = fv[i][j] * nu_b[j];
        inner = inner ? *inner + term : std::move(term);
      }
      rev += *inner * mu_a[i];
    }
    res.holds = res.holds && rev == res.product;
    res.reversed = std::move(rev);
  }
  return res;
}

}  // namespace pam
