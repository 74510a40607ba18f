#pragma once

/**
 * Step functions f = sum_k a_k Ch_{A_k} on the ball ring, stored by their
 * values on the atoms of one level, and step functions on a product G x H.
 */

#include <functional>
#include <map>
#include <utility>

#include "pam/clopen.hpp"
#include "pam/value.hpp"

namespace pam {

class LocallyConstantFn {
 public:
  using Values = std::map<Ball, MeasureValue>;

  /// Every level-L atom of the domain must carry exactly one value.
  LocallyConstantFn(ClopenSet domain, int level, ValueShape shape, Values values)
      : domain_(std::move(domain)), level_(level), shape_(shape), values_(std::move(values)) {
    const auto atoms = domain_.refine(level_);
    if (atoms.size() != values_.size()) {
      fail(ErrorKind::invalid_argument, "step function must have one value per level-" +
                                            std::to_string(level_) + " atom of its domain");
    }
    for (const Ball& a : atoms) {
      auto it = values_.find(a);
      if (it == values_.end()) {
        fail(ErrorKind::invalid_argument, "step function is missing a value on an atom");
      }
      if (!(it->second.shape() == shape_)) {
        fail(ErrorKind::invalid_argument, "step function values must share one shape");
      }
    }
  }

  /// A function on all of G given atom by atom at the stated level.
  static LocallyConstantFn from_atoms(const Ambient& g, int level, ValueShape shape,
                                      const std::function<MeasureValue(const Ball&)>& value) {
    const ClopenSet domain = ClopenSet::whole(g);
    Values values;
    for (const Ball& a : domain.refine(level)) values.emplace(a, value(a));
    return LocallyConstantFn(domain, level, shape, std::move(values));
  }

  static LocallyConstantFn constant(const ClopenSet& domain, const MeasureValue& c) {
    Values values;
    const int level = domain.max_level();
    for (const Ball& a : domain.refine(level)) values.emplace(a, c);
    return LocallyConstantFn(domain, level, c.shape(), std::move(values));
  }

  /// Ch_A on G at the finest level occurring in A.
  static LocallyConstantFn indicator(const ClopenSet& a) {
    return from_atoms(a.ambient(), a.max_level(), ValueShape::scalar(), [&](const Ball& atom) {
      return MeasureValue::scalar(a.contains(atom) ? 1 : 0);
    });
  }

  const ClopenSet& domain() const { return domain_; }
  const Ambient& ambient() const { return domain_.ambient(); }
  int level() const { return level_; }
  const ValueShape& shape() const { return shape_; }
  const Values& values() const { return values_; }

  /// Value on a ball at or below the function level; zero off the domain.
  MeasureValue at(const Ball& ball) const {
    if (ball.level < level_) {
      fail(ErrorKind::invalid_argument, "step function is not constant on a ball coarser than its level");
    }
    auto it = values_.find(ball.ancestor(level_));
    return it == values_.end() ? MeasureValue::zero(shape_) : it->second;
  }

  MeasureValue at(const Rational& x) const { return at(ball_at(ambient(), x, level_)); }

  LocallyConstantFn refined(int level) const {
    if (level < level_) fail(ErrorKind::invalid_argument, "cannot refine a step function to a coarser level");
    if (level == level_) return *this;
    Values values;
    for (const Ball& a : domain_.refine(level)) values.emplace(a, at(a));
    return LocallyConstantFn(domain_, level, shape_, std::move(values));
  }

  /// Applies op atomwise after refining both to a common level; the result
  /// lives on the union of the domains, with zero off each operand's domain.
  template <typename Op>
  static LocallyConstantFn combine(const LocallyConstantFn& f, const LocallyConstantFn& g, Op op) {
    require_same(f.ambient(), g.ambient());
    const int level = std::max(f.level_, g.level_);
    const ClopenSet domain = set_union(f.domain_, g.domain_);
    Values values;
    ValueShape shape = f.shape_;
    bool first = true;
    for (const Ball& a : domain.refine(level)) {
      MeasureValue v = op(f.at(a), g.at(a));
      if (first) shape = v.shape();
      first = false;
      values.emplace(a, std::move(v));
    }
    return LocallyConstantFn(domain, level, shape, std::move(values));
  }

  friend LocallyConstantFn operator*(const LocallyConstantFn& f, const LocallyConstantFn& g) {
    return combine(f, g, [](const MeasureValue& a, const MeasureValue& b) { return a * b; });
  }

  friend LocallyConstantFn operator-(const LocallyConstantFn& f, const LocallyConstantFn& g) {
    return combine(f, g, [](const MeasureValue& a, const MeasureValue& b) { return a - b; });
  }

  friend LocallyConstantFn operator+(const LocallyConstantFn& f, const LocallyConstantFn& g) {
    return combine(f, g, [](const MeasureValue& a, const MeasureValue& b) { return a + b; });
  }

  friend bool operator==(const LocallyConstantFn& a, const LocallyConstantFn& b) {
    return a.domain_ == b.domain_ && a.level_ == b.level_ && a.shape_ == b.shape_ &&
           a.values_ == b.values_;
  }

 private:
  ClopenSet domain_;
  int level_;
  ValueShape shape_;
  Values values_;
};

/// Scalar step function built from exact rationals.
inline LocallyConstantFn scalar_fn(const Ambient& g, int level,
                                   const std::function<Rational(const Ball&)>& value) {
  return LocallyConstantFn::from_atoms(g, level, ValueShape::scalar(),
                                       [&](const Ball& a) { return MeasureValue::scalar(value(a)); });
}

/// Step function on G x H, constant on products of a level-Lg atom and a
/// level-Lh atom.
class ProductFn {
 public:
  using Key = std::pair<Ball, Ball>;
  using Values = std::map<Key, MeasureValue>;

  ProductFn(Ambient g, Ambient h, int level_g, int level_h, ValueShape shape, Values values)
      : g_(g), h_(h), level_g_(level_g), level_h_(level_h), shape_(shape), values_(std::move(values)) {
    const auto ga = ClopenSet::whole(g_).refine(level_g_);
    const auto ha = ClopenSet::whole(h_).refine(level_h_);
    if (values_.size() != ga.size() * ha.size()) {
      fail(ErrorKind::invalid_argument, "product step function must have one value per atom pair");
    }
    for (const auto& [key, v] : values_) {
      if (key.first.level != level_g_ || key.second.level != level_h_ ||
          !(key.first.ambient == g_) || !(key.second.ambient == h_)) {
        fail(ErrorKind::invalid_argument, "product step function atom at the wrong level");
      }
      if (!(v.shape() == shape_)) fail(ErrorKind::invalid_argument, "product step function shape mismatch");
    }
  }

  static ProductFn from_atoms(const Ambient& g, const Ambient& h, int level_g, int level_h,
                              ValueShape shape,
                              const std::function<MeasureValue(const Ball&, const Ball&)>& value) {
    Values values;
    for (const Ball& a : ClopenSet::whole(g).refine(level_g)) {
      for (const Ball& b : ClopenSet::whole(h).refine(level_h)) values.emplace(Key{a, b}, value(a, b));
    }
    return ProductFn(g, h, level_g, level_h, shape, std::move(values));
  }

  const Ambient& left() const { return g_; }
  const Ambient& right() const { return h_; }
  int level_left() const { return level_g_; }
  int level_right() const { return level_h_; }
  const ValueShape& shape() const { return shape_; }
  const Values& values() const { return values_; }

  MeasureValue at(const Ball& a, const Ball& b) const {
    return values_.at(Key{a.ancestor(level_g_), b.ancestor(level_h_)});
  }

  /// The section y -> f(a, y) for a fixed left atom.
  LocallyConstantFn section_left(const Ball& a) const {
    return LocallyConstantFn::from_atoms(h_, level_h_, shape_, [&](const Ball& b) { return at(a, b); });
  }

  /// The section x -> f(x, b) for a fixed right atom.
  LocallyConstantFn section_right(const Ball& b) const {
    return LocallyConstantFn::from_atoms(g_, level_g_, shape_, [&](const Ball& a) { return at(a, b); });
  }

  ProductFn refined(int level_g, int level_h) const {
    if (level_g < level_g_ || level_h < level_h_) {
      fail(ErrorKind::invalid_argument, "cannot refine a product step function to a coarser level");
    }
    return from_atoms(g_, h_, level_g, level_h, shape_, [&](const Ball& a, const Ball& b) { return at(a, b); });
  }

  friend bool operator==(const ProductFn& a, const ProductFn& b) {
    return a.g_ == b.g_ && a.h_ == b.h_ && a.level_g_ == b.level_g_ && a.level_h_ == b.level_h_ &&
           a.shape_ == b.shape_ && a.values_ == b.values_;
  }

 private:
  Ambient g_;
  Ambient h_;
  int level_g_;
  int level_h_;
  ValueShape shape_;
  Values values_;
};

}  // namespace pam
