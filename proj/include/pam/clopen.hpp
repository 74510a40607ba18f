#pragma once

/**
 * The ring of clopen subsets of a compact ball G = r^(-m0) Z_r.
 *
 * A ball at level n is {x : |x - c|_r <= r^(-n)}, n >= -m0. Writing
 * depth = n + m0, balls at a given depth are the cosets of r^depth in
 * r^(-m0) Z_r and are indexed by the least nonnegative residue of r^m0 * c
 * modulo r^depth. The children of (depth, i) are (depth + 1, i + j r^depth).
 */

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pam/padic.hpp"
#include "pam/rational.hpp"

namespace pam {

/// The compact ball G every set lives in.
struct Ambient {
  long r = 2;
  int m0 = 0;

  friend bool operator==(const Ambient&, const Ambient&) = default;
};

inline void require_same(const Ambient& a, const Ambient& b) {
  if (!(a == b)) {
    fail(ErrorKind::invalid_argument, "mismatched ambient balls (r=" + std::to_string(a.r) +
                                          ",m0=" + std::to_string(a.m0) + ") vs (r=" +
                                          std::to_string(b.r) + ",m0=" + std::to_string(b.m0) + ")");
  }
}

inline void validate(const Ambient& g) {
  require_prime(g.r, "space prime r");
  if (g.m0 < 0) fail(ErrorKind::invalid_argument, "ambient scale m0 must be >= 0");
}

struct Ball {
  Ambient ambient;
  int level = 0;
  std::uint64_t index = 0;

  int depth() const { return level + ambient.m0; }
  long r() const { return ambient.r; }

  Rational center() const {
    Rational c(Integer(static_cast<unsigned long>(index)), ipow(ambient.r, ambient.m0));
    c.canonicalize();
    return c;
  }

  Ball child(std::uint64_t j) const {
    return Ball{ambient, level + 1, index + j * pow_u64(ambient.r, depth())};
  }

  std::vector<Ball> children() const {
    std::vector<Ball> out;
    for (long j = 0; j < ambient.r; ++j) out.push_back(child(static_cast<std::uint64_t>(j)));
    return out;
  }

  Ball ancestor(int at_level) const {
    if (at_level > level || at_level < -ambient.m0) {
      fail(ErrorKind::invalid_argument, "ancestor level out of range");
    }
    return Ball{ambient, at_level, index % pow_u64(ambient.r, at_level + ambient.m0)};
  }

  /// True iff other is a subset of this ball.
  bool contains(const Ball& other) const {
    return other.level >= level && other.ancestor(level).index == index;
  }

  bool disjoint(const Ball& other) const { return !contains(other) && !other.contains(*this); }

  friend bool operator==(const Ball& a, const Ball& b) {
    return a.ambient == b.ambient && a.level == b.level && a.index == b.index;
  }

  /// Sorted by (level, center); the center order equals the index order.
  friend std::strong_ordering operator<=>(const Ball& a, const Ball& b) {
    if (auto c = a.level <=> b.level; c != 0) return c;
    return a.index <=> b.index;
  }
};

inline Ball whole_ball(const Ambient& g) { return Ball{g, -g.m0, 0}; }

inline bool in_ambient(const Ambient& g, const Rational& x) {
  return x == 0 || valuation(x, g.r) >= -g.m0;
}

/// Index of the depth-d ball containing the point x of G.
inline std::uint64_t point_index(const Ambient& g, const Rational& x, int depth) {
  require_z_inv(x, g.r, "point");
  if (!in_ambient(g, x)) fail(ErrorKind::domain, "point " + to_string(x) + " lies outside G");
  Rational scaled = x * rpow(g.r, g.m0);
  const Integer modulus = ipow(g.r, static_cast<unsigned long>(depth));
  Integer rem;
  mpz_fdiv_r(rem.get_mpz_t(), scaled.get_num_mpz_t(), modulus.get_mpz_t());
  return rem.get_ui();
}

inline Ball ball_at(const Ambient& g, const Rational& x, int level) {
  if (level < -g.m0) fail(ErrorKind::invalid_argument, "ball level below -m0");
  return Ball{g, level, point_index(g, x, level + g.m0)};
}

/// Validating constructor from the (level, center) description.
inline Ball make_ball(const Ambient& g, int level, const Rational& center) {
  validate(g);
  if (level < -g.m0) fail(ErrorKind::invalid_argument, "ball level below -m0");
  Rational scaled = center * rpow(g.r, g.m0);
  if (scaled.get_den() != 1 || scaled < 0 ||
      scaled.get_num() >= ipow(g.r, static_cast<unsigned long>(level + g.m0))) {
    fail(ErrorKind::invalid_argument,
         "center " + to_string(center) + " is not a canonical coset representative");
  }
  return Ball{g, level, scaled.get_num().get_ui()};
}

inline bool ball_contains(const Ball& b, const Rational& x) {
  require_z_inv(x, b.r(), "point");
  const Rational diff = x - b.center();
  if (diff == 0) return true;
  return valuation(diff, b.r()) >= b.level;
}

class ClopenSet {
 public:
  explicit ClopenSet(Ambient g) : ambient_(g) {}

  static ClopenSet whole(const Ambient& g) {
    ClopenSet s(g);
    s.balls_.push_back(whole_ball(g));
    return s;
  }

  /// Nested balls are absorbed and complete sibling families are merged
  /// upward until neither applies.
  static ClopenSet canonicalize(const Ambient& g, const std::vector<Ball>& input) {
    for (const Ball& b : input) {
      require_same(g, b.ambient);
      if (b.level < -g.m0) fail(ErrorKind::invalid_argument, "ball level below -m0");
    }
    std::set<Ball> pending(input.begin(), input.end());
    std::set<Ball> kept;
    for (const Ball& b : pending) {
      bool nested = false;
      for (int lvl = -g.m0; lvl < b.level && !nested; ++lvl) {
        nested = pending.count(b.ancestor(lvl)) != 0;
      }
      if (!nested) kept.insert(b);
    }
    int deepest = -g.m0;
    for (const Ball& b : kept) deepest = std::max(deepest, b.level);
    for (int lvl = deepest; lvl > -g.m0; --lvl) {
      std::vector<Ball> here;
      for (const Ball& b : kept) {
        if (b.level == lvl) here.push_back(b);
      }
      std::map<std::uint64_t, int> family;
      for (const Ball& b : here) ++family[b.ancestor(lvl - 1).index];
      for (const auto& [parent, count] : family) {
        if (count != g.r) continue;
        const Ball up{g, lvl - 1, parent};
        for (const Ball& c : up.children()) kept.erase(c);
        kept.insert(up);
      }
    }
    ClopenSet out(g);
    out.balls_.assign(kept.begin(), kept.end());
    return out;
  }

  const Ambient& ambient() const { return ambient_; }
  const std::vector<Ball>& balls() const { return balls_; }
  bool empty() const { return balls_.empty(); }

  int max_level() const {
    int lvl = -ambient_.m0;
    for (const Ball& b : balls_) lvl = std::max(lvl, b.level);
    return lvl;
  }

  bool contains(const Rational& x) const {
    return std::any_of(balls_.begin(), balls_.end(),
                       [&](const Ball& b) { return ball_contains(b, x); });
  }

  /// True iff the ball is a subset of this set.
  bool contains(const Ball& ball) const {
    return std::any_of(balls_.begin(), balls_.end(),
                       [&](const Ball& b) { return b.contains(ball); });
  }

  bool meets(const Ball& ball) const {
    return std::any_of(balls_.begin(), balls_.end(),
                       [&](const Ball& b) { return !b.disjoint(ball); });
  }

  /// The level-L atoms whose union is this set, in (level, center) order.
  std::vector<Ball> refine(int level) const {
    if (level < max_level()) {
      fail(ErrorKind::invalid_argument,
           "refinement level " + std::to_string(level) + " is coarser than a member ball");
    }
    std::vector<Ball> out;
    for (const Ball& b : balls_) {
      const std::uint64_t stride = pow_u64(ambient_.r, b.depth());
      const std::uint64_t count = pow_u64(ambient_.r, level - b.level);
      for (std::uint64_t k = 0; k < count; ++k) {
        out.push_back(Ball{ambient_, level, b.index + k * stride});
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const ClopenSet& a, const ClopenSet& b) {
    return a.ambient_ == b.ambient_ && a.balls_ == b.balls_;
  }

 private:
  Ambient ambient_;
  std::vector<Ball> balls_;
};

inline ClopenSet set_union(const ClopenSet& a, const ClopenSet& b) {
  require_same(a.ambient(), b.ambient());
  std::vector<Ball> all = a.balls();
  all.insert(all.end(), b.balls().begin(), b.balls().end());
  return ClopenSet::canonicalize(a.ambient(), all);
}

inline ClopenSet set_intersection(const ClopenSet& a, const ClopenSet& b) {
  require_same(a.ambient(), b.ambient());
  std::vector<Ball> out;
  for (const Ball& x : a.balls()) {
    for (const Ball& y : b.balls()) {
      if (x.contains(y)) {
        out.push_back(y);
      } else if (y.contains(x)) {
        out.push_back(x);
      }
    }
  }
  return ClopenSet::canonicalize(a.ambient(), out);
}

namespace detail {

inline void complement_into(const ClopenSet& s, const Ball& at, std::vector<Ball>& out) {
  if (s.contains(at)) return;
  if (!s.meets(at)) {
    out.push_back(at);
    return;
  }
  for (const Ball& c : at.children()) complement_into(s, c, out);
}

}  // namespace detail

/// Complement relative to G.
inline ClopenSet set_complement(const ClopenSet& a) {
  std::vector<Ball> out;
  detail::complement_into(a, whole_ball(a.ambient()), out);
  return ClopenSet::canonicalize(a.ambient(), out);
}

inline ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b) {
  require_same(a.ambient(), b.ambient());
  return set_intersection(a, set_complement(b));
}

enum class SetOp { union_of, intersect, difference, complement };

/// Boolean-ring operations; `complement` ignores b and complements a in G.
inline ClopenSet set_algebra(const ClopenSet& a, const ClopenSet& b, SetOp op) {
  require_same(a.ambient(), b.ambient());
  switch (op) {
    case SetOp::union_of: return set_union(a, b);
    case SetOp::intersect: return set_intersection(a, b);
    case SetOp::difference: return set_difference(a, b);
    case SetOp::complement: return set_complement(a);
  }
  return a;
}

/// All balls of G at levels -m0 .. max_level, coarse to fine.
inline std::vector<Ball> all_balls(const Ambient& g, int max_level) {
  std::vector<Ball> out;
  for (int lvl = -g.m0; lvl <= max_level; ++lvl) {
    const std::uint64_t count = pow_u64(g.r, lvl + g.m0);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(Ball{g, lvl, i});
  }
  return out;
}

inline ClopenSet single(const Ball& b) { return ClopenSet::canonicalize(b.ambient, {b}); }

}  // namespace pam
