#include <gtest/gtest.h>

#include "pam/selftest.hpp"

using namespace pam;

namespace {

Ball ball(long r, int level, long center, int m0 = 0) { return make_ball(Ambient{r, m0}, level, Rational(center)); }

// Membership of every grid point r^(-m0) k, 0 <= k < r^(m0 + depth): at depth
// at least the deepest ball level this pins down the point set.
std::vector<bool> footprint(const ClopenSet& s, int depth) {
  const Ambient& g = s.ambient();
  const auto n = pow_u64(g.r, g.m0 + depth);
  std::vector<bool> out;
  for (std::uint64_t k = 0; k < n; ++k) out.push_back(s.contains(Rational(static_cast<long>(k)) * rpow(g.r, -g.m0)));
  return out;
}

std::vector<bool> footprint_raw(const Ambient& g, const std::vector<Ball>& balls, int depth) {
  const auto n = pow_u64(g.r, g.m0 + depth);
  std::vector<bool> out;
  for (std::uint64_t k = 0; k < n; ++k) {
    const Rational x = Rational(static_cast<long>(k)) * rpow(g.r, -g.m0);
    bool in = false;
    for (const Ball& b : balls) in = in || ball_contains(b, x);
    out.push_back(in);
  }
  return out;
}

}  // namespace

TEST(Ball, Containment) {
  EXPECT_TRUE(ball_contains(ball(3, 0, 0), Rational(6)));
  EXPECT_TRUE(ball_contains(ball(3, 1, 1), Rational(4)));
  EXPECT_FALSE(ball_contains(ball(3, 1, 1), Rational(2)));
  EXPECT_THROW((void)ball_contains(ball(3, 1, 1), Rational(1, 2)), Error);
}

TEST(Ball, CentersAreLeastRepresentatives) {
  EXPECT_EQ(ball_at(Ambient{3, 0}, Rational(7), 1).center(), Rational(1));
  EXPECT_EQ(ball_at(Ambient{3, 1}, Rational(5, 3), 0).center(), Rational(2, 3));
  EXPECT_THROW((void)ball(3, 1, 7), Error);
  EXPECT_THROW((void)make_ball(Ambient{3, 1}, 0, Rational(5, 3)), Error);
}

TEST(Canonicalize, Examples) {
  const Ambient g{3, 0};
  EXPECT_EQ(ClopenSet::canonicalize(g, ball(3, 0, 0).children()), ClopenSet::whole(g));
  EXPECT_TRUE(ClopenSet::canonicalize(g, {}).empty());
  const ClopenSet s = ClopenSet::canonicalize(g, {ball(3, 1, 0), ball(3, 2, 3)});
  ASSERT_EQ(s.balls().size(), 1U);
  EXPECT_EQ(s.balls()[0], ball(3, 1, 0));
}

TEST(Canonicalize, MixedAmbientRejected) {
  EXPECT_THROW((void)ClopenSet::canonicalize(Ambient{3, 0}, {ball(3, 1, 0), ball(5, 1, 0)}), Error);
}

TEST(Canonicalize, PreservesDenotationExhaustively) {
  selftest::Rng rng(3);
  for (long r : {2L, 3L, 5L}) {
    const Ambient g{r, 0};
    const auto balls = all_balls(g, 3);
    for (int i = 0; i < 150; ++i) {
      std::vector<Ball> raw;
      const int k = static_cast<int>(rng.uniform(0, 6));
      for (int j = 0; j < k; ++j) raw.push_back(balls[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(balls.size()) - 1))]);
      const ClopenSet s = ClopenSet::canonicalize(g, raw);
      EXPECT_EQ(footprint(s, 3), footprint_raw(g, raw, 3));
      EXPECT_EQ(ClopenSet::canonicalize(g, s.balls()), s);
      // Canonical balls are pairwise disjoint.
      for (std::size_t a = 0; a < s.balls().size(); ++a) {
        for (std::size_t b = a + 1; b < s.balls().size(); ++b) EXPECT_TRUE(s.balls()[a].disjoint(s.balls()[b]));
      }
    }
  }
}

TEST(SetAlgebra, Examples) {
  const Ambient g{3, 0};
  const ClopenSet a = single(ball(3, 1, 0));
  EXPECT_EQ(set_union(a, set_complement(a)), ClopenSet::whole(g));
  EXPECT_EQ(set_intersection(a, a), a);
  const ClopenSet d = set_difference(ClopenSet::whole(g), a);
  EXPECT_EQ(d, ClopenSet::canonicalize(g, {ball(3, 1, 1), ball(3, 1, 2)}));
  EXPECT_THROW((void)set_union(a, single(ball(5, 1, 0))), Error);
}

TEST(SetAlgebra, MatchesPointwiseSemantics) {
  selftest::Rng rng(9);
  for (long r : {2L, 3L}) {
    const Ambient g{r, 1};
    const auto balls = all_balls(g, 2);
    auto draw = [&] {
      std::vector<Ball> raw;
      for (int j = 0; j < 3; ++j) raw.push_back(balls[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(balls.size()) - 1))]);
      return ClopenSet::canonicalize(g, raw);
    };
    for (int i = 0; i < 100; ++i) {
      const ClopenSet a = draw();
      const ClopenSet b = draw();
      const auto fa = footprint(a, 2);
      const auto fb = footprint(b, 2);
      const auto fu = footprint(set_union(a, b), 2);
      const auto fi = footprint(set_intersection(a, b), 2);
      const auto fd = footprint(set_difference(a, b), 2);
      const auto fc = footprint(set_complement(a), 2);
      for (std::size_t k = 0; k < fa.size(); ++k) {
        EXPECT_EQ(fu[k], fa[k] || fb[k]);
        EXPECT_EQ(fi[k], fa[k] && fb[k]);
        EXPECT_EQ(fd[k], fa[k] && !fb[k]);
        EXPECT_EQ(fc[k], !fa[k]);
      }
    }
  }
}

TEST(Refine, Examples) {
  const Ambient g{3, 0};
  EXPECT_EQ(ClopenSet::whole(g).refine(2).size(), 9U);
  EXPECT_TRUE(ClopenSet::canonicalize(g, {}).refine(5).empty());
  const auto atoms = single(ball(3, 1, 2)).refine(2);
  ASSERT_EQ(atoms.size(), 3U);
  std::vector<Rational> centers;
  for (const Ball& b : atoms) centers.push_back(b.center());
  std::sort(centers.begin(), centers.end());
  EXPECT_EQ(centers, (std::vector<Rational>{2, 5, 8}));
  EXPECT_THROW((void)single(ball(3, 2, 0)).refine(1), Error);
}

TEST(Ball, ChildrenPartitionParent) {
  for (long r : {2L, 3L, 5L}) {
    for (const Ball& b : all_balls(Ambient{r, 0}, 2)) {
      const auto kids = b.children();
      ASSERT_EQ(kids.size(), static_cast<std::size_t>(r));
      for (std::size_t i = 0; i < kids.size(); ++i) {
        EXPECT_TRUE(b.contains(kids[i]));
        for (std::size_t j = i + 1; j < kids.size(); ++j) EXPECT_TRUE(kids[i].disjoint(kids[j]));
      }
      EXPECT_EQ(ClopenSet::canonicalize(b.ambient, kids), single(b));
    }
  }
}
