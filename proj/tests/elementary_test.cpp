#include <gtest/gtest.h>

#include <random>

#include "np/elementary.hpp"
#include "oracle.hpp"

using np::Endomorphism;
using np::LocalMap;
using np::PartitionType;
using np::Point;

namespace {

std::vector<LocalMap> all_local_maps(std::size_t n) {
  std::vector<LocalMap> out;
  oracle::for_each_map(n, n, [&](const std::vector<std::uint32_t>& m) { out.emplace_back(m); });
  return out;
}

bool level_is_identity(const Endomorphism& f, std::size_t s) {
  const auto m = np::level_map(f, s);
  for (std::uint32_t x = 0; x < m.size(); ++x) {
    if (m[x] != x) return false;
  }
  return true;
}

}  // namespace

TEST(Bracket, IdentityMapGivesId) {
  const PartitionType t({2, 3});
  for (std::size_t j = 1; j <= 2; ++j) {
    for (const auto& v : np::points_at_level(t, j - 1)) {
      EXPECT_EQ(np::bracket(t, LocalMap::identity(t.arity(j)), v), Endomorphism::identity(t));
    }
  }
}

TEST(Bracket, SwapBelowFirstPoint) {
  const PartitionType t({2, 2});
  const auto f = np::bracket(t, LocalMap({1, 0}), Point{{0}});
  EXPECT_EQ(np::leaf_map(f), (std::vector<std::uint32_t>{1, 0, 2, 3}));
}

TEST(Bracket, LevelsAboveTheAnchorAreIdentity) {
  for (const PartitionType& t : {PartitionType({2, 2}), PartitionType({3, 2, 2})}) {
    for (std::size_t j = 1; j <= t.depth(); ++j) {
      for (const auto& g : all_local_maps(t.arity(j))) {
        for (const auto& v : np::points_at_level(t, j - 1)) {
          const auto f = np::bracket(t, g, v);
          for (std::size_t s = 0; s < j; ++s) EXPECT_TRUE(level_is_identity(f, s));
          EXPECT_EQ(f.local_map(v), g);
        }
      }
    }
  }
}

TEST(Bracket, RejectsMismatches) {
  const PartitionType t({2, 3});
  EXPECT_THROW(np::bracket(t, LocalMap::identity(3), Point{}), np::InvalidArgument);
  EXPECT_THROW(np::bracket(t, LocalMap::identity(3), Point{{0, 0}}), np::InvalidArgument);
  EXPECT_THROW(np::bracket(t, LocalMap::identity(3), Point{{2}}), np::InvalidArgument);
}

TEST(Bracket, DistinctAnchorsCommute) {
  const PartitionType t({2, 2});
  const auto maps = all_local_maps(2);
  const auto anchors = np::points_at_level(t, 1);
  for (const auto& g : maps) {
    for (const auto& h : maps) {
      const auto a = np::bracket(t, g, anchors[0]);
      const auto b = np::bracket(t, h, anchors[1]);
      EXPECT_EQ(np::compose(a, b), np::compose(b, a));
    }
  }
}

TEST(Bracket, SameAnchorProductLaw) {
  // [g1,v][g2,v] = [g1 g2,v] with g1 g2 = g1 o g2 (g2 applied first).
  for (const PartitionType& t : {PartitionType({2, 2}), PartitionType({3, 3})}) {
    for (std::size_t j = 1; j <= 2; ++j) {
      const auto maps = all_local_maps(t.arity(j));
      for (const auto& v : np::points_at_level(t, j - 1)) {
        for (const auto& g1 : maps) {
          for (const auto& g2 : maps) {
            std::vector<std::uint32_t> g1g2(g2.size());
            for (std::size_t x = 0; x < g2.size(); ++x) g1g2[x] = g1.image()[g2.image()[x]];
            ASSERT_EQ(np::compose(np::bracket(t, g1, v), np::bracket(t, g2, v)),
                      np::bracket(t, LocalMap(g1g2), v));
          }
        }
      }
    }
  }
}

TEST(TLevel, Basics) {
  const PartitionType t({2, 2});
  for (std::size_t j = 1; j <= 2; ++j) EXPECT_EQ(np::t_level(Endomorphism::identity(t), j), Endomorphism::identity(t));
  // f[*] = const 2, f[(1)] = id, f[(2)] = swap.
  const Endomorphism f(t, {1, 1, 0, 1, 1, 0});
  const auto t2 = np::t_level(f, 2);
  EXPECT_EQ(t2.table(), (std::vector<std::uint32_t>{0, 1, 0, 1, 1, 0}));
  EXPECT_THROW(np::t_level(f, 0), np::InvalidArgument);
  EXPECT_THROW(np::t_level(f, 3), np::InvalidArgument);
}

TEST(TLevel, LowerLevelsIdentityAndBracketProduct) {
  std::mt19937_64 rng(21);
  const PartitionType t({3, 2, 3});
  for (int i = 0; i < 100; ++i) {
    const auto f = np::random_endomorphism(t, rng);
    for (std::size_t j = 1; j <= 3; ++j) {
      const auto tj = np::t_level(f, j);
      for (std::size_t s = 0; s < j; ++s) EXPECT_TRUE(level_is_identity(tj, s));
      auto forward = Endomorphism::identity(t);
      auto backward = forward;
      const auto anchors = np::points_at_level(t, j - 1);
      for (const auto& v : anchors) forward = np::compose(forward, np::bracket(t, f.local_map(v), v));
      for (auto it = anchors.rbegin(); it != anchors.rend(); ++it) {
        backward = np::compose(backward, np::bracket(t, f.local_map(*it), *it));
      }
      EXPECT_EQ(forward, tj);
      EXPECT_EQ(backward, tj);
    }
  }
}

TEST(Decompose, IdentityAndBrackets) {
  const PartitionType t({2, 2});
  for (const auto& factor : np::decompose(Endomorphism::identity(t))) EXPECT_TRUE(factor.is_identity());
  for (std::size_t j = 1; j <= 2; ++j) {
    for (const auto& v : np::points_at_level(t, j - 1)) {
      const auto f = np::bracket(t, LocalMap({1, 1}), v);
      std::size_t nontrivial = 0;
      for (const auto& factor : np::decompose(f)) nontrivial += !factor.is_identity();
      EXPECT_EQ(nontrivial, 1u);
    }
  }
}

TEST(Decompose, RecomposesExhaustivelyOnTwoByTwo) {
  const PartitionType t({2, 2});
  for (const auto& f : np::enumerate_endomorphisms(t, 64)) {
    const auto ts = np::decompose(f);
    // t_1 o t_2 through the leaf-map oracle.
    const auto leaf = oracle::after(oracle::leaf_table(t, ts[0].table()), oracle::leaf_table(t, ts[1].table()));
    EXPECT_EQ(leaf, oracle::leaf_table(t, f.table()));
    EXPECT_EQ(np::recompose(ts), f);
  }
}

TEST(Decompose, RecomposesOnRandomThreeByThree) {
  std::mt19937_64 rng(1000);
  for (const PartitionType& t : {PartitionType({3, 3}), PartitionType({2, 3, 2, 2})}) {
    for (int i = 0; i < 1000; ++i) {
      const auto f = np::random_endomorphism(t, rng);
      EXPECT_EQ(np::recompose(np::decompose(f)), f);
    }
  }
}

TEST(Decompose, LiteralOrderAppliesDeeperMapsAtMovedPrefixes) {
  const PartitionType t({2, 2});
  // f[*] = const 2, f[(1)] = id, f[(2)] = swap. Applying t_1 first moves
  // (1,1) to (2,1), and t_2 then applies f[(2)] instead of f[(1)].
  const Endomorphism f(t, {1, 1, 0, 1, 1, 0});
  const auto literal = np::literal_order_product(np::decompose(f));
  EXPECT_EQ(np::leaf_map(f), (std::vector<std::uint32_t>{2, 3, 3, 2}));
  EXPECT_EQ(np::leaf_map(literal), (std::vector<std::uint32_t>{3, 2, 3, 2}));

  // Literal order agrees with f exactly when f[f_1(v)] = f[v] at level 2 for
  // every v, checked against that oracle over all of P((2,2)).
  std::size_t agree = 0;
  for (const auto& g : np::enumerate_endomorphisms(t, 64)) {
    const auto g1 = np::level_map(g, 1);
    bool predicted = true;
    for (std::size_t v = 0; v < 2; ++v) {
      predicted = predicted && g.local_map(Point{{g1[v]}}) == g.local_map(Point{{v}});
    }
    const bool holds = np::literal_order_product(np::decompose(g)) == g;
    EXPECT_EQ(holds, predicted);
    agree += holds;
  }
  EXPECT_EQ(agree, 28u);
}
