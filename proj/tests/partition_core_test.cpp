#include <gtest/gtest.h>

#include <random>
#include <unordered_set>

#include "np/endomorphism.hpp"
#include "np/predicates.hpp"
#include "oracle.hpp"

using np::Endomorphism;
using np::LocalMap;
using np::PartitionType;
using np::Point;

namespace {

PartitionType t22() { return PartitionType({2, 2}); }

Point pt(std::vector<std::size_t> one_based) {
  Point p;
  for (auto c : one_based) p.coords.push_back(c - 1);
  return p;
}

// f[*] = const 2, f[(1)] = id, f[(2)] = swap over (2,2).
Endomorphism example_f() {
  std::map<Point, LocalMap> maps;
  maps.emplace(Point{}, LocalMap::from_one_based({2, 2}));
  maps.emplace(pt({1}), LocalMap::from_one_based({1, 2}));
  maps.emplace(pt({2}), LocalMap::from_one_based({2, 1}));
  return np::endo_from_local_maps(t22(), maps);
}

}  // namespace

TEST(PartitionType, DerivedSizes) {
  PartitionType t({3, 2, 4});
  EXPECT_EQ(t.depth(), 3u);
  EXPECT_EQ(t.level_size(0), 1u);
  EXPECT_EQ(t.level_size(1), 3u);
  EXPECT_EQ(t.level_size(2), 6u);
  EXPECT_EQ(t.level_size(3), 24u);
  EXPECT_EQ(t.leaf_count(), 24u);
  EXPECT_EQ(t.table_size(), 3u + 6u + 24u);
  EXPECT_EQ(t.to_string(), "(3,2,4)");
}

TEST(PartitionType, ParseAndReject) {
  EXPECT_EQ(PartitionType::parse("3,3"), PartitionType({3, 3}));
  EXPECT_EQ(PartitionType::parse(" 2 , 5 "), PartitionType({2, 5}));
  for (const char* bad : {"", "3,,3", "0", "a", "3,-1", "3,", ",3", "1.5"}) {
    EXPECT_THROW(PartitionType::parse(bad), np::InvalidArgument) << bad;
  }
  EXPECT_THROW(PartitionType({10, 10, 10, 10, 10, 10, 10}), np::InvalidArgument);
  EXPECT_THROW(PartitionType({4, 4}, 15), np::InvalidArgument);
  EXPECT_NO_THROW(PartitionType({4, 4}, 16));
  EXPECT_NO_THROW(PartitionType({1, 1, 1}));
}

TEST(PartitionType, PointsAtLevel) {
  const auto t = t22();
  ASSERT_EQ(np::points_at_level(t, 0).size(), 1u);
  EXPECT_TRUE(np::points_at_level(t, 0)[0].coords.empty());
  const auto l2 = np::points_at_level(t, 2);
  ASSERT_EQ(l2.size(), 4u);
  EXPECT_EQ(l2[0], pt({1, 1}));
  EXPECT_EQ(l2[1], pt({1, 2}));
  EXPECT_EQ(l2[2], pt({2, 1}));
  EXPECT_EQ(l2[3], pt({2, 2}));
  EXPECT_EQ(np::points_at_level(PartitionType({3, 2}), 2).size(), 6u);
  EXPECT_EQ(pt({2, 1}).to_string(), "(2,1)");
}

TEST(PartitionType, MixedRadixIsABijection) {
  PartitionType t({3, 2, 4});
  for (std::size_t j = 0; j <= 3; ++j) {
    const auto pts = np::points_at_level(t, j);
    const auto expected = oracle::tuples(oracle::prefix_radix(t, j));
    ASSERT_EQ(pts.size(), expected.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_EQ(pts[i].coords, expected[i]);
      EXPECT_EQ(np::point_index(t, pts[i]), i);
      EXPECT_EQ(np::point_at(t, j, i), pts[i]);
    }
  }
  EXPECT_THROW(np::point_index(t, pt({4})), np::InvalidArgument);
}

TEST(PartitionType, Project) {
  EXPECT_EQ(np::project(pt({2, 1})), pt({2}));
  EXPECT_EQ(np::project(pt({1, 1, 3})), pt({1, 1}));
  EXPECT_THROW(np::project(Point{}), np::InvalidArgument);
}

TEST(LocalMap, InvertibleIffPermutation) {
  oracle::for_each_map(3, 3, [](const std::vector<std::uint32_t>& m) {
    std::vector<bool> hit(3, false);
    for (auto x : m) hit[x] = true;
    const bool perm = hit[0] && hit[1] && hit[2];
    EXPECT_EQ(LocalMap(m).invertible(), perm);
  });
  EXPECT_THROW(LocalMap::from_one_based({0, 1}), np::InvalidArgument);
  EXPECT_THROW(LocalMap::from_one_based({3, 1}), np::InvalidArgument);
}

TEST(Endomorphism, WorkedExampleLeafMap) {
  const auto f = example_f();
  // (1,1)->(2,1), (1,2)->(2,2), (2,1)->(2,2), (2,2)->(2,1)
  EXPECT_EQ(np::leaf_map(f), (std::vector<std::uint32_t>{2, 3, 3, 2}));
  EXPECT_EQ(np::level_map(f, 1), (std::vector<std::uint32_t>{1, 1}));
  EXPECT_EQ(np::level_map(f, 0), (std::vector<std::uint32_t>{0}));
  EXPECT_TRUE(np::verify_commuting(f));
}

TEST(Endomorphism, AllIdentityTableIsId) {
  for (auto t : {t22(), PartitionType({3, 1, 2})}) {
    std::map<Point, LocalMap> maps;
    for (std::size_t j = 1; j <= t.depth(); ++j) {
      for (const auto& v : np::points_at_level(t, j - 1)) maps.emplace(v, LocalMap::identity(t.arity(j)));
    }
    const auto id = np::endo_from_local_maps(t, maps);
    EXPECT_EQ(id, Endomorphism::identity(t));
    EXPECT_TRUE(id.is_identity());
    for (std::size_t j = 0; j <= t.depth(); ++j) {
      const auto m = np::level_map(id, j);
      for (std::uint32_t x = 0; x < m.size(); ++x) EXPECT_EQ(m[x], x);
    }
  }
}

TEST(Endomorphism, TableMustBeTotal) {
  std::map<Point, LocalMap> maps;
  maps.emplace(Point{}, LocalMap::identity(2));
  maps.emplace(pt({1}), LocalMap::identity(2));
  EXPECT_THROW(np::endo_from_local_maps(t22(), maps), np::InvalidArgument);
  maps.emplace(pt({2}), LocalMap::identity(3));
  EXPECT_THROW(np::endo_from_local_maps(t22(), maps), np::InvalidArgument);
  EXPECT_THROW(Endomorphism(t22(), {0, 0, 0, 0, 0}), np::InvalidArgument);
  EXPECT_THROW(Endomorphism(t22(), {0, 0, 0, 0, 0, 2}), np::InvalidArgument);
}

TEST(Endomorphism, LeafMapMatchesInductiveRule) {
  std::mt19937_64 rng(7);
  for (auto t : {t22(), PartitionType({3, 3}), PartitionType({2, 3, 2}), PartitionType({4})}) {
    for (int i = 0; i < 200; ++i) {
      const auto f = np::random_endomorphism(t, rng);
      EXPECT_EQ(np::leaf_map(f), oracle::leaf_table(t, f.table()));
    }
  }
}

TEST(Endomorphism, ConstantsAbsorb) {
  PartitionType t({2});
  const Endomorphism c(t, {0, 0});
  const Endomorphism swap(t, {1, 0});
  EXPECT_EQ(np::compose(c, swap), c);
}

TEST(Endomorphism, CompositionMatchesLeafMaps) {
  const auto all = np::enumerate_endomorphisms(t22(), 64);
  for (const auto& f : all) {
    for (const auto& g : all) {
      const auto fg = np::compose(f, g);
      ASSERT_EQ(np::leaf_map(fg), oracle::after(oracle::leaf_table(t22(), f.table()),
                                                oracle::leaf_table(t22(), g.table())));
    }
  }
  std::mt19937_64 rng(11);
  for (auto t : {PartitionType({3, 3}), PartitionType({2, 3, 2})}) {
    for (int i = 0; i < 300; ++i) {
      const auto f = np::random_endomorphism(t, rng);
      const auto g = np::random_endomorphism(t, rng);
      EXPECT_EQ(np::leaf_map(np::compose(f, g)), oracle::after(np::leaf_map(f), np::leaf_map(g)));
    }
  }
}

TEST(Endomorphism, LocalCompositionLaw) {
  // (fg)[v] = f[g_{j-1}(v)] o g[v]
  std::mt19937_64 rng(3);
  PartitionType t({3, 2, 3});
  for (int i = 0; i < 100; ++i) {
    const auto f = np::random_endomorphism(t, rng);
    const auto g = np::random_endomorphism(t, rng);
    const auto fg = np::compose(f, g);
    for (std::size_t j = 1; j <= t.depth(); ++j) {
      const auto gj = np::level_map(g, j - 1);
      for (std::size_t v = 0; v < t.level_size(j - 1); ++v) {
        const auto lhs = fg.local(j, v);
        const auto gv = g.local(j, v);
        const auto fw = f.local(j, gj[v]);
        for (std::size_t x = 0; x < t.arity(j); ++x) EXPECT_EQ(lhs[x], fw[gv[x]]);
      }
    }
  }
}

TEST(Endomorphism, Associativity) {
  const auto all = np::enumerate_endomorphisms(t22(), 64);
  for (const auto& f : all) {
    for (const auto& g : all) {
      const auto fg = np::compose(f, g);
      for (const auto& h : all) {
        ASSERT_EQ(np::compose(fg, h), np::compose(f, np::compose(g, h)));
      }
    }
  }
}

TEST(Endomorphism, RoundTripThroughLocalMaps) {
  for (const auto& f : np::enumerate_endomorphisms(t22(), 64)) {
    std::map<Point, LocalMap> maps;
    for (std::size_t j = 1; j <= 2; ++j) {
      for (const auto& v : np::points_at_level(t22(), j - 1)) maps.emplace(v, f.local_map(v));
    }
    EXPECT_EQ(np::endo_from_local_maps(t22(), maps), f);
    EXPECT_TRUE(np::verify_commuting(f));
  }
}

TEST(Endomorphism, EqualityMatchesLevelMaps) {
  const auto all = np::enumerate_endomorphisms(t22(), 64);
  for (const auto& f : all) {
    for (const auto& g : all) {
      const bool same_levels = np::level_map(f, 1) == np::level_map(g, 1) && np::leaf_map(f) == np::leaf_map(g);
      EXPECT_EQ(f == g, same_levels);
    }
  }
}

TEST(FromLeafMap, AgreesWithRespectOracle) {
  for (auto t : {PartitionType({2}), PartitionType({3}), t22()}) {
    const std::size_t leaves = t.leaf_count();
    std::uint64_t accepted = 0;
    oracle::for_each_map(leaves, leaves, [&](const std::vector<std::uint32_t>& m) {
      const auto r = np::from_leaf_map(t, m);
      const bool ok = std::holds_alternative<Endomorphism>(r);
      ASSERT_EQ(ok, oracle::respects(t, m));
      if (ok) {
        ++accepted;
        EXPECT_EQ(np::leaf_map(std::get<Endomorphism>(r)), m);
      }
    });
    std::uint64_t formula = 1;
    for (std::size_t j = 1; j <= t.depth(); ++j) formula *= oracle::power(t.arity(j), t.level_size(j));
    EXPECT_EQ(accepted, formula);
    EXPECT_EQ(np::monoid_size(t), formula);
    EXPECT_EQ(np::enumerate_endomorphisms(t, 1000).size(), formula);
  }
}

TEST(FromLeafMap, RejectionNamesTheBlock) {
  // (1,1)->(1,1), (1,2)->(2,1), (2,.)->(2,.)
  const auto r = np::from_leaf_map(t22(), std::vector<std::uint32_t>{0, 2, 2, 3});
  ASSERT_TRUE(std::holds_alternative<np::Rejection>(r));
  const auto& rej = std::get<np::Rejection>(r);
  EXPECT_EQ(rej.level, 1u);
  EXPECT_EQ(rej.block, pt({1}));
  EXPECT_EQ(np::from_leaf_map(t22(), std::vector<std::uint32_t>{0, 1, 2, 3}),
            (std::variant<Endomorphism, np::Rejection>(Endomorphism::identity(t22()))));
  EXPECT_THROW(np::from_leaf_map(t22(), std::vector<std::uint32_t>{0, 1, 2}), np::InvalidArgument);
  EXPECT_THROW(np::from_leaf_map(t22(), std::vector<std::uint32_t>{0, 1, 2, 4}), np::InvalidArgument);
}

TEST(FromLeafMap, InvertsLeafMap) {
  std::mt19937_64 rng(5);
  for (auto t : {t22(), PartitionType({3, 3}), PartitionType({2, 2, 3})}) {
    for (int i = 0; i < 200; ++i) {
      const auto f = np::random_endomorphism(t, rng);
      EXPECT_EQ(std::get<Endomorphism>(np::from_leaf_map(t, np::leaf_map(f))), f);
    }
  }
}

TEST(Enumerate, AscendingDistinctAndBounded) {
  const auto all = np::enumerate_endomorphisms(t22(), 64);
  ASSERT_EQ(all.size(), 64u);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1].table(), all[i].table());
  std::unordered_set<Endomorphism> set(all.begin(), all.end());
  EXPECT_EQ(set.size(), 64u);
  EXPECT_EQ(np::monoid_size(PartitionType({3, 3})), 531441u);
  EXPECT_EQ(np::monoid_size(PartitionType({1})), 1u);
  try {
    np::enumerate_endomorphisms(PartitionType({3, 3}), 1000);
    FAIL();
  } catch (const np::Infeasible& e) {
    EXPECT_EQ(e.bound(), 1000u);
  }
}

TEST(Enumerate, RandomAutomorphismsAreAutomorphisms) {
  std::mt19937_64 rng(9);
  PartitionType t({3, 4, 2});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(np::stratum(np::random_endomorphism(t, rng, true)), 3u);
}

TEST(Endomorphism, HashConsistentWithEquality) {
  const auto all = np::enumerate_endomorphisms(t22(), 64);
  for (const auto& f : all) {
    Endomorphism copy(f.type(), f.table());
    EXPECT_EQ(std::hash<Endomorphism>{}(copy), std::hash<Endomorphism>{}(f));
  }
}
