#include <gtest/gtest.h>

#include <random>
#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "np/rank.hpp"
#include "oracle.hpp"

using np::Endomorphism;
using np::PartitionType;

namespace {

const auto kCompose = [](const Endomorphism& a, const Endomorphism& b) { return np::compose(a, b); };

// Fixed-point closure over leaf tables; shares nothing with the BFS code.
std::set<std::vector<std::uint32_t>> naive_closure(const std::vector<std::vector<std::uint32_t>>& gens) {
  std::set<std::vector<std::uint32_t>> s(gens.begin(), gens.end());
  while (true) {
    std::set<std::vector<std::uint32_t>> next = s;
    for (const auto& a : s) {
      for (const auto& b : s) next.insert(oracle::after(a, b));
    }
    if (next.size() == s.size()) return s;
    s = std::move(next);
  }
}

std::vector<Endomorphism> random_gens(const PartitionType& t, std::size_t count, std::mt19937_64& rng) {
  std::vector<Endomorphism> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(np::random_endomorphism(t, rng, i % 2 == 0));
  return out;
}

np::FiniteSemigroup symmetric_group_table(std::size_t n) {
  auto g = np::make_symmetric(n);
  const auto all = g->enumerate();
  const auto mul = [&](const np::GroupElement& a, const np::GroupElement& b) { return g->multiply(a, b); };
  return np::FiniteSemigroup::from_elements<np::GroupElement, const decltype(mul)&, np::GroupElementHash>(all, mul);
}

// k group generators followed by the k step witnesses.
std::vector<Endomorphism> constructed(const PartitionType& t) {
  auto gens = np::group_generators(t);
  for (std::size_t j = 1; j <= t.depth(); ++j) gens.push_back(np::step_witness(t, j));
  return gens;
}

}  // namespace

TEST(Closure, IdentityAloneIsTrivial) {
  const PartitionType t({2, 2});
  const auto r = np::closure(std::vector<Endomorphism>{Endomorphism::identity(t)}, kCompose);
  EXPECT_EQ(r.report.element_count, 1u);
  EXPECT_TRUE(r.report.complete);
}

TEST(Closure, MatchesNaiveFixedPoint) {
  std::mt19937_64 rng(13);
  for (const PartitionType& t : {PartitionType({2, 2}), PartitionType({3}), PartitionType({2, 3}), PartitionType({2, 2, 2})}) {
    for (int trial = 0; trial < 8; ++trial) {
      const auto gens = random_gens(t, 1 + trial % 3, rng);
      std::vector<std::vector<std::uint32_t>> leaf;
      for (const auto& g : gens) leaf.push_back(oracle::leaf_table(t, g.table()));
      const auto expect = naive_closure(leaf);
      const auto r = np::closure(gens, kCompose);
      ASSERT_EQ(r.report.element_count, expect.size()) << t.to_string();
      for (const auto& x : r.elements) EXPECT_TRUE(expect.count(oracle::leaf_table(t, x.table())));
      EXPECT_EQ(r.report.word_lengths.front(), 1u);
      EXPECT_TRUE(std::is_sorted(r.report.word_lengths.begin(), r.report.word_lengths.end()));
    }
  }
}

TEST(Closure, IdempotentAndMonotone) {
  std::mt19937_64 rng(17);
  const PartitionType t({2, 3});
  for (int trial = 0; trial < 10; ++trial) {
    const auto gens = random_gens(t, 2, rng);
    const auto first = np::closure(gens, kCompose);
    const auto again = np::closure(first.elements, kCompose);
    EXPECT_EQ(again.report.element_count, first.report.element_count);
    auto more = gens;
    more.push_back(np::random_endomorphism(t, rng));
    const auto bigger = np::closure(more, kCompose);
    EXPECT_GE(bigger.report.element_count, first.report.element_count);
    const std::unordered_set<Endomorphism> big(bigger.elements.begin(), bigger.elements.end());
    for (const auto& x : first.elements) EXPECT_TRUE(big.count(x));
  }
}

TEST(Closure, WorkerCountDoesNotChangeTheResult) {
  const PartitionType t({3, 3});
  const auto gens = constructed(t);
  np::ClosureOptions base;
  base.bound = 60000;
  const auto one = np::closure(gens, kCompose, base);
  for (std::size_t w : {std::size_t{2}, std::max<std::size_t>(3, np::hardware_workers())}) {
    auto opts = base;
    opts.workers = w;
    const auto many = np::closure(gens, kCompose, opts);
    EXPECT_EQ(many.elements, one.elements);
    EXPECT_EQ(many.report.word_lengths, one.report.word_lengths);
    EXPECT_EQ(many.report.complete, one.report.complete);
  }
}

TEST(Closure, BoundStopsExactlyAtTheBound) {
  np::ClosureOptions opts;
  opts.bound = 10;
  opts.target = 531441;
  const auto r = np::closure(constructed(PartitionType({3, 3})), kCompose, opts);
  EXPECT_FALSE(r.report.complete);
  EXPECT_EQ(r.report.element_count, 10u);
  EXPECT_EQ(r.report.reached_target, false);
}

TEST(Closure, SeededIdentityHasWordLengthZero) {
  const PartitionType t({3});
  const auto id = Endomorphism::identity(t);
  const auto gens = np::group_generators(t);
  const auto r = np::closure(gens, kCompose, {}, std::optional<Endomorphism>(id));
  EXPECT_EQ(r.elements.front(), id);
  EXPECT_EQ(r.report.word_lengths.front(), 0u);
  EXPECT_EQ(r.report.element_count, 2u);
}

TEST(FiniteSemigroupTest, RejectsBadTables) {
  EXPECT_THROW(np::FiniteSemigroup(2, {0, 1, 1}), np::InvalidArgument);
  EXPECT_THROW(np::FiniteSemigroup(2, {0, 1, 1, 2}), np::InvalidArgument);
  const PartitionType t({3});
  std::vector<Endomorphism> not_closed{Endomorphism::identity(t), np::group_generators(t)[0],
                                       np::step_witness(t, 1)};
  EXPECT_THROW(np::FiniteSemigroup::from_elements(not_closed, kCompose), np::InvalidArgument);
  std::vector<Endomorphism> dup{Endomorphism::identity(t), Endomorphism::identity(t)};
  EXPECT_THROW(np::FiniteSemigroup::from_elements(dup, kCompose), np::InvalidArgument);
  const auto all = np::enumerate_endomorphisms(t, 100);
  EXPECT_THROW(np::FiniteSemigroup::from_elements(all, kCompose, 1, 100), np::Infeasible);
  EXPECT_THROW(np::enumerate_monoid(PartitionType({3, 3}), 4096), np::Infeasible);
}

TEST(FiniteSemigroupTest, TableAgreesWithComposition) {
  const auto m = np::enumerate_monoid(PartitionType({2, 2}));
  ASSERT_EQ(m.table.size(), 64u);
  for (std::uint32_t a = 0; a < 64; ++a) {
    for (std::uint32_t b = 0; b < 64; ++b) {
      EXPECT_EQ(oracle::leaf_table(m.type, m.elements[m.table.product(a, b)].table()),
                oracle::after(oracle::leaf_table(m.type, m.elements[a].table()),
                              oracle::leaf_table(m.type, m.elements[b].table())));
    }
  }
  EXPECT_TRUE(m.table.is_closed(np::predicate_subset(m, 1)));
  EXPECT_TRUE(m.table.is_closed(np::predicate_subset(m, 2)));
}

TEST(BruteRank, SmallKnownRanks) {
  EXPECT_EQ(np::brute_rank(symmetric_group_table(3), 3).value, 2u);
  EXPECT_EQ(np::brute_rank(symmetric_group_table(4), 3).value, 2u);
  // P((3)) is the full transformation monoid on 3 points.
  const auto t3 = np::enumerate_monoid(PartitionType({3}));
  ASSERT_EQ(t3.elements.size(), 27u);
  const auto r = np::brute_rank(t3.table, 4);
  EXPECT_EQ(r.value, 3u);
  EXPECT_EQ(r.kind, np::CertificateKind::exact);
  EXPECT_TRUE(t3.table.generates(r.witness));
}

TEST(BruteRank, TwoTwoNeedsFourWithAndWithoutPruning) {
  const auto m = np::enumerate_monoid(PartitionType({2, 2}));
  np::SearchOptions pruned;
  pruned.prune = np::stratum_parity_prune(m.type, m.elements);
  const auto a = np::brute_rank(m.table, 5, pruned);
  const auto b = np::brute_rank(m.table, 5);
  EXPECT_EQ(a.value, 4u);
  EXPECT_EQ(b.value, 4u);
  EXPECT_EQ(a.witness, b.witness);
  // Exhausting size 3: every pruned subset is also refuted by closure.
  ASSERT_EQ(b.searches.size(), 4u);
  EXPECT_EQ(b.searches[2].subsets, 41664u);  // C(64,3)
  EXPECT_EQ(b.searches[2].closures, 41664u);
  EXPECT_FALSE(b.searches[2].found);
  EXPECT_EQ(a.searches[2].subsets, 41664u);
  EXPECT_EQ(a.searches[2].pruned, 41664u);
  EXPECT_FALSE(a.searches[2].found);
  // The witness meets the certificate's counting claims.
  std::vector<Endomorphism> gens;
  for (auto id : a.witness) gens.push_back(m.elements[id]);
  EXPECT_TRUE(np::check_candidate(np::lower_bound_2k(m.type), gens).meets_bound());
}

TEST(BruteRank, WitnessAndStatsIndependentOfWorkers) {
  const auto m = np::enumerate_monoid(PartitionType({2, 2}));
  np::SearchOptions opts;
  opts.prune = np::stratum_parity_prune(m.type, m.elements);
  const auto one = np::brute_rank(m.table, 5, opts);
  for (std::size_t w : {2u, 4u, 7u}) {
    opts.workers = w;
    const auto many = np::brute_rank(m.table, 5, opts);
    EXPECT_EQ(many.witness, one.witness);
    ASSERT_EQ(many.searches.size(), one.searches.size());
    for (std::size_t i = 0; i < one.searches.size(); ++i) {
      EXPECT_EQ(many.searches[i].subsets, one.searches[i].subsets);
      EXPECT_EQ(many.searches[i].pruned, one.searches[i].pruned);
      EXPECT_EQ(many.searches[i].closures, one.searches[i].closures);
    }
  }
}

TEST(BruteRank, NoGeneratingSetWithinTheLimitIsInfeasible) {
  const auto m = np::enumerate_monoid(PartitionType({2, 2}));
  EXPECT_THROW(np::brute_rank(m.table, 2), np::Infeasible);
}

TEST(RelativeRank, TelescopesOverTheChain) {
  const auto m = np::enumerate_monoid(PartitionType({2, 2}));
  const auto p1 = np::predicate_subset(m, 1);
  const auto p2 = np::predicate_subset(m, 2);
  ASSERT_EQ(p2.size(), 8u);
  const auto group = np::restrict_to(m.table, p2);
  EXPECT_EQ(np::brute_rank(group, 3).value, 2u);
  EXPECT_EQ(np::relative_rank(m.table, p2, 3).value, 2u);
  EXPECT_EQ(np::relative_rank(m.table, p1, 3).value, 1u);
  // P_2 inside P_1, re-indexed so that P_2 is a prefix.
  std::vector<std::uint32_t> order = p2;
  for (auto x : p1) {
    if (m.strata[x] == 1) order.push_back(x);
  }
  const auto sub = np::restrict_to(m.table, order);
  std::vector<std::uint32_t> prefix(p2.size());
  std::iota(prefix.begin(), prefix.end(), 0u);
  EXPECT_EQ(np::relative_rank(sub, prefix, 3).value, 1u);
  EXPECT_EQ(np::brute_rank(m.table, 5).value, np::brute_rank(group, 3).value + np::relative_rank(m.table, p2, 3).value);
}

TEST(RelativeRank, AgainstTheIdentityEqualsRank) {
  const auto t3 = np::enumerate_monoid(PartitionType({3}));
  std::uint32_t id = 0;
  while (!(t3.elements[id] == Endomorphism::identity(t3.type))) ++id;
  const std::vector<std::uint32_t> fixed{id};
  EXPECT_EQ(np::relative_rank(t3.table, fixed, 4).value, np::brute_rank(t3.table, 4).value);
  const std::vector<std::uint32_t> not_closed{np::predicate_subset(t3, 1)[1]};
  if (!t3.table.is_closed(not_closed)) EXPECT_THROW(np::relative_rank(t3.table, not_closed, 4), np::InvalidArgument);
}

TEST(LowerBound, CertificateIsTwoK) {
  for (const PartitionType& t : {PartitionType({2}), PartitionType({2, 2}), PartitionType({3, 3}), PartitionType({2, 3, 4})}) {
    const auto cert = np::lower_bound_2k(t);
    EXPECT_EQ(cert.value, 2 * t.depth());
    EXPECT_EQ(cert.parity_rank, t.depth());
    EXPECT_TRUE(np::check_certificate(cert).holds());
  }
  EXPECT_THROW(np::lower_bound_2k(PartitionType({1, 2})), np::Unsupported);
}

TEST(LowerBound, TamperedCertificatesFail) {
  auto cert = np::lower_bound_2k(PartitionType({3, 3}));
  auto bad_value = cert;
  bad_value.value = 5;
  EXPECT_FALSE(np::check_certificate(bad_value).holds());
  auto bad_row = cert;
  bad_row.parity_rows[1] = bad_row.parity_rows[0];
  EXPECT_FALSE(np::check_certificate(bad_row).parity_rows_match);
  EXPECT_FALSE(np::check_certificate(bad_row).parity_full_rank);
  auto bad_stratum = cert;
  std::swap(bad_stratum.strata[0].witness, bad_stratum.strata[1].witness);
  EXPECT_FALSE(np::check_certificate(bad_stratum).strata_nonempty);
}

TEST(LowerBound, CandidatesBelowTwoKMissAClaim) {
  const PartitionType t({3, 3});
  const auto cert = np::lower_bound_2k(t);
  const auto full = constructed(t);
  EXPECT_TRUE(np::check_candidate(cert, full).meets_bound());
  for (std::size_t drop = 0; drop < full.size(); ++drop) {
    auto fewer = full;
    fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(drop));
    EXPECT_FALSE(np::check_candidate(cert, fewer).meets_bound()) << drop;
  }
}

TEST(UpperBound, ThreeThreeGeneratedByFour) {
  const PartitionType t({3, 3});
  np::ClosureOptions opts;
  opts.workers = np::hardware_workers();
  opts.record_words = false;
  const auto g = np::full_generating_set(t, opts);
  EXPECT_EQ(g.generators.size(), 4u);
  EXPECT_TRUE(g.report.complete);
  EXPECT_EQ(g.report.element_count, 531441u);  // 3^12
  EXPECT_EQ(g.report.reached_target, true);
}

TEST(UpperBound, DepthOneConstructionFallsShort) {
  const auto g = np::full_generating_set(PartitionType({3}));
  EXPECT_EQ(g.generators.size(), 2u);
  EXPECT_LT(g.report.element_count, 27u);
  EXPECT_EQ(g.report.reached_target, false);
}

TEST(UpperBound, TooLargeIsInfeasible) {
  EXPECT_THROW(np::full_generating_set(PartitionType({3, 3}), {.bound = 1000}), np::Infeasible);
  EXPECT_THROW(np::full_generating_set(PartitionType({2, 2})), np::Unsupported);
}
