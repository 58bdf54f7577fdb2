#ifndef NP_RANK_HPP
#define NP_RANK_HPP

// Rank and relative rank of finite semigroups by pruned subset search, the
// 2k lower-bound certificate for P(n), and the constructive 2k-element
// generating set.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "np/closure.hpp"
#include "np/endomorphism.hpp"
#include "np/parallel.hpp"
#include "np/predicates.hpp"
#include "np/semigroup.hpp"
#include "np/wreath.hpp"

namespace np {

// Necessary condition on a candidate generating set; false rejects the
// candidate without running a closure.
using Prune = std::function<bool(std::span<const std::uint32_t>)>;

struct SearchOptions {
  std::size_t workers = 1;
  Prune prune;
};

struct SearchStats {
  std::size_t size = 0;
  std::uint64_t subsets = 0;   // candidates visited
  std::uint64_t pruned = 0;    // rejected by the prune
  std::uint64_t closures = 0;  // closures actually run
  bool found = false;
};

struct SearchOutcome {
  std::optional<std::vector<std::uint32_t>> witness;
  SearchStats stats;
};

// Finds the lexicographically first r-subset X of the non-fixed elements such
// that fixed + X generates S, or proves that none exists. Counts cover every
// candidate up to and including the witness, so they are schedule-independent.
inline SearchOutcome search_generating_set(const FiniteSemigroup& s, std::size_t r,
                                           const SearchOptions& options = {},
                                           std::span<const std::uint32_t> fixed = {}) {
  std::vector<char> is_fixed(s.size(), 0);
  for (auto f : fixed) is_fixed.at(f) = 1;
  std::vector<std::uint32_t> pool;
  for (std::uint32_t x = 0; x < s.size(); ++x) {
    if (!is_fixed[x]) pool.push_back(x);
  }

  SearchOutcome out;
  out.stats.size = r;
  const auto try_candidate = [&](std::span<const std::uint32_t> chosen, SearchStats& stats) {
    ++stats.subsets;
    if (options.prune && !options.prune(chosen)) {
      ++stats.pruned;
      return false;
    }
    ++stats.closures;
    std::vector<std::uint32_t> gens(fixed.begin(), fixed.end());
    gens.insert(gens.end(), chosen.begin(), chosen.end());
    return s.generates(gens);
  };

  if (r == 0) {
    if (try_candidate({}, out.stats)) {
      out.witness = std::vector<std::uint32_t>{};
      out.stats.found = true;
    }
    return out;
  }
  if (r > pool.size()) return out;

  const std::size_t firsts = pool.size() - r + 1;
  std::vector<SearchStats> per_first(firsts);
  std::vector<std::optional<std::vector<std::uint32_t>>> witness(firsts);
  std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};

  parallel_for(firsts, options.workers, [&](std::size_t f) {
    if (f > best.load()) return;
    SearchStats& stats = per_first[f];
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = f + i;
    std::vector<std::uint32_t> chosen(r);
    while (true) {
      if (f > best.load()) return;
      for (std::size_t i = 0; i < r; ++i) chosen[i] = pool[idx[i]];
      if (try_candidate(chosen, stats)) {
        witness[f] = chosen;
        stats.found = true;
        std::size_t cur = best.load();
        while (f < cur && !best.compare_exchange_weak(cur, f)) {
        }
        return;
      }
      // Advance positions 1..r-1; position 0 stays at f.
      std::size_t i = r;
      while (i > 1 && idx[i - 1] == pool.size() - r + (i - 1)) --i;
      if (i <= 1) return;
      ++idx[i - 1];
      for (std::size_t t = i; t < r; ++t) idx[t] = idx[t - 1] + 1;
    }
  });

  const std::size_t last = std::min(best.load(), firsts - 1);
  for (std::size_t f = 0; f <= last; ++f) {
    out.stats.subsets += per_first[f].subsets;
    out.stats.pruned += per_first[f].pruned;
    out.stats.closures += per_first[f].closures;
  }
  if (best.load() < firsts) {
    out.witness = witness[best.load()];
    out.stats.found = true;
  }
  return out;
}

enum class CertificateKind { exact, lower_bound, upper_bound };

inline std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::exact: return "exact";
    case CertificateKind::lower_bound: return "lower-bound";
    case CertificateKind::upper_bound: return "upper-bound";
  }
  return "?";
}

struct RankCertificate {
  CertificateKind kind = CertificateKind::exact;
  std::size_t value = 0;
  std::vector<std::uint32_t> witness;  // element ids of a generating set
  std::vector<SearchStats> searches;   // one per size tried, ascending
  std::vector<std::string> notes;
};

// Smallest r >= 1 such that some r-subset generates S.
inline RankCertificate brute_rank(const FiniteSemigroup& s, std::size_t max_size,
                                  const SearchOptions& options = {}) {
  RankCertificate cert;
  for (std::size_t r = 1; r <= std::min(max_size, s.size()); ++r) {
    auto outcome = search_generating_set(s, r, options);
    cert.searches.push_back(outcome.stats);
    if (outcome.witness) {
      cert.value = r;
      cert.witness = *outcome.witness;
      return cert;
    }
  }
  throw Infeasible("no generating set of size <= " + std::to_string(max_size), max_size);
}

// Smallest r such that T together with some r-subset of S generates S.
inline RankCertificate relative_rank(const FiniteSemigroup& s, std::span<const std::uint32_t> t,
                                     std::size_t max_size, const SearchOptions& options = {}) {
  if (!s.is_closed(t)) throw InvalidArgument("relative_rank: T is not closed under the product");
  RankCertificate cert;
  for (std::size_t r = 0; r <= max_size; ++r) {
    auto outcome = search_generating_set(s, r, options, t);
    cert.searches.push_back(outcome.stats);
    if (outcome.witness) {
      cert.value = r;
      cert.witness = *outcome.witness;
      return cert;
    }
  }
  throw Infeasible("no relative generating set of size <= " + std::to_string(max_size), max_size);
}

// ---------------------------------------------------------------------------
// P(n)-specific pieces.

struct EnumeratedMonoid {
  PartitionType type;
  std::vector<Endomorphism> elements;  // ids = positions, ascending table order
  FiniteSemigroup table;
  std::vector<std::size_t> strata;
};

inline EnumeratedMonoid enumerate_monoid(const PartitionType& type, std::size_t bound = 4096,
                                         std::size_t workers = 1) {
  auto elements = enumerate_endomorphisms(type, bound);
  auto table = FiniteSemigroup::from_elements(
      elements, [](const Endomorphism& a, const Endomorphism& b) { return compose(a, b); },
      workers);
  std::vector<std::size_t> strata;
  strata.reserve(elements.size());
  for (const auto& f : elements) strata.push_back(stratum(f));
  return {type, std::move(elements), std::move(table), std::move(strata)};
}

// Ids of P_j(n) = elements of stratum >= j.
inline std::vector<std::uint32_t> predicate_subset(const EnumeratedMonoid& m, std::size_t j) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < m.elements.size(); ++i) {
    if (m.strata[i] >= j) out.push_back(i);
  }
  return out;
}

// The submonoid on the given ids, re-indexed densely in the given order.
inline FiniteSemigroup restrict_to(const FiniteSemigroup& s, std::span<const std::uint32_t> ids) {
  std::vector<std::uint32_t> local(s.size(), std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t i = 0; i < ids.size(); ++i) local[ids[i]] = i;
  std::vector<std::uint32_t> table(ids.size() * ids.size());
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = 0; b < ids.size(); ++b) {
      const std::uint32_t p = local[s.product(ids[a], ids[b])];
      if (p == std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidArgument("restrict_to: subset is not closed");
      }
      table[a * ids.size() + b] = p;
    }
  }
  return FiniteSemigroup(ids.size(), std::move(table));
}

// Any generating set of P(n) has an element of stratum exactly j-1 for every
// level j with n_j >= 2, and its automorphisms have parity images spanning
// the image of eps. `elements` are the id-indexed elements of the searched
// semigroup, which must be P(n) or one of its P_j(n).
inline Prune stratum_parity_prune(const PartitionType& type, const std::vector<Endomorphism>& elements,
                                  std::size_t lowest_stratum = 0) {
  const std::size_t k = type.depth();
  std::vector<std::size_t> strata;
  std::vector<std::uint64_t> masks;
  for (const auto& f : elements) {
    strata.push_back(stratum(f));
    masks.push_back(strata.back() == k ? parity(f).mask() : 0);
  }
  std::vector<std::size_t> required;
  std::size_t parity_dim = 0;
  for (std::size_t j = 1; j <= k; ++j) {
    if (type.arity(j) < 2) continue;
    ++parity_dim;
    if (j - 1 >= lowest_stratum) required.push_back(j - 1);
  }
  return [strata = std::move(strata), masks = std::move(masks), required = std::move(required),
          parity_dim](std::span<const std::uint32_t> chosen) {
    for (auto need : required) {
      bool hit = false;
      for (auto x : chosen) hit = hit || strata[x] == need;
      if (!hit) return false;
    }
    std::vector<std::uint64_t> basis;
    std::size_t rank = 0;
    for (auto x : chosen) {
      std::uint64_t v = masks[x];
      for (auto b : basis) v = std::min(v, v ^ b);
      if (v) {
        basis.push_back(v);
        ++rank;
      }
    }
    return rank >= parity_dim;
  };
}

// ---------------------------------------------------------------------------
// Lower bound rk(P(n)) >= 2k.

struct StratumRequirement {
  std::size_t level = 0;    // j
  std::size_t stratum = 0;  // j - 1
  Endomorphism witness;     // an element of stratum exactly j-1
};

struct LowerBoundCertificate {
  PartitionType type;
  std::size_t value = 0;
  std::vector<StratumRequirement> strata;
  std::vector<Endomorphism> parity_witnesses;  // g_j = [(1,2), (1,...,1)]
  std::vector<ParityVector> parity_rows;       // eps(g_j)
  std::size_t parity_rank = 0;                 // rank over GF(2)
};

inline LowerBoundCertificate lower_bound_2k(const PartitionType& type) {
  const std::size_t k = type.depth();
  for (std::size_t j = 1; j <= k; ++j) {
    if (type.arity(j) < 2) {
      throw Unsupported("the 2k lower bound needs n_" + std::to_string(j) + " >= 2", j);
    }
  }
  LowerBoundCertificate cert{type, 0, {}, {}, {}, 0};
  for (std::size_t j = 1; j <= k; ++j) cert.strata.push_back({j, j - 1, step_witness(type, j)});
  cert.parity_witnesses = parity_witnesses(type);
  for (const auto& g : cert.parity_witnesses) cert.parity_rows.push_back(parity(g));
  cert.parity_rank = gf2_rank(cert.parity_rows);
  cert.value = cert.strata.size() + cert.parity_rank;
  return cert;
}

struct LowerBoundCheck {
  bool strata_nonempty = false;    // each witness lies in its stratum
  bool parity_rows_match = false;  // each row is eps of its witness
  bool parity_full_rank = false;   // rank k over GF(2)
  bool value_consistent = false;   // value = #strata + rank = 2k
  bool holds() const {
    return strata_nonempty && parity_rows_match && parity_full_rank && value_consistent;
  }
};

// Re-derives every claim of the certificate from its witness data.
inline LowerBoundCheck check_certificate(const LowerBoundCertificate& cert) {
  LowerBoundCheck c;
  const std::size_t k = cert.type.depth();
  c.strata_nonempty = cert.strata.size() == k;
  for (std::size_t i = 0; i < cert.strata.size(); ++i) {
    const auto& r = cert.strata[i];
    c.strata_nonempty = c.strata_nonempty && r.level == i + 1 && r.stratum == i &&
                        stratum(r.witness) == r.stratum;
  }
  c.parity_rows_match = cert.parity_witnesses.size() == cert.parity_rows.size();
  for (std::size_t i = 0; c.parity_rows_match && i < cert.parity_rows.size(); ++i) {
    c.parity_rows_match = parity(cert.parity_witnesses[i]) == cert.parity_rows[i];
  }
  c.parity_full_rank = gf2_rank(cert.parity_rows) == k && cert.parity_rank == k;
  c.value_consistent = cert.value == 2 * k && cert.value == cert.strata.size() + cert.parity_rank;
  return c;
}

struct CandidateCheck {
  std::vector<std::size_t> per_stratum;  // generator count per stratum 0..k
  bool every_stratum_hit = false;        // strata 0..k-1 each nonempty
  std::size_t parity_rank = 0;           // GF(2) rank of eps over stratum-k members
  bool parity_spans = false;
  bool meets_bound() const { return every_stratum_hit && parity_spans; }
};

// The two counting claims evaluated on a candidate generating set.
inline CandidateCheck check_candidate(const LowerBoundCertificate& cert,
                                      const std::vector<Endomorphism>& gens) {
  const std::size_t k = cert.type.depth();
  CandidateCheck c;
  c.per_stratum.assign(k + 1, 0);
  std::vector<ParityVector> rows;
  for (const auto& g : gens) {
    const std::size_t s = stratum(g);
    ++c.per_stratum[s];
    if (s == k) rows.push_back(parity(g));
  }
  c.every_stratum_hit = std::all_of(c.per_stratum.begin(), c.per_stratum.end() - 1,
                                    [](std::size_t n) { return n > 0; });
  c.parity_rank = gf2_rank(rows);
  c.parity_spans = c.parity_rank == k;
  return c;
}

// ---------------------------------------------------------------------------
// Upper bound: k group generators plus the k step witnesses.

struct GeneratingSet {
  std::vector<Endomorphism> generators;
  ClosureReport report;
};

inline GeneratingSet full_generating_set(const PartitionType& type, ClosureOptions options = {},
                                         TopCycle top_cycle = TopCycle::included) {
  GeneratingSet out;
  out.generators = group_generators(type, top_cycle);
  for (std::size_t j = 1; j <= type.depth(); ++j) out.generators.push_back(step_witness(type, j));
  auto size = monoid_size(type);
  if (!size || *size > options.bound) {
    throw Infeasible("P" + type.to_string() + " exceeds the closure bound " +
                         std::to_string(options.bound),
                     options.bound);
  }
  options.target = *size;
  auto result = closure(out.generators,
                        [](const Endomorphism& a, const Endomorphism& b) { return compose(a, b); },
                        options);
  out.report = std::move(result.report);
  return out;
}

}  // namespace np

#endif
