#ifndef NP_PREDICATES_HPP
#define NP_PREDICATES_HPP

// The level-invertibility predicates P_j, strata, and the witnesses used to
// show that each inclusion P_j(n) < P_{j-1}(n) has relative rank one.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "np/elementary.hpp"
#include "np/endomorphism.hpp"
#include "np/parallel.hpp"

namespace np {

inline bool is_bijection(const std::vector<std::uint32_t>& m) {
  std::vector<bool> hit(m.size(), false);
  for (auto x : m) {
    if (x >= m.size() || hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

// P_j(f): the level-j map of f is invertible.
inline bool pred_level(const Endomorphism& f, std::size_t j) {
  f.type().check_level(j, 1);
  return is_bijection(level_map(f, j));
}

// Largest j with P_j(f), 0 if P_1 fails. P_j implies P_{j-1}, so the scan
// stops at the first failing level.
inline std::size_t stratum(const Endomorphism& f) {
  const PartitionType& type = f.type();
  for (std::size_t j = 1; j <= type.depth(); ++j) {
    // Given P_{j-1}, f_j is a bijection iff every level-j local map is one.
    for (std::size_t v = 0; v < type.level_size(j - 1); ++v) {
      auto fv = f.local(j, v);
      std::vector<bool> hit(fv.size(), false);
      for (auto x : fv) {
        if (hit[x]) return j - 1;
        hit[x] = true;
      }
    }
  }
  return type.depth();
}

// A finite conjunction P_{j1} & P_{j2} & ... of level predicates.
struct PredicateId {
  std::vector<std::size_t> levels;

  static PredicateId level(std::size_t j) { return {{j}}; }

  static PredicateId all_levels(std::size_t k) {
    PredicateId p;
    for (std::size_t j = 1; j <= k; ++j) p.levels.push_back(j);
    return p;
  }

  bool operator()(const Endomorphism& f) const {
    return std::all_of(levels.begin(), levels.end(),
                       [&](std::size_t j) { return pred_level(f, j); });
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (i) s += "&";
      s += "P_" + std::to_string(levels[i]);
    }
    return s;
  }
};

struct PrimitivityResult {
  bool primitive = true;
  std::size_t pairs_checked = 0;
  // Indices (a, b) into the enumeration of P(n) of the first pair, in row-major
  // scan order, with P(ab) != (P(a) and P(b)).
  std::optional<std::pair<std::size_t, std::size_t>> counterexample;
};

// Exhaustively checks P(ab) <=> P(a) & P(b) over all ordered pairs.
template <class Predicate>
  requires std::is_invocable_r_v<bool, const Predicate&, const Endomorphism&>
PrimitivityResult check_primitive(const Predicate& predicate, const std::vector<Endomorphism>& elements,
                                  std::size_t workers = 1) {
  if constexpr (std::is_same_v<Predicate, PredicateId>) {
    if (predicate.levels.empty()) throw InvalidArgument("empty predicate");
  }
  const std::size_t n = elements.size();
  std::vector<char> value(n);
  for (std::size_t i = 0; i < n; ++i) value[i] = predicate(elements[i]);
  std::vector<std::optional<std::size_t>> first_bad(n);
  parallel_for(n, workers, [&](std::size_t a) {
    for (std::size_t b = 0; b < n; ++b) {
      const bool lhs = predicate(compose(elements[a], elements[b]));
      if (lhs != (value[a] && value[b])) {
        first_bad[a] = b;
        return;
      }
    }
  });
  PrimitivityResult result;
  result.pairs_checked = n * n;
  for (std::size_t a = 0; a < n; ++a) {
    if (first_bad[a]) {
      result.primitive = false;
      result.counterexample = std::pair{a, *first_bad[a]};
      break;
    }
  }
  return result;
}

inline PrimitivityResult check_primitive(const PredicateId& predicate, const PartitionType& type,
                                         std::size_t bound = 4096, std::size_t workers = 1) {
  return check_primitive(predicate, enumerate_endomorphisms(type, bound), workers);
}

// [tau, u] with tau = (1 -> 2, identity elsewhere) on level j and u = (1,...,1).
inline Endomorphism step_witness(const PartitionType& type, std::size_t j) {
  type.check_level(j, 1);
  if (type.arity(j) < 2) {
    throw Unsupported("step witness needs n_" + std::to_string(j) + " >= 2", j);
  }
  std::vector<std::uint32_t> tau(type.arity(j));
  for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = static_cast<std::uint32_t>(i);
  tau[0] = 1;
  return bracket(type, LocalMap(std::move(tau)), Point{std::vector<std::size_t>(j - 1, 0)});
}

// An involution h of I(n) exchanging the subtrees below u = (1,...,1) and v
// at level j-1, so that [tau,v] = h [tau,u] h. Let p be the first coordinate
// where v differs from u: h swaps the level-(p+1) blocks (1,..,1,1) and
// (1,..,1,v_p) and, inside them, exchanges 1 and v_q in each coordinate
// p < q < j-1. Everything outside those two blocks is fixed. When v and u
// differ only in their last coordinate this is the plain exchange of the
// blocks below u and v.
inline Endomorphism conjugator_h(const PartitionType& type, std::size_t j, const Point& v) {
  type.check_level(j, 1);
  if (v.level() != j - 1) {
    throw InvalidArgument("conjugator anchor " + v.to_string() + " must lie at level " +
                          std::to_string(j - 1));
  }
  point_index(type, v);
  auto p = std::find_if(v.coords.begin(), v.coords.end(), [](std::size_t c) { return c != 0; });
  if (p == v.coords.end()) return Endomorphism::identity(type);
  const std::size_t first = static_cast<std::size_t>(p - v.coords.begin());

  std::vector<std::uint32_t> leaves(type.leaf_count());
  for (std::size_t x = 0; x < leaves.size(); ++x) {
    Point w = point_at(type, type.depth(), x);
    const bool on_path = std::all_of(w.coords.begin(), w.coords.begin() + first,
                                     [](std::size_t c) { return c == 0; });
    const std::size_t c = w.coords[first];
    if (on_path && (c == 0 || c == v.coords[first])) {
      w.coords[first] = c == 0 ? v.coords[first] : 0;
      for (std::size_t q = first + 1; q < j - 1; ++q) {
        if (w.coords[q] == 0) {
          w.coords[q] = v.coords[q];
        } else if (w.coords[q] == v.coords[q]) {
          w.coords[q] = 0;
        }
      }
    }
    leaves[x] = static_cast<std::uint32_t>(point_index(type, w));
  }
  return std::get<Endomorphism>(from_leaf_map(type, leaves));
}

}  // namespace np

#endif
