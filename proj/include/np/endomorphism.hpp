#ifndef NP_ENDOMORPHISM_HPP
#define NP_ENDOMORPHISM_HPP

// Elements of P(n), the endomorphism monoid of I(n), stored as their table of
// local maps f[v]. The level maps are derived on demand by
//
//   f_j(v, i) = (f_{j-1}(v), f[v](i)).
//
// Composition applies the right factor first: compose(f, g) = f o g.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "np/errors.hpp"
#include "np/partition_type.hpp"

namespace np {

class Endomorphism {
 public:
  // `table` holds, for j = 1..k and each level-(j-1) point v in ascending
  // order, the n_j images of f[v].
  Endomorphism(PartitionType type, std::vector<std::uint32_t> table)
      : type_(std::move(type)), table_(std::move(table)) {
    if (table_.size() != type_.table_size()) {
      throw InvalidArgument("local map table has " + std::to_string(table_.size()) +
                            " entries, type " + type_.to_string() + " needs " +
                            std::to_string(type_.table_size()));
    }
    for (std::size_t j = 1; j <= type_.depth(); ++j) {
      const std::size_t n = type_.arity(j);
      const std::size_t lo = type_.table_offset(j);
      for (std::size_t e = lo; e < lo + type_.level_size(j); ++e) {
        if (table_[e] >= n) throw InvalidArgument("local map image out of range");
      }
    }
  }

  static Endomorphism identity(const PartitionType& type) {
    std::vector<std::uint32_t> table(type.table_size());
    for (std::size_t j = 1; j <= type.depth(); ++j) {
      const std::size_t n = type.arity(j);
      const std::size_t lo = type.table_offset(j);
      for (std::size_t e = 0; e < type.level_size(j); ++e) {
        table[lo + e] = static_cast<std::uint32_t>(e % n);
      }
    }
    return Endomorphism(type, std::move(table));
  }

  const PartitionType& type() const noexcept { return type_; }
  std::size_t depth() const noexcept { return type_.depth(); }
  const std::vector<std::uint32_t>& table() const noexcept { return table_; }

  // f[v] for the level-(j-1) point with id `prefix`.
  std::span<const std::uint32_t> local(std::size_t j, std::size_t prefix) const {
    const std::size_t n = type_.arity(j);
    if (prefix >= type_.level_size(j - 1)) throw InvalidArgument("prefix id out of range");
    return {table_.data() + type_.table_offset(j) + prefix * n, n};
  }

  LocalMap local_map(const Point& v) const {
    const std::size_t j = v.level() + 1;
    type_.check_level(j, 1);
    auto s = local(j, point_index(type_, v));
    return LocalMap(std::vector<std::uint32_t>(s.begin(), s.end()));
  }

  bool is_identity() const { return *this == identity(type_); }

  friend bool operator==(const Endomorphism& a, const Endomorphism& b) {
    return a.table_ == b.table_ && a.type_ == b.type_;
  }

  std::size_t hash() const noexcept {
    // FNV-1a over the table.
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : table_) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

 private:
  PartitionType type_;
  std::vector<std::uint32_t> table_;
};

// f_j as a table over level-j point ids; f_0 is the identity on {*}.
inline std::vector<std::uint32_t> level_map(const Endomorphism& f, std::size_t j) {
  const PartitionType& type = f.type();
  type.check_level(j, 0);
  std::vector<std::uint32_t> current{0};
  for (std::size_t s = 1; s <= j; ++s) {
    const std::size_t n = type.arity(s);
    std::vector<std::uint32_t> next(type.level_size(s));
    for (std::size_t v = 0; v < current.size(); ++v) {
      auto fv = f.local(s, v);
      for (std::size_t i = 0; i < n; ++i) {
        next[v * n + i] = static_cast<std::uint32_t>(current[v] * n + fv[i]);
      }
    }
    current = std::move(next);
  }
  return current;
}

inline std::vector<std::uint32_t> leaf_map(const Endomorphism& f) {
  return level_map(f, f.depth());
}

// (f g)[v] = f[g_{j-1}(v)] o g[v].
inline Endomorphism compose(const Endomorphism& f, const Endomorphism& g) {
  if (!(f.type() == g.type())) throw InvalidArgument("compose: partition type mismatch");
  const PartitionType& type = f.type();
  const auto& ft = f.table();
  const auto& gt = g.table();
  std::vector<std::uint32_t> out(type.table_size());
  std::vector<std::uint32_t> g_prev{0};
  std::vector<std::uint32_t> g_next;
  for (std::size_t j = 1; j <= type.depth(); ++j) {
    const std::size_t n = type.arity(j);
    const std::size_t lo = type.table_offset(j);
    const bool last = j == type.depth();
    if (!last) g_next.resize(type.level_size(j));
    for (std::size_t v = 0; v < g_prev.size(); ++v) {
      const std::size_t w = g_prev[v];
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t gi = gt[lo + v * n + i];
        out[lo + v * n + i] = ft[lo + w * n + gi];
        if (!last) g_next[v * n + i] = static_cast<std::uint32_t>(w * n + gi);
      }
    }
    std::swap(g_prev, g_next);
  }
  return Endomorphism(type, std::move(out));
}

// Builds f from the local maps f[v]. Every prefix point of every level must
// be present with a map of the right size.
inline Endomorphism endo_from_local_maps(const PartitionType& type,
                                         const std::map<Point, LocalMap>& maps) {
  std::vector<std::uint32_t> table(type.table_size());
  std::size_t used = 0;
  for (std::size_t j = 1; j <= type.depth(); ++j) {
    const std::size_t n = type.arity(j);
    for (std::size_t v = 0; v < type.level_size(j - 1); ++v) {
      const Point p = point_at(type, j - 1, v);
      auto it = maps.find(p);
      if (it == maps.end()) throw InvalidArgument("missing local map at " + p.to_string());
      if (it->second.size() != n) {
        throw InvalidArgument("local map at " + p.to_string() + " has size " +
                              std::to_string(it->second.size()) + ", expected " +
                              std::to_string(n));
      }
      std::copy(it->second.image().begin(), it->second.image().end(),
                table.begin() + static_cast<std::ptrdiff_t>(type.table_offset(j) + v * n));
      ++used;
    }
  }
  if (used != maps.size()) throw InvalidArgument("local map table has entries for foreign points");
  return Endomorphism(type, std::move(table));
}

// Checks rho_j o f_{j+1} = f_j o rho_j for every j.
inline bool verify_commuting(const Endomorphism& f) {
  const PartitionType& type = f.type();
  std::vector<std::uint32_t> lower = level_map(f, 0);
  for (std::size_t j = 0; j < type.depth(); ++j) {
    std::vector<std::uint32_t> upper = level_map(f, j + 1);
    const std::size_t n = type.arity(j + 1);
    for (std::size_t p = 0; p < upper.size(); ++p) {
      if (upper[p] / n != lower[p / n]) return false;
    }
    lower = std::move(upper);
  }
  return true;
}

// A leaf map that does not respect the partition: the level-`level` block
// `block` contains leaves `first` and `second` whose images lie in different
// level-`level` blocks.
struct Rejection {
  std::size_t level = 0;
  Point block;
  std::size_t first = 0;
  std::size_t second = 0;

  std::string to_string() const {
    return "block P_" + block.to_string() + " at level " + std::to_string(level) +
           " is split (leaves " + std::to_string(first) + " and " + std::to_string(second) +
           ")";
  }

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

// Accepts a self-map of the leaves iff every block is sent into a single
// block of the same level; returns the induced endomorphism.
inline std::variant<Endomorphism, Rejection> from_leaf_map(const PartitionType& type,
                                                           std::span<const std::uint32_t> m) {
  const std::size_t k = type.depth();
  const std::size_t leaves = type.leaf_count();
  if (m.size() != leaves) throw InvalidArgument("leaf map has the wrong size");
  for (auto x : m) {
    if (x >= leaves) throw InvalidArgument("leaf map image out of range");
  }
  for (std::size_t j = 1; j < k; ++j) {
    const std::size_t width = leaves / type.level_size(j);
    for (std::size_t b = 0; b < type.level_size(j); ++b) {
      const std::size_t first = b * width;
      const std::size_t target = m[first] / width;
      for (std::size_t x = first + 1; x < first + width; ++x) {
        if (m[x] / width != target) {
          return Rejection{j, point_at(type, j, b), first, x};
        }
      }
    }
  }
  std::vector<std::uint32_t> table(type.table_size());
  for (std::size_t j = 1; j <= k; ++j) {
    const std::size_t n = type.arity(j);
    const std::size_t width = leaves / type.level_size(j);
    for (std::size_t p = 0; p < type.level_size(j); ++p) {
      // Coordinate j of the image of any leaf below p.
      table[type.table_offset(j) + p] = static_cast<std::uint32_t>((m[p * width] / width) % n);
    }
  }
  return Endomorphism(type, std::move(table));
}

// |P(n)| = prod_j n_j^(N_j); nullopt if it does not fit 64 bits.
inline std::optional<std::uint64_t> monoid_size(const PartitionType& type) {
  std::uint64_t total = 1;
  for (std::size_t j = 1; j <= type.depth(); ++j) {
    const std::uint64_t n = type.arity(j);
    for (std::size_t e = 0; e < type.level_size(j); ++e) {
      if (n != 0 && total > UINT64_MAX / n) return std::nullopt;
      total *= n;
    }
  }
  return total;
}

// All of P(n) in ascending lexicographic order of local-map tables.
inline std::vector<Endomorphism> enumerate_endomorphisms(const PartitionType& type,
                                                         std::size_t bound) {
  auto size = monoid_size(type);
  if (!size || *size > bound) {
    throw Infeasible("P" + type.to_string() + " has more than " + std::to_string(bound) +
                         " elements (enumeration bound)",
                     bound);
  }
  std::vector<std::uint32_t> radix(type.table_size());
  for (std::size_t j = 1; j <= type.depth(); ++j) {
    for (std::size_t e = 0; e < type.level_size(j); ++e) {
      radix[type.table_offset(j) + e] = static_cast<std::uint32_t>(type.arity(j));
    }
  }
  std::vector<Endomorphism> out;
  out.reserve(*size);
  std::vector<std::uint32_t> table(type.table_size(), 0);
  for (std::uint64_t count = 0; count < *size; ++count) {
    out.emplace_back(type, table);
    for (std::size_t e = table.size(); e-- > 0;) {
      if (++table[e] < radix[e]) break;
      table[e] = 0;
    }
  }
  return out;
}

// Uniform over P(n), or over its automorphisms when `automorphism` is set.
template <class Urbg>
Endomorphism random_endomorphism(const PartitionType& type, Urbg& rng, bool automorphism = false) {
  std::vector<std::uint32_t> table(type.table_size());
  for (std::size_t j = 1; j <= type.depth(); ++j) {
    const std::size_t n = type.arity(j);
    for (std::size_t v = 0; v < type.level_size(j - 1); ++v) {
      auto block = table.begin() + static_cast<std::ptrdiff_t>(type.table_offset(j) + v * n);
      if (automorphism) {
        std::iota(block, block + static_cast<std::ptrdiff_t>(n), 0u);
        std::shuffle(block, block + static_cast<std::ptrdiff_t>(n), rng);
      } else {
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
        for (std::size_t i = 0; i < n; ++i) block[static_cast<std::ptrdiff_t>(i)] = pick(rng);
      }
    }
  }
  return Endomorphism(type, std::move(table));
}

}  // namespace np

template <>
struct std::hash<np::Endomorphism> {
  std::size_t operator()(const np::Endomorphism& f) const noexcept { return f.hash(); }
};

#endif
