#ifndef NP_ELEMENTARY_HPP
#define NP_ELEMENTARY_HPP

// Elementary endomorphisms [g,v] and the level factorization
// f = t_1(f) o t_2(f) o ... o t_k(f), with t_k(f) applied first.
//
// Applying t_1(f) first moves the prefix v to f_1(v) before the deeper
// factors act, so t_k(f) o ... o t_1(f) differs from f whenever a deeper
// local map is not constant along the orbit of f_1. See
// literal_order_product below.

#include <cstddef>
#include <vector>

#include "np/endomorphism.hpp"
#include "np/partition_type.hpp"

namespace np {

// [g,v]: local map g at the level-(j-1) point v, identity everywhere else.
inline Endomorphism bracket(const PartitionType& type, const LocalMap& g, const Point& v) {
  const std::size_t j = v.level() + 1;
  if (j > type.depth()) {
    throw InvalidArgument("anchor " + v.to_string() + " has no level below it in type " +
                          type.to_string());
  }
  if (g.size() != type.arity(j)) {
    throw InvalidArgument("local map of size " + std::to_string(g.size()) + " anchored at level " +
                          std::to_string(j) + " of type " + type.to_string());
  }
  Endomorphism id = Endomorphism::identity(type);
  std::vector<std::uint32_t> table = id.table();
  const std::size_t at = type.table_offset(j) + point_index(type, v) * g.size();
  std::copy(g.image().begin(), g.image().end(), table.begin() + static_cast<std::ptrdiff_t>(at));
  return Endomorphism(type, std::move(table));
}

// t_j(f): f's level-j local maps, identity at every other level. Assembled
// directly; it equals the product of the commuting brackets [f[v],v].
inline Endomorphism t_level(const Endomorphism& f, std::size_t j) {
  const PartitionType& type = f.type();
  type.check_level(j, 1);
  std::vector<std::uint32_t> table = Endomorphism::identity(type).table();
  const std::size_t lo = type.table_offset(j);
  const std::size_t hi = lo + type.level_size(j);
  std::copy(f.table().begin() + static_cast<std::ptrdiff_t>(lo),
            f.table().begin() + static_cast<std::ptrdiff_t>(hi),
            table.begin() + static_cast<std::ptrdiff_t>(lo));
  return Endomorphism(type, std::move(table));
}

// [t_1(f), ..., t_k(f)].
inline std::vector<Endomorphism> decompose(const Endomorphism& f) {
  std::vector<Endomorphism> out;
  out.reserve(f.depth());
  for (std::size_t j = 1; j <= f.depth(); ++j) out.push_back(t_level(f, j));
  return out;
}

// factors = [t_1, ..., t_k]; returns t_1 o ... o t_k.
inline Endomorphism recompose(const std::vector<Endomorphism>& factors) {
  if (factors.empty()) throw InvalidArgument("recompose needs at least one factor");
  Endomorphism acc = factors.back();
  for (std::size_t i = factors.size() - 1; i-- > 0;) acc = compose(factors[i], acc);
  return acc;
}

// factors = [t_1, ..., t_k]; returns t_k o ... o t_1 (t_1 applied first).
inline Endomorphism literal_order_product(const std::vector<Endomorphism>& factors) {
  if (factors.empty()) throw InvalidArgument("literal_order_product needs at least one factor");
  Endomorphism acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = compose(factors[i], acc);
  return acc;
}

}  // namespace np

#endif
