#ifndef NP_WREATH_HPP
#define NP_WREATH_HPP

// Wreath-product machinery: recovering [g,i] and pi from [g,i]pi, the
// two-generator lemma for G wr S_m, the identification
// P_k(n1,...,nk) = S_{nk} wr ... wr S_{n1}, the parity homomorphism, and a
// k-element generating set of the automorphism group.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "np/closure.hpp"
#include "np/elementary.hpp"
#include "np/endomorphism.hpp"
#include "np/group.hpp"
#include "np/permutation.hpp"
#include "np/predicates.hpp"

namespace np {

inline GroupElement wreath_mul(const WreathGroup& w, const GroupElement& x, const GroupElement& y) {
  return w.multiply(x, y);
}

// [g,i] with a 0-based position.
inline GroupElement embed(const WreathGroup& w, const GroupElement& g, std::size_t i) {
  return w.embed(g, i);
}

// ---------------------------------------------------------------------------
// Recovering [g,i] and pi from x = [g,i]pi when i pi = i and the orders of g
// and pi are coprime.

struct BezoutPair {
  std::int64_t p = 0;
  std::int64_t q = 0;
};

// p*a + q*b = gcd(a, b).
inline BezoutPair bezout(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t quotient = old_r / r;
    old_r = std::exchange(r, old_r - quotient * r);
    old_s = std::exchange(s, old_s - quotient * s);
    old_t = std::exchange(t, old_t - quotient * t);
  }
  return {old_s, old_t};
}

struct CoprimeSplit {
  GroupElement embedded;  // [g,i] = x^base_exponent
  GroupElement top;       // pi = x^top_exponent
  std::optional<std::size_t> position;  // i, 0-based; empty when g is trivial
  std::uint64_t order_x = 0;
  BezoutPair bezout;  // p*ord(g) + q*ord(pi) = 1
  std::uint64_t top_exponent = 0;   // p*ord(g) mod ord(x)
  std::uint64_t base_exponent = 0;  // q*ord(pi) mod ord(x)
};

inline CoprimeSplit coprime_split(const WreathGroup& w, const GroupElement& x,
                                  std::uint64_t order_g, std::uint64_t order_pi) {
  if (!w.contains(x)) throw InvalidArgument("coprime_split: element is not in " + w.name());
  if (order_g == 0 || order_pi == 0 || std::gcd(order_g, order_pi) != 1) {
    throw InvalidArgument("coprime_split: orders " + std::to_string(order_g) + " and " +
                          std::to_string(order_pi) + " are not coprime");
  }
  const GroupElement e = w.base_group().identity();
  CoprimeSplit out;
  for (std::size_t i = 0; i < w.degree(); ++i) {
    if (x.base[i] == e) continue;
    if (out.position) throw InvalidArgument("coprime_split: element is not of the form [g,i]pi");
    out.position = i;
  }
  if (out.position && x.top.apply(*out.position) != *out.position) {
    throw InvalidArgument("coprime_split: position " + std::to_string(*out.position + 1) +
                          " is not fixed by the top permutation");
  }
  out.order_x = w.element_order(x);
  out.bezout = bezout(static_cast<std::int64_t>(order_g), static_cast<std::int64_t>(order_pi));
  const auto reduce = [&](std::int64_t e) {
    const auto m = static_cast<std::int64_t>(out.order_x);
    return static_cast<std::uint64_t>(((e % m) + m) % m);
  };
  out.top_exponent = reduce(out.bezout.p * static_cast<std::int64_t>(order_g));
  out.base_exponent = reduce(out.bezout.q * static_cast<std::int64_t>(order_pi));
  out.top = w.power(x, static_cast<std::int64_t>(out.top_exponent));
  out.embedded = w.power(x, static_cast<std::int64_t>(out.base_exponent));

  GroupElement expected_embedded = w.identity();
  if (out.position) expected_embedded.base[*out.position] = x.base[*out.position];
  if (!(out.top == w.top_only(x.top)) || !(out.embedded == expected_embedded)) {
    throw InvalidArgument("coprime_split: supplied orders do not match the element");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-generator lemma: with a = [sigma,2](1,...,m) and b = [g,3](1,2), where
// g has odd order and sigma has order 2, the elements [g,3], [sigma,1],
// (1,...,m) and (1,2) are words in a, b and a^-1.

enum class Letter : std::uint8_t { a, b, a_inverse };
using Word = std::vector<Letter>;

inline GroupElement evaluate(const WreathGroup& w, const Word& word, const GroupElement& a,
                             const GroupElement& b) {
  const GroupElement a_inv = w.inverse(a);
  GroupElement acc = w.identity();
  for (auto letter : word) {
    switch (letter) {
      case Letter::a: acc = w.multiply(acc, a); break;
      case Letter::b: acc = w.multiply(acc, b); break;
      case Letter::a_inverse: acc = w.multiply(acc, a_inv); break;
    }
  }
  return acc;
}

inline std::string to_string(const Word& word) {
  std::string s;
  for (auto letter : word) s += letter == Letter::a ? "a" : letter == Letter::b ? "b" : "A";
  return s.empty() ? "1" : s;
}

inline Word repeat(const Word& w, std::uint64_t times) {
  Word out;
  for (std::uint64_t i = 0; i < times; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

inline Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

struct Derivation {
  std::string name;
  Word word;
  GroupElement value;
};

struct IdentityCheck {
  std::string name;
  bool holds = false;
};

struct StrannayaResult {
  std::shared_ptr<const WreathGroup> group;
  GroupElement a;
  GroupElement b;
  Derivation embedded_g;      // [g,3]
  Derivation transposition;   // (1,2)
  Derivation embedded_sigma;  // [sigma,1]
  Derivation long_cycle;      // (1,...,m)
  std::vector<IdentityCheck> identities;

  bool all_verified() const {
    for (const auto& c : identities) {
      if (!c.holds) return false;
    }
    return true;
  }
};

inline StrannayaResult strannaya_extract(const GroupPtr& g_group, const GroupElement& g,
                                         const GroupElement& sigma, std::size_t m) {
  if (m < 3) throw InvalidArgument("two-generator lemma needs degree m >= 3");
  if (!g_group->contains(g) || !g_group->contains(sigma)) {
    throw InvalidArgument("elements are not in " + g_group->name());
  }
  const std::uint64_t order_g = g_group->element_order(g);
  if (order_g % 2 == 0) throw InvalidArgument("g must have odd order");
  if (g_group->element_order(sigma) != 2) throw InvalidArgument("sigma must have order 2");

  StrannayaResult r;
  r.group = make_wreath(g_group, m);
  const WreathGroup& w = *r.group;
  const GroupElement e = g_group->identity();
  const Permutation cycle = Permutation::cycle_range(m, 1, static_cast<std::uint32_t>(m));
  const Permutation swap12 = Permutation::from_cycles(m, {{1, 2}});
  r.a = w.multiply(w.embed(sigma, 1), w.top_only(cycle));
  r.b = w.multiply(w.embed(g, 2), w.top_only(swap12));

  auto check = [&](std::string name, const GroupElement& lhs, const GroupElement& rhs) {
    r.identities.push_back({std::move(name), lhs == rhs});
  };

  // [g,3] and (1,2) from b alone.
  const CoprimeSplit split = coprime_split(w, r.b, order_g, 2);
  r.embedded_g = {"[g,3]", repeat({Letter::b}, split.base_exponent), split.embedded};
  r.transposition = {"(1,2)", repeat({Letter::b}, split.top_exponent), split.top};

  const Word a_m = repeat({Letter::a}, m);
  const Word ab_m1 = repeat({Letter::a, Letter::b}, m - 1);
  const GroupElement sigma_g = g_group->multiply(sigma, g);

  GroupElement all_sigma(std::vector<GroupElement>(m, sigma), Permutation::identity(m));
  check("a^m = (sigma,...,sigma)", evaluate(w, a_m, r.a, r.b), all_sigma);

  std::vector<GroupElement> base(m, sigma_g);
  base[0] = e;
  check("(ab)^(m-1) = (e,sigma g,...,sigma g)", evaluate(w, ab_m1, r.a, r.b),
        GroupElement(base, Permutation::identity(m)));

  base.assign(m, g);
  base[0] = sigma;
  const Word c = concat({a_m, ab_m1});
  check("a^m (ab)^(m-1) = (sigma,g,...,g)", evaluate(w, c, r.a, r.b),
        GroupElement(base, Permutation::identity(m)));

  const Word sigma1 = repeat(c, order_g);
  r.embedded_sigma = {"[sigma,1]", sigma1, evaluate(w, sigma1, r.a, r.b)};
  check("(a^m (ab)^(m-1))^ord(g) = [sigma,1]", r.embedded_sigma.value, w.embed(sigma, 0));

  const Word long_cycle = concat({{Letter::a_inverse}, sigma1, {Letter::a, Letter::a}});
  r.long_cycle = {"(1,...,m)", long_cycle, evaluate(w, long_cycle, r.a, r.b)};
  check("a^-1 [sigma,1] a^2 = (1,...,m)", r.long_cycle.value, w.top_only(cycle));

  check("word for [g,3] evaluates to [g,3]", evaluate(w, r.embedded_g.word, r.a, r.b),
        w.embed(g, 2));
  check("word for (1,2) evaluates to (1,2)", evaluate(w, r.transposition.word, r.a, r.b),
        w.top_only(swap12));
  return r;
}

// ---------------------------------------------------------------------------
// Generation check for {[g_t, i_t]} together with top permutations.

inline ClosureReport gen_check(const GroupPtr& g_group, std::size_t m,
                               const std::vector<GroupElement>& group_gens,
                               const std::vector<Permutation>& perm_gens,
                               const std::vector<std::size_t>& positions,
                               ClosureOptions options = {}) {
  if (group_gens.size() != positions.size()) {
    throw InvalidArgument("gen_check: one position per group generator is required");
  }
  auto w = make_wreath(g_group, m);
  auto target = w->order();
  if (!target || *target > options.bound) {
    throw Infeasible(w->name() + " exceeds the closure bound " + std::to_string(options.bound),
                     options.bound);
  }
  std::vector<GroupElement> gens;
  for (std::size_t t = 0; t < group_gens.size(); ++t) gens.push_back(w->embed(group_gens[t], positions[t]));
  for (const auto& p : perm_gens) gens.push_back(w->top_only(p));
  options.target = *target;
  auto result = closure<GroupElement>(
      std::span<const GroupElement>(gens),
      [&](const GroupElement& x, const GroupElement& y) { return w->multiply(x, y); }, options,
      w->identity(), GroupElementHash{});
  return result.report;
}

// ---------------------------------------------------------------------------
// The iterated wreath product S_{nk} wr ... wr S_{n1} and its identification
// with P_k(n).

// layers[j-1] is G_j = S_{nk} wr ... wr S_{nj}; layers[0] is the full group.
inline std::vector<GroupPtr> iterated_layers(const PartitionType& type) {
  const std::size_t k = type.depth();
  std::vector<GroupPtr> layers(k);
  layers[k - 1] = make_symmetric(type.arity(k));
  for (std::size_t j = k - 1; j >= 1; --j) layers[j - 1] = make_wreath(layers[j], type.arity(j));
  return layers;
}

inline GroupPtr iterated(const PartitionType& type) { return iterated_layers(type).front(); }

// An element of S_n lifted into a layer as a pure top permutation.
inline GroupElement lift_top(const GroupPtr& layer, const Permutation& pi) {
  if (auto w = std::dynamic_pointer_cast<const WreathGroup>(layer)) return w->top_only(pi);
  GroupElement x(pi);
  if (!layer->contains(x)) throw InvalidArgument("permutation has the wrong degree");
  return x;
}

// Composition orientation of the identification Phi : P_k(n) -> G. It turns
// the right-to-left product of endomorphisms into the left-to-right wreath
// product, so Phi(f o g) = Phi(g) * Phi(f).
enum class Orientation { preserving, reversing };
inline constexpr Orientation kEndoToWreathOrientation = Orientation::reversing;

namespace detail {

inline GroupElement subtree_to_wreath(const Endomorphism& f, std::size_t j, std::size_t prefix) {
  const PartitionType& type = f.type();
  auto local = f.local(j, prefix);
  Permutation top(std::vector<std::uint32_t>(local.begin(), local.end()));
  if (j == type.depth()) return GroupElement(std::move(top));
  std::vector<GroupElement> base;
  base.reserve(local.size());
  for (std::size_t i = 0; i < local.size(); ++i) {
    base.push_back(subtree_to_wreath(f, j + 1, prefix * local.size() + i));
  }
  return GroupElement(std::move(base), std::move(top));
}

inline void wreath_to_table(const PartitionType& type, const GroupElement& x, std::size_t j,
                            std::size_t prefix, std::vector<std::uint32_t>& table) {
  const std::size_t n = type.arity(j);
  if (x.top.degree() != n) throw InvalidArgument("wreath element does not match the type");
  std::copy(x.top.image().begin(), x.top.image().end(),
            table.begin() + static_cast<std::ptrdiff_t>(type.table_offset(j) + prefix * n));
  if (j == type.depth()) {
    if (!x.base.empty()) throw InvalidArgument("wreath element is deeper than the type");
    return;
  }
  if (x.base.size() != n) throw InvalidArgument("wreath element does not match the type");
  for (std::size_t i = 0; i < n; ++i) wreath_to_table(type, x.base[i], j + 1, prefix * n + i, table);
}

}  // namespace detail

// f -> (f(1),...,f(n1)) f_1, applied recursively.
inline GroupElement endo_to_wreath(const Endomorphism& f) {
  if (stratum(f) != f.depth()) throw InvalidArgument("endo_to_wreath: f is not an automorphism");
  return detail::subtree_to_wreath(f, 1, 0);
}

inline Endomorphism wreath_to_endo(const PartitionType& type, const GroupElement& x) {
  std::vector<std::uint32_t> table(type.table_size());
  detail::wreath_to_table(type, x, 1, 0, table);
  return Endomorphism(type, std::move(table));
}

// [[...[sigma, v_{j-1}], ...], v_1]: sigma in S_{nj} lifted to G_j and
// embedded along the coordinates of v.
inline GroupElement nested_embed(const std::vector<GroupPtr>& layers, const Permutation& sigma,
                                 const Point& v) {
  const std::size_t j = v.level() + 1;
  if (j > layers.size()) throw InvalidArgument("anchor is too deep for the iterated product");
  GroupElement x = lift_top(layers[j - 1], sigma);
  for (std::size_t s = j - 1; s >= 1; --s) {
    auto w = std::dynamic_pointer_cast<const WreathGroup>(layers[s - 1]);
    x = w->embed(x, v.coords[s - 1]);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Parity homomorphism eps(f) = (sign f_1, ..., sign f_k) into Z_2^k.

struct ParityVector {
  std::vector<std::uint8_t> bits;  // 1 = odd level permutation

  ParityVector operator+(const ParityVector& o) const {
    if (bits.size() != o.bits.size()) throw InvalidArgument("parity vector length mismatch");
    ParityVector r{bits};
    for (std::size_t i = 0; i < bits.size(); ++i) r.bits[i] ^= o.bits[i];
    return r;
  }

  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) m |= static_cast<std::uint64_t>(bits[i]) << i;
    return m;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (i) s += ',';
      s += bits[i] ? "s" : "e";
    }
    return s + ")";
  }

  friend bool operator==(const ParityVector&, const ParityVector&) = default;
};

inline ParityVector parity(const Endomorphism& f) {
  if (stratum(f) != f.depth()) throw InvalidArgument("parity: f is not an automorphism");
  ParityVector out;
  for (std::size_t j = 1; j <= f.depth(); ++j) {
    out.bits.push_back(Permutation(level_map(f, j)).sign() < 0 ? 1 : 0);
  }
  return out;
}

// Rank over GF(2) of a set of parity vectors (k <= 64).
inline std::size_t gf2_rank(const std::vector<ParityVector>& rows) {
  std::vector<std::uint64_t> basis;
  for (const auto& r : rows) {
    std::uint64_t v = r.mask();
    for (auto b : basis) v = std::min(v, v ^ b);
    if (v) basis.push_back(v);
  }
  return basis.size();
}

// g_j = [(1,2), (1,...,1)] for j = 1..k; eps(g_j) is e below slot j and sigma
// at slot j. Later slots depend on subtree sizes; the matrix is triangular.
inline std::vector<Endomorphism> parity_witnesses(const PartitionType& type) {
  std::vector<Endomorphism> out;
  for (std::size_t j = 1; j <= type.depth(); ++j) {
    if (type.arity(j) < 2) throw Unsupported("parity witness needs n_" + std::to_string(j) + " >= 2", j);
    std::vector<std::uint32_t> swap(type.arity(j));
    std::iota(swap.begin(), swap.end(), 0u);
    std::swap(swap[0], swap[1]);
    out.push_back(bracket(type, LocalMap(std::move(swap)), Point{std::vector<std::size_t>(j - 1, 0)}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// k generators of S_{nk} wr ... wr S_{n1}.
//
//   tau_j     = (1,...,nj) for odd nj, (2,...,nj) for even nj (odd order)
//   g_j       = [tau_{j+1}, 3](1,2) in G_j, j = 1..k-1
//   g~_j      = [[g_j, 3], ..., 3] in G_1
//   g~        = [[[(1,2), 2], ...], 2] (1,...,n1) in G_1
//
// The final factor (1,...,n1) makes g~ the element a = [sigma,2](1,...,m) of
// the two-generator lemma; without it the top projection of the set is
// generated by (1,2) alone. TopCycle::omitted builds g~ without it.

enum class TopCycle { included, omitted };

inline Permutation odd_order_cycle(std::size_t n) {
  const auto last = static_cast<std::uint32_t>(n);
  return n % 2 == 1 ? Permutation::cycle_range(n, 1, last) : Permutation::cycle_range(n, 2, last);
}

inline std::vector<GroupElement> wreath_group_generators(const PartitionType& type,
                                                         TopCycle top_cycle = TopCycle::included) {
  const std::size_t k = type.depth();
  for (std::size_t j = 1; j <= k; ++j) {
    if (type.arity(j) < 3) {
      throw Unsupported("generator construction anchors at point 3 and needs n_" +
                            std::to_string(j) + " >= 3 (type " + type.to_string() + ")",
                        j);
    }
  }
  const auto layers = iterated_layers(type);
  auto wreath_layer = [&](std::size_t j) {
    return std::dynamic_pointer_cast<const WreathGroup>(layers[j - 1]);
  };
  auto transposition = [&](std::size_t j) {
    return Permutation::from_cycles(type.arity(j), {{1, 2}});
  };

  std::vector<GroupElement> gens;
  for (std::size_t j = 1; j < k; ++j) {
    auto w = wreath_layer(j);
    GroupElement g = w->multiply(w->embed(lift_top(layers[j], odd_order_cycle(type.arity(j + 1))), 2),
                                 w->top_only(transposition(j)));
    for (std::size_t s = j - 1; s >= 1; --s) g = wreath_layer(s)->embed(g, 2);
    gens.push_back(std::move(g));
  }

  GroupElement last = lift_top(layers[k - 1], transposition(k));
  for (std::size_t s = k - 1; s >= 1; --s) last = wreath_layer(s)->embed(last, 1);
  if (k > 1 && top_cycle == TopCycle::included) {
    auto w = wreath_layer(1);
    last = w->multiply(last, w->top_only(Permutation::cycle_range(
                                 type.arity(1), 1, static_cast<std::uint32_t>(type.arity(1)))));
  }
  gens.push_back(std::move(last));
  return gens;
}

inline std::vector<Endomorphism> group_generators(const PartitionType& type,
                                                  TopCycle top_cycle = TopCycle::included) {
  std::vector<Endomorphism> out;
  for (const auto& g : wreath_group_generators(type, top_cycle)) out.push_back(wreath_to_endo(type, g));
  return out;
}

}  // namespace np

#endif
