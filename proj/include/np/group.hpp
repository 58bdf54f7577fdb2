#ifndef NP_GROUP_HPP
#define NP_GROUP_HPP

// Finite groups behind a common handle, so that wreath layers nest
// uniformly. An element of S_n is a bare permutation; an element of
// G wr S_m is a base tuple of m elements of G followed by a top permutation.
//
// Wreath multiplication, with the top group acting on positions from the
// right:
//
//   (h_1,...,h_m) pi * (g_1,...,g_m) sigma = (h_1 g_{1 pi}, ..., h_m g_{m pi}) pi sigma.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "np/closure.hpp"
#include "np/errors.hpp"
#include "np/permutation.hpp"

namespace np {

struct GroupElement {
  Permutation top;
  std::vector<GroupElement> base;  // empty for a plain permutation

  GroupElement() = default;
  explicit GroupElement(Permutation p) : top(std::move(p)) {}
  GroupElement(std::vector<GroupElement> b, Permutation p) : top(std::move(p)), base(std::move(b)) {}

  bool is_permutation() const noexcept { return base.empty(); }

  // Preorder flattening: top image table, then each base entry.
  void encode(std::vector<std::uint32_t>& out) const {
    out.push_back(static_cast<std::uint32_t>(top.degree()));
    out.insert(out.end(), top.image().begin(), top.image().end());
    for (const auto& b : base) b.encode(out);
  }

  std::vector<std::uint32_t> encoding() const {
    std::vector<std::uint32_t> out;
    encode(out);
    return out;
  }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& x) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    mix(x, h);
    return static_cast<std::size_t>(h);
  }

 private:
  static void mix(const GroupElement& x, std::uint64_t& h) noexcept {
    for (auto v : x.top.image()) {
      h ^= v + 1;
      h *= 1099511628211ull;
    }
    for (const auto& b : x.base) mix(b, h);
  }
};

class GroupHandle {
 public:
  virtual ~GroupHandle() = default;

  virtual GroupElement identity() const = 0;
  virtual GroupElement multiply(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement inverse(const GroupElement& a) const = 0;
  virtual bool contains(const GroupElement& a) const = 0;
  // |G|, or nullopt if it overflows 64 bits.
  virtual std::optional<std::uint64_t> order() const = 0;
  virtual std::vector<GroupElement> generators() const = 0;
  virtual std::string name() const = 0;

  // x^e for any integer e.
  GroupElement power(const GroupElement& x, std::int64_t e) const {
    GroupElement base = e < 0 ? inverse(x) : x;
    std::uint64_t n = e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
    GroupElement acc = identity();
    while (n > 0) {
      if (n & 1) acc = multiply(acc, base);
      base = multiply(base, base);
      n >>= 1;
    }
    return acc;
  }

  // Smallest e >= 1 with x^e = 1, by repeated multiplication. Memoized.
  std::uint64_t element_order(const GroupElement& x) const {
    auto key = x.encoding();
    {
      std::lock_guard lock(order_mutex_);
      auto it = order_cache_.find(key);
      if (it != order_cache_.end()) return it->second;
    }
    const GroupElement e = identity();
    GroupElement acc = x;
    std::uint64_t n = 1;
    while (!(acc == e)) {
      acc = multiply(acc, x);
      ++n;
    }
    std::lock_guard lock(order_mutex_);
    order_cache_.emplace(std::move(key), n);
    return n;
  }

  // All elements, by closure of the generators.
  std::vector<GroupElement> enumerate(std::size_t bound = kDefaultClosureBound) const {
    auto o = order();
    if (!o || *o > bound) {
      throw Infeasible(name() + " is larger than the enumeration bound " + std::to_string(bound),
                       bound);
    }
    auto gens = generators();
    ClosureOptions options;
    options.bound = bound;
    options.record_words = false;
    auto result = closure<GroupElement>(
        std::span<const GroupElement>(gens),
        [this](const GroupElement& a, const GroupElement& b) { return multiply(a, b); }, options,
        identity(), GroupElementHash{});
    return std::move(result.elements);
  }

  // Identity, inverse and associativity laws on the generators; returns
  // false on the first violation.
  bool spot_check_axioms() const {
    auto gens = generators();
    gens.push_back(identity());
    const GroupElement e = identity();
    for (const auto& a : gens) {
      if (!contains(a)) return false;
      if (!(multiply(a, e) == a) || !(multiply(e, a) == a)) return false;
      if (!(multiply(a, inverse(a)) == e) || !(multiply(inverse(a), a) == e)) return false;
      for (const auto& b : gens) {
        for (const auto& c : gens) {
          if (!(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)))) return false;
        }
      }
    }
    return true;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
      std::uint64_t h = 1469598103934665603ull;
      for (auto x : v) {
        h ^= x;
        h *= 1099511628211ull;
      }
      return static_cast<std::size_t>(h);
    }
  };
  mutable std::mutex order_mutex_;
  mutable std::unordered_map<std::vector<std::uint32_t>, std::uint64_t, KeyHash> order_cache_;
};

using GroupPtr = std::shared_ptr<const GroupHandle>;

class SymmetricGroup final : public GroupHandle {
 public:
  explicit SymmetricGroup(std::size_t degree) : degree_(degree) {
    if (degree == 0) throw InvalidArgument("symmetric group of degree 0");
  }

  std::size_t degree() const noexcept { return degree_; }

  GroupElement identity() const override { return GroupElement(Permutation::identity(degree_)); }

  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override {
    return GroupElement(a.top * b.top);
  }

  GroupElement inverse(const GroupElement& a) const override {
    return GroupElement(a.top.inverse());
  }

  bool contains(const GroupElement& a) const override {
    return a.is_permutation() && a.top.degree() == degree_;
  }

  std::optional<std::uint64_t> order() const override {
    std::uint64_t o = 1;
    for (std::uint64_t i = 2; i <= degree_; ++i) {
      if (o > UINT64_MAX / i) return std::nullopt;
      o *= i;
    }
    return o;
  }

  // (1,2) and (1,...,n).
  std::vector<GroupElement> generators() const override {
    if (degree_ == 1) return {};
    std::vector<GroupElement> gens{GroupElement(Permutation::from_cycles(degree_, {{1, 2}}))};
    if (degree_ > 2) {
      gens.emplace_back(Permutation::cycle_range(degree_, 1, static_cast<std::uint32_t>(degree_)));
    }
    return gens;
  }

  std::string name() const override { return "S_" + std::to_string(degree_); }

 private:
  std::size_t degree_;
};

class WreathGroup final : public GroupHandle {
 public:
  WreathGroup(GroupPtr base, std::size_t degree) : base_(std::move(base)), degree_(degree) {
    if (!base_) throw InvalidArgument("wreath product needs a base group");
    if (degree == 0) throw InvalidArgument("wreath product of degree 0");
  }

  const GroupHandle& base_group() const noexcept { return *base_; }
  GroupPtr base_ptr() const noexcept { return base_; }
  std::size_t degree() const noexcept { return degree_; }

  GroupElement identity() const override {
    return GroupElement(std::vector<GroupElement>(degree_, base_->identity()),
                        Permutation::identity(degree_));
  }

  GroupElement multiply(const GroupElement& x, const GroupElement& y) const override {
    check(x);
    check(y);
    std::vector<GroupElement> base;
    base.reserve(degree_);
    for (std::size_t i = 0; i < degree_; ++i) {
      base.push_back(base_->multiply(x.base[i], y.base[x.top.apply(i)]));
    }
    return GroupElement(std::move(base), x.top * y.top);
  }

  // (h) pi has inverse (h') pi^-1 with h'_{i pi} = h_i^-1.
  GroupElement inverse(const GroupElement& x) const override {
    check(x);
    std::vector<GroupElement> base(degree_);
    for (std::size_t i = 0; i < degree_; ++i) base[x.top.apply(i)] = base_->inverse(x.base[i]);
    return GroupElement(std::move(base), x.top.inverse());
  }

  bool contains(const GroupElement& x) const override {
    if (x.top.degree() != degree_ || x.base.size() != degree_) return false;
    for (const auto& b : x.base) {
      if (!base_->contains(b)) return false;
    }
    return true;
  }

  std::optional<std::uint64_t> order() const override {
    auto g = base_->order();
    if (!g) return std::nullopt;
    std::uint64_t o = 1;
    for (std::size_t i = 0; i < degree_; ++i) {
      if (*g != 0 && o > UINT64_MAX / *g) return std::nullopt;
      o *= *g;
    }
    for (std::uint64_t i = 2; i <= degree_; ++i) {
      if (o > UINT64_MAX / i) return std::nullopt;
      o *= i;
    }
    return o;
  }

  // [g,1] for each generator g of the base group, plus the top generators.
  std::vector<GroupElement> generators() const override {
    std::vector<GroupElement> gens;
    for (const auto& g : base_->generators()) gens.push_back(embed(g, 0));
    for (const auto& p : SymmetricGroup(degree_).generators()) gens.push_back(top_only(p.top));
    return gens;
  }

  std::string name() const override {
    return "(" + base_->name() + " wr S_" + std::to_string(degree_) + ")";
  }

  // [g,i]: g at position i (0-based), identity elsewhere, trivial top.
  GroupElement embed(const GroupElement& g, std::size_t i) const {
    if (i >= degree_) throw InvalidArgument("embedding position out of range");
    if (!base_->contains(g)) throw InvalidArgument("element is not in the base group");
    GroupElement x = identity();
    x.base[i] = g;
    return x;
  }

  GroupElement top_only(const Permutation& pi) const {
    if (pi.degree() != degree_) throw InvalidArgument("top permutation has the wrong degree");
    GroupElement x = identity();
    x.top = pi;
    return x;
  }

 private:
  void check(const GroupElement& x) const {
    if (x.top.degree() != degree_ || x.base.size() != degree_) {
      throw InvalidArgument("element is not in " + name());
    }
  }

  GroupPtr base_;
  std::size_t degree_;
};

inline std::shared_ptr<const SymmetricGroup> make_symmetric(std::size_t degree) {
  auto g = std::make_shared<const SymmetricGroup>(degree);
  if (!g->spot_check_axioms()) throw InvalidArgument(g->name() + " fails the group axioms");
  return g;
}

inline std::shared_ptr<const WreathGroup> make_wreath(GroupPtr base, std::size_t degree) {
  auto g = std::make_shared<const WreathGroup>(std::move(base), degree);
  if (!g->spot_check_axioms()) throw InvalidArgument(g->name() + " fails the group axioms");
  return g;
}

}  // namespace np

#endif
