#ifndef NP_SEMIGROUP_HPP
#define NP_SEMIGROUP_HPP

// A finite semigroup given by its Cayley table over dense element ids, and
// closure of id sets inside it.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "np/errors.hpp"
#include "np/parallel.hpp"

namespace np {

inline constexpr std::size_t kDefaultTableBound = 1u << 26;

class FiniteSemigroup {
 public:
  FiniteSemigroup(std::size_t size, std::vector<std::uint32_t> table)
      : size_(size), table_(std::move(table)) {
    if (table_.size() != size_ * size_) throw InvalidArgument("Cayley table has the wrong size");
    for (auto x : table_) {
      if (x >= size_) throw InvalidArgument("Cayley table entry out of range");
    }
  }

  // Interns `elements` (ids = positions) and tabulates mul(a, b). The set
  // must be closed under mul.
  template <class T, class Mul, class Hash = std::hash<T>>
  static FiniteSemigroup from_elements(const std::vector<T>& elements, Mul&& mul,
                                       std::size_t workers = 1,
                                       std::size_t table_bound = kDefaultTableBound) {
    const std::size_t n = elements.size();
    if (n == 0) throw InvalidArgument("empty semigroup");
    if (n > table_bound / n) {
      throw Infeasible("Cayley table of " + std::to_string(n) + " elements exceeds the bound",
                       table_bound);
    }
    std::unordered_map<T, std::uint32_t, Hash> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!ids.emplace(elements[i], static_cast<std::uint32_t>(i)).second) {
        throw InvalidArgument("duplicate element in semigroup");
      }
    }
    std::vector<std::uint32_t> table(n * n);
    std::vector<char> closed(n, 1);
    parallel_for(n, workers, [&](std::size_t a) {
      for (std::size_t b = 0; b < n; ++b) {
        auto it = ids.find(mul(elements[a], elements[b]));
        if (it == ids.end()) {
          closed[a] = 0;
          return;
        }
        table[a * n + b] = it->second;
      }
    });
    for (auto c : closed) {
      if (!c) throw InvalidArgument("element set is not closed under multiplication");
    }
    return FiniteSemigroup(n, std::move(table));
  }

  std::size_t size() const noexcept { return size_; }
  std::uint32_t product(std::uint32_t a, std::uint32_t b) const { return table_[a * size_ + b]; }

  // Subsemigroup generated by `gens`: right-multiplication closure.
  std::vector<char> generated(std::span<const std::uint32_t> gens) const {
    std::vector<char> in(size_, 0);
    std::vector<std::uint32_t> queue;
    queue.reserve(size_);
    for (auto g : gens) {
      if (!in[g]) {
        in[g] = 1;
        queue.push_back(g);
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t x = queue[head];
      for (auto g : gens) {
        const std::uint32_t y = product(x, g);
        if (!in[y]) {
          in[y] = 1;
          queue.push_back(y);
        }
      }
    }
    return in;
  }

  std::size_t generated_size(std::span<const std::uint32_t> gens) const {
    std::size_t count = 0;
    for (auto c : generated(gens)) count += c != 0;
    return count;
  }

  bool generates(std::span<const std::uint32_t> gens) const {
    return generated_size(gens) == size_;
  }

  bool is_closed(std::span<const std::uint32_t> subset) const {
    std::vector<char> in(size_, 0);
    for (auto x : subset) in[x] = 1;
    for (auto a : subset) {
      for (auto b : subset) {
        if (!in[product(a, b)]) return false;
      }
    }
    return true;
  }

 private:
  std::size_t size_;
  std::vector<std::uint32_t> table_;
};

}  // namespace np

#endif
