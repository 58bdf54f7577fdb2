#ifndef NP_CLOSURE_HPP
#define NP_CLOSURE_HPP

// Breadth-first Cayley-graph closure of a generating set under an
// associative product. Elements are interned to dense ids in discovery
// order; products of a frontier chunk may be computed by several workers,
// but insertion happens in (frontier order, generator order), so ids, counts
// and word lengths do not depend on the worker count.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "np/parallel.hpp"

namespace np {

inline constexpr std::size_t kDefaultClosureBound = 1'000'000;

struct ClosureOptions {
  std::size_t bound = kDefaultClosureBound;
  std::size_t workers = 1;
  bool record_words = true;
  // Compare the final size against this value.
  std::optional<std::uint64_t> target;
};

struct ClosureReport {
  std::uint64_t element_count = 0;
  std::size_t generator_count = 0;
  // False when the bound stopped the search; element_count is then partial.
  bool complete = true;
  std::optional<std::uint64_t> target;
  std::optional<bool> reached_target;
  // Shortest word length of each element, indexed by id (0 for a seeded identity).
  std::vector<std::uint32_t> word_lengths;
  std::uint32_t max_word_length = 0;
  double seconds = 0.0;
};

template <class T>
struct ClosureResult {
  ClosureReport report;
  std::vector<T> elements;
};

template <class T, class Mul, class Hash = std::hash<T>, class Eq = std::equal_to<T>>
ClosureResult<T> closure(std::span<const T> gens, Mul&& mul, const ClosureOptions& options = {},
                         const std::optional<T>& identity = std::nullopt, Hash hash = Hash{},
                         Eq eq = Eq{}) {
  const auto start = std::chrono::steady_clock::now();
  ClosureResult<T> result;
  auto& elements = result.elements;
  auto& report = result.report;
  std::vector<std::uint32_t> lengths;

  struct IdHash {
    const std::vector<T>* elements;
    Hash* hash;
    std::size_t operator()(std::uint32_t id) const { return (*hash)((*elements)[id]); }
  };
  struct IdEq {
    const std::vector<T>* elements;
    Eq* eq;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
      return (*eq)((*elements)[a], (*elements)[b]);
    }
  };
  std::unordered_set<std::uint32_t, IdHash, IdEq> index(16, IdHash{&elements, &hash},
                                                        IdEq{&elements, &eq});

  bool stopped = false;
  // Appends x unless already present.
  auto intern = [&](T&& x, std::uint32_t length) {
    elements.push_back(std::move(x));
    const auto id = static_cast<std::uint32_t>(elements.size() - 1);
    if (!index.insert(id).second) {
      elements.pop_back();
      return;
    }
    lengths.push_back(length);
    if (elements.size() > options.bound) stopped = true;
  };

  if (identity) intern(T(*identity), 0);
  for (const auto& g : gens) {
    if (stopped) break;
    intern(T(g), 1);
  }

  constexpr std::size_t kChunk = 1 << 14;
  const std::size_t ngens = gens.size();
  std::size_t lo = 0;
  std::vector<std::optional<T>> buffer;
  while (!stopped && lo < elements.size()) {
    const std::size_t hi = elements.size();
    for (std::size_t chunk = lo; chunk < hi && !stopped; chunk += kChunk) {
      const std::size_t end = std::min(hi, chunk + kChunk);
      buffer.assign((end - chunk) * ngens, std::nullopt);
      parallel_for(end - chunk, options.workers, [&](std::size_t i) {
        for (std::size_t g = 0; g < ngens; ++g) {
          buffer[i * ngens + g].emplace(mul(elements[chunk + i], gens[g]));
        }
      });
      for (std::size_t i = 0; i < end - chunk && !stopped; ++i) {
        const std::uint32_t next = lengths[chunk + i] + 1;
        for (std::size_t g = 0; g < ngens && !stopped; ++g) {
          intern(std::move(*buffer[i * ngens + g]), next);
        }
      }
    }
    lo = hi;
  }

  if (stopped) {
    // Drop the element that crossed the bound so the count equals the bound.
    index.erase(static_cast<std::uint32_t>(elements.size() - 1));
    elements.pop_back();
    lengths.pop_back();
  }
  report.element_count = elements.size();
  report.generator_count = gens.size();
  report.complete = !stopped;
  report.target = options.target;
  if (options.target) report.reached_target = report.complete && report.element_count == *options.target;
  report.max_word_length = lengths.empty() ? 0 : *std::max_element(lengths.begin(), lengths.end());
  if (options.record_words) report.word_lengths = std::move(lengths);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

template <class T, class Mul>
ClosureResult<T> closure(const std::vector<T>& gens, Mul&& mul, const ClosureOptions& options = {},
                         const std::optional<T>& identity = std::nullopt) {
  return closure<T>(std::span<const T>(gens), std::forward<Mul>(mul), options, identity);
}

}  // namespace np

#endif
