#ifndef NP_NESTED_PARTITION_HPP
#define NP_NESTED_PARTITION_HPP

// General nested partitions of a finite set X = {0..|X|-1}, indexed by a
// rooted tree, and the respect relation between maps and such partitions.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "np/errors.hpp"
#include "np/partition_type.hpp"

namespace np {

class NestedPartition {
 public:
  // parents[t] is the parent vertex of t (nullopt for the root only);
  // blocks[t] is the subset P_t.
  NestedPartition(std::size_t ground_size, std::vector<std::optional<std::size_t>> parents,
                  std::vector<std::vector<std::size_t>> blocks)
      : ground_size_(ground_size), parents_(std::move(parents)), blocks_(std::move(blocks)) {
    const std::size_t n = parents_.size();
    if (n == 0 || blocks_.size() != n) throw InvalidArgument("malformed nested partition");
    children_.assign(n, {});
    std::optional<std::size_t> root;
    for (std::size_t t = 0; t < n; ++t) {
      if (!parents_[t]) {
        if (root) throw InvalidArgument("nested partition has two roots");
        root = t;
      } else {
        if (*parents_[t] >= n || *parents_[t] == t) throw InvalidArgument("bad parent link");
        children_[*parents_[t]].push_back(t);
      }
    }
    if (!root) throw InvalidArgument("nested partition has no root");
    root_ = *root;

    levels_.assign(n, SIZE_MAX);
    levels_[root_] = 0;
    std::vector<std::size_t> stack{root_};
    std::size_t seen = 0;
    while (!stack.empty()) {
      const std::size_t t = stack.back();
      stack.pop_back();
      ++seen;
      for (auto c : children_[t]) {
        levels_[c] = levels_[t] + 1;
        stack.push_back(c);
      }
    }
    if (seen != n) throw InvalidArgument("parent links do not form a tree");
    depth_ = *std::max_element(levels_.begin(), levels_.end());

    for (auto& b : blocks_) {
      if (b.empty()) throw InvalidArgument("blocks must be nonempty");
      std::sort(b.begin(), b.end());
      for (auto x : b) {
        if (x >= ground_size_) throw InvalidArgument("block element outside the ground set");
      }
      if (std::adjacent_find(b.begin(), b.end()) != b.end()) {
        throw InvalidArgument("block lists an element twice");
      }
    }
    if (blocks_[root_].size() != ground_size_) throw InvalidArgument("root block must be X");
    for (std::size_t t = 0; t < n; ++t) {
      if (children_[t].empty()) continue;
      std::vector<std::size_t> merged;
      for (auto c : children_[t]) merged.insert(merged.end(), blocks_[c].begin(), blocks_[c].end());
      std::sort(merged.begin(), merged.end());
      if (merged != blocks_[t]) {
        throw InvalidArgument("block of vertex " + std::to_string(t) +
                              " is not the disjoint union of its children's blocks");
      }
    }
    leaf_of_.assign(ground_size_, SIZE_MAX);
    for (std::size_t t = 0; t < n; ++t) {
      if (!children_[t].empty()) continue;
      for (auto x : blocks_[t]) leaf_of_[x] = t;
    }
  }

  // The tree of I(n): one vertex per point of every level, singleton leaf
  // blocks. Vertex ids are level offsets plus mixed-radix point ids.
  static NestedPartition standard(const PartitionType& type) {
    const std::size_t k = type.depth();
    std::vector<std::size_t> base(k + 1, 0);
    for (std::size_t j = 1; j <= k; ++j) base[j] = base[j - 1] + type.level_size(j - 1);
    const std::size_t total = base[k] + type.level_size(k);
    std::vector<std::optional<std::size_t>> parents(total);
    std::vector<std::vector<std::size_t>> blocks(total);
    const std::size_t leaves = type.leaf_count();
    for (std::size_t j = 0; j <= k; ++j) {
      const std::size_t width = leaves / type.level_size(j);
      for (std::size_t p = 0; p < type.level_size(j); ++p) {
        const std::size_t t = base[j] + p;
        if (j > 0) parents[t] = base[j - 1] + p / type.arity(j);
        blocks[t].resize(width);
        for (std::size_t x = 0; x < width; ++x) blocks[t][x] = p * width + x;
      }
    }
    return NestedPartition(leaves, std::move(parents), std::move(blocks));
  }

  std::size_t ground_size() const noexcept { return ground_size_; }
  std::size_t vertex_count() const noexcept { return parents_.size(); }
  std::size_t root() const noexcept { return root_; }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t level(std::size_t t) const { return levels_.at(t); }
  std::optional<std::size_t> parent(std::size_t t) const { return parents_.at(t); }
  const std::vector<std::size_t>& children(std::size_t t) const { return children_.at(t); }
  const std::vector<std::size_t>& block(std::size_t t) const { return blocks_.at(t); }
  bool is_leaf(std::size_t t) const { return children_.at(t).empty(); }
  // The leaf vertex whose block contains x.
  std::size_t leaf_of(std::size_t x) const { return leaf_of_.at(x); }

 private:
  std::size_t ground_size_;
  std::vector<std::optional<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> levels_;
  std::vector<std::size_t> leaf_of_;
  std::size_t root_ = 0;
  std::size_t depth_ = 0;
};

// An element of the set X_l built from a nested partition: either a vertex of
// level l+1 or a point lying in a leaf block of level l.
struct LevelElement {
  bool is_vertex = false;
  std::size_t id = 0;

  friend bool operator==(const LevelElement&, const LevelElement&) = default;
};

struct RespectReport {
  bool respects = false;
  // First vertex s (ascending id) with no same-level t such that f(Q_s) is in P_t.
  std::optional<std::size_t> violating_vertex;
  // image_vertex[s] = t with f(Q_s) inside P_t, when respects.
  std::vector<std::size_t> image_vertex;
  // Induced maps are defined only if every leaf point lands in a leaf of the
  // same level; then the squares rho o f_{l+1} = f_l o rho are checked.
  bool induced_defined = false;
  bool squares_commute = false;
};

namespace detail {

inline std::vector<std::vector<LevelElement>> level_sets(const NestedPartition& p) {
  std::vector<std::vector<LevelElement>> sets(p.depth() + 1);
  for (std::size_t t = 0; t < p.vertex_count(); ++t) {
    const std::size_t l = p.level(t);
    if (l > 0) sets[l - 1].push_back({true, t});
    if (p.is_leaf(t)) {
      for (auto x : p.block(t)) sets[l].push_back({false, x});
    }
  }
  return sets;
}

inline LevelElement rho(const NestedPartition& p, const LevelElement& e) {
  if (e.is_vertex) return {true, *p.parent(e.id)};
  return {true, p.leaf_of(e.id)};
}

}  // namespace detail

inline RespectReport respects_map(std::span<const std::size_t> f, const NestedPartition& source,
                                  const NestedPartition& target) {
  if (f.size() != source.ground_size()) throw InvalidArgument("map domain does not match X");
  for (auto y : f) {
    if (y >= target.ground_size()) throw InvalidArgument("map image outside Y");
  }
  RespectReport report;
  report.image_vertex.assign(source.vertex_count(), SIZE_MAX);

  // The target vertex of the given level whose block contains y.
  auto ancestor_at = [&](std::size_t y, std::size_t level) -> std::optional<std::size_t> {
    std::size_t t = target.leaf_of(y);
    if (target.level(t) < level) return std::nullopt;
    while (target.level(t) > level) t = *target.parent(t);
    return t;
  };

  for (std::size_t s = 0; s < source.vertex_count(); ++s) {
    const auto& q = source.block(s);
    auto t = ancestor_at(f[q.front()], source.level(s));
    bool ok = t.has_value();
    for (std::size_t i = 1; ok && i < q.size(); ++i) ok = ancestor_at(f[q[i]], source.level(s)) == t;
    if (!ok) {
      report.violating_vertex = s;
      return report;
    }
    report.image_vertex[s] = *t;
  }
  report.respects = true;

  auto apply = [&](const LevelElement& e, std::size_t level) -> std::optional<LevelElement> {
    if (e.is_vertex) return LevelElement{true, report.image_vertex[e.id]};
    const std::size_t y = f[e.id];
    if (!target.is_leaf(target.leaf_of(y)) || target.level(target.leaf_of(y)) != level) {
      return std::nullopt;
    }
    return LevelElement{false, y};
  };

  const auto sets = detail::level_sets(source);
  report.induced_defined = true;
  report.squares_commute = true;
  for (std::size_t l = 0; l + 1 < sets.size(); ++l) {
    for (const auto& e : sets[l + 1]) {
      auto up = apply(e, l + 1);
      auto down = apply(detail::rho(source, e), l);
      if (!up || !down) {
        report.induced_defined = false;
        report.squares_commute = false;
        return report;
      }
      if (!(detail::rho(target, *up) == *down)) report.squares_commute = false;
    }
  }
  return report;
}

}  // namespace np

#endif
