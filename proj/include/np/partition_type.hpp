#ifndef NP_PARTITION_TYPE_HPP
#define NP_PARTITION_TYPE_HPP

// Standard uniformly nested partition I(n1,...,nk).
//
// A level-j point is a tuple (v1,...,vj) with 0 <= vi < ni. Coordinates,
// local-map images and permutation images are 0-based in memory; every
// text and JSON form produced by this library is 1-based.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "np/errors.hpp"

namespace np {

inline constexpr std::size_t kDefaultLeafBound = 1'000'000;

class PartitionType {
 public:
  explicit PartitionType(std::vector<std::size_t> levels,
                         std::size_t leaf_bound = kDefaultLeafBound) {
    if (levels.empty()) throw InvalidArgument("partition type needs at least one level");
    auto data = std::make_shared<Data>();
    data->levels = std::move(levels);
    const std::size_t k = data->levels.size();
    data->level_sizes.assign(k + 1, 1);
    data->offsets.assign(k + 2, 0);
    for (std::size_t j = 1; j <= k; ++j) {
      const std::size_t n = data->levels[j - 1];
      if (n == 0) throw InvalidArgument("level sizes must be positive");
      const std::size_t prev = data->level_sizes[j - 1];
      if (prev > leaf_bound / n) {
        throw InvalidArgument("partition type " + describe(data->levels) +
                              " exceeds the leaf bound " + std::to_string(leaf_bound));
      }
      data->level_sizes[j] = prev * n;
    }
    if (data->level_sizes[k] > std::numeric_limits<std::uint32_t>::max()) {
      throw InvalidArgument("leaf count does not fit 32-bit point ids");
    }
    // Level-j local maps occupy N_{j-1} blocks of n_j entries, i.e. N_j entries.
    for (std::size_t j = 1; j <= k; ++j) {
      data->offsets[j + 1] = data->offsets[j] + data->level_sizes[j];
    }
    data_ = std::move(data);
  }

  // Parses "3,3" style input.
  static PartitionType parse(std::string_view text, std::size_t leaf_bound = kDefaultLeafBound) {
    std::vector<std::size_t> levels;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = std::min(text.find(',', start), text.size());
      std::string_view item = text.substr(start, comma - start);
      while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
      while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
      if (item.empty() || item.find_first_not_of("0123456789") != std::string_view::npos) {
        throw InvalidArgument("bad partition type '" + std::string(text) +
                              "': expected comma-separated positive integers");
      }
      if (item.size() > 9) throw InvalidArgument("level size too large: " + std::string(item));
      levels.push_back(std::stoul(std::string(item)));
      if (comma == text.size()) break;
      start = comma + 1;
    }
    return PartitionType(std::move(levels), leaf_bound);
  }

  std::size_t depth() const noexcept { return data_->levels.size(); }
  const std::vector<std::size_t>& levels() const noexcept { return data_->levels; }

  // n_j for 1 <= j <= k.
  std::size_t arity(std::size_t j) const {
    check_level(j, 1);
    return data_->levels[j - 1];
  }

  // N_j = n1 * ... * nj, the number of level-j points (N_0 = 1).
  std::size_t level_size(std::size_t j) const {
    check_level(j, 0);
    return data_->level_sizes[j];
  }

  std::size_t leaf_count() const noexcept { return data_->level_sizes.back(); }

  // Start of the level-j local maps inside an endomorphism table.
  std::size_t table_offset(std::size_t j) const {
    check_level(j, 1);
    return data_->offsets[j];
  }

  std::size_t table_size() const noexcept { return data_->offsets.back(); }

  void check_level(std::size_t j, std::size_t lowest) const {
    if (j < lowest || j > depth()) {
      throw InvalidArgument("level " + std::to_string(j) + " out of range [" +
                            std::to_string(lowest) + ".." + std::to_string(depth()) + "]");
    }
  }

  std::string to_string() const { return describe(data_->levels); }

  friend bool operator==(const PartitionType& a, const PartitionType& b) noexcept {
    return a.data_ == b.data_ || a.data_->levels == b.data_->levels;
  }

 private:
  struct Data {
    std::vector<std::size_t> levels;
    std::vector<std::size_t> level_sizes;
    std::vector<std::size_t> offsets;
  };

  static std::string describe(const std::vector<std::size_t>& levels) {
    std::string s = "(";
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(levels[i]);
    }
    return s + ")";
  }

  std::shared_ptr<const Data> data_;
};

// A point of I(n)_j; the level is the number of coordinates.
struct Point {
  std::vector<std::size_t> coords;

  std::size_t level() const noexcept { return coords.size(); }

  friend auto operator<=>(const Point&, const Point&) = default;
  friend bool operator==(const Point&, const Point&) = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(coords[i] + 1);
    }
    return s + ")";
  }
};

// Mixed-radix id of a point; ascending ids are ascending lexicographic order.
inline std::size_t point_index(const PartitionType& type, const Point& p) {
  type.check_level(p.level(), 0);
  std::size_t id = 0;
  for (std::size_t i = 0; i < p.level(); ++i) {
    const std::size_t n = type.arity(i + 1);
    if (p.coords[i] >= n) {
      throw InvalidArgument("coordinate " + std::to_string(i + 1) + " of " + p.to_string() +
                            " out of range for type " + type.to_string());
    }
    id = id * n + p.coords[i];
  }
  return id;
}

inline Point point_at(const PartitionType& type, std::size_t level, std::size_t id) {
  if (id >= type.level_size(level)) throw InvalidArgument("point id out of range");
  Point p;
  p.coords.resize(level);
  for (std::size_t i = level; i > 0; --i) {
    const std::size_t n = type.arity(i);
    p.coords[i - 1] = id % n;
    id /= n;
  }
  return p;
}

inline std::vector<Point> points_at_level(const PartitionType& type, std::size_t j) {
  type.check_level(j, 0);
  std::vector<Point> out;
  out.reserve(type.level_size(j));
  for (std::size_t id = 0; id < type.level_size(j); ++id) out.push_back(point_at(type, j, id));
  return out;
}

// rho_j: drops the last coordinate.
inline Point project(const Point& p) {
  if (p.level() == 0) throw InvalidArgument("cannot project the level-0 point");
  Point q = p;
  q.coords.pop_back();
  return q;
}

// A self-map of {0..n-1}.
class LocalMap {
 public:
  LocalMap() = default;
  explicit LocalMap(std::vector<std::uint32_t> image) : image_(std::move(image)) {
    for (auto x : image_) {
      if (x >= image_.size()) throw InvalidArgument("local map image out of range");
    }
  }

  static LocalMap identity(std::size_t n) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    return LocalMap(std::move(img));
  }

  static LocalMap constant(std::size_t n, std::uint32_t value) {
    return LocalMap(std::vector<std::uint32_t>(n, value));
  }

  // 1-based images, as written in the JSON form.
  static LocalMap from_one_based(const std::vector<std::uint32_t>& image) {
    std::vector<std::uint32_t> img;
    img.reserve(image.size());
    for (auto x : image) {
      if (x == 0) throw InvalidArgument("1-based local map contains 0");
      img.push_back(x - 1);
    }
    return LocalMap(std::move(img));
  }

  std::size_t size() const noexcept { return image_.size(); }
  std::uint32_t operator()(std::size_t i) const { return image_.at(i); }
  const std::vector<std::uint32_t>& image() const noexcept { return image_; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < image_.size(); ++i) {
      if (image_[i] != i) return false;
    }
    return true;
  }

  bool invertible() const {
    std::vector<bool> hit(image_.size(), false);
    for (auto x : image_) {
      if (hit[x]) return false;
      hit[x] = true;
    }
    return true;
  }

  friend bool operator==(const LocalMap&, const LocalMap&) = default;

 private:
  std::vector<std::uint32_t> image_;
};

// (a o b)(i) = a(b(i)).
inline LocalMap compose(const LocalMap& a, const LocalMap& b) {
  if (a.size() != b.size()) throw InvalidArgument("local map size mismatch");
  std::vector<std::uint32_t> img(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) img[i] = a(b(i));
  return LocalMap(std::move(img));
}

}  // namespace np

#endif
