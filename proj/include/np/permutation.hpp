#ifndef NP_PERMUTATION_HPP
#define NP_PERMUTATION_HPP

// Permutations acting on the right: i -> i pi. Products are read left to
// right, i(pi sigma) = (i pi) sigma, so (1,2)(2,3) = (1,3,2).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "np/errors.hpp"

namespace np {

class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
    std::vector<bool> hit(image_.size(), false);
    for (auto x : image_) {
      if (x >= image_.size() || hit[x]) throw InvalidArgument("image table is not a permutation");
      hit[x] = true;
    }
  }

  static Permutation identity(std::size_t degree) {
    std::vector<std::uint32_t> img(degree);
    std::iota(img.begin(), img.end(), 0u);
    return Permutation(std::move(img));
  }

  // Cycles in 1-based notation, e.g. from_cycles(3, {{1, 2, 3}}).
  static Permutation from_cycles(std::size_t degree,
                                 std::initializer_list<std::vector<std::uint32_t>> cycles) {
    return from_cycles(degree, std::vector<std::vector<std::uint32_t>>(cycles));
  }

  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<std::uint32_t>>& cycles) {
    std::vector<std::uint32_t> img(degree);
    std::iota(img.begin(), img.end(), 0u);
    std::vector<bool> used(degree, false);
    for (const auto& c : cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0 || c[i] > degree) throw InvalidArgument("cycle entry out of range");
        if (used[c[i] - 1]) throw InvalidArgument("cycles are not disjoint");
        used[c[i] - 1] = true;
        img[c[i] - 1] = c[(i + 1) % c.size()] - 1;
      }
    }
    return Permutation(std::move(img));
  }

  // The cycle (first, first+1, ..., last), 1-based.
  static Permutation cycle_range(std::size_t degree, std::uint32_t first, std::uint32_t last) {
    std::vector<std::uint32_t> c;
    for (std::uint32_t i = first; i <= last; ++i) c.push_back(i);
    return from_cycles(degree, {c});
  }

  std::size_t degree() const noexcept { return image_.size(); }
  // i pi, 0-based.
  std::uint32_t apply(std::size_t i) const { return image_.at(i); }
  const std::vector<std::uint32_t>& image() const noexcept { return image_; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < image_.size(); ++i) {
      if (image_[i] != i) return false;
    }
    return true;
  }

  Permutation inverse() const {
    std::vector<std::uint32_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = static_cast<std::uint32_t>(i);
    return Permutation(std::move(inv));
  }

  std::vector<std::vector<std::uint32_t>> cycles() const {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<bool> seen(image_.size(), false);
    for (std::size_t s = 0; s < image_.size(); ++s) {
      if (seen[s] || image_[s] == s) continue;
      std::vector<std::uint32_t> c;
      for (std::size_t i = s; !seen[i]; i = image_[i]) {
        seen[i] = true;
        c.push_back(static_cast<std::uint32_t>(i + 1));
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  // lcm of the cycle lengths.
  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& c : cycles()) o = std::lcm(o, static_cast<std::uint64_t>(c.size()));
    return o;
  }

  // +1 for even, -1 for odd permutations.
  int sign() const {
    std::size_t transpositions = 0;
    for (const auto& c : cycles()) transpositions += c.size() - 1;
    return transpositions % 2 == 0 ? 1 : -1;
  }

  std::string to_string() const {
    auto cs = cycles();
    if (cs.empty()) return "()";
    std::string s;
    for (const auto& c : cs) {
      s += '(';
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i]);
      }
      s += ')';
    }
    return s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> image_;
};

// i(pi sigma) = (i pi) sigma.
inline Permutation perm_mul(const Permutation& pi, const Permutation& sigma) {
  if (pi.degree() != sigma.degree()) throw InvalidArgument("permutation degree mismatch");
  std::vector<std::uint32_t> img(pi.degree());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = sigma.apply(pi.apply(i));
  return Permutation(std::move(img));
}

inline Permutation operator*(const Permutation& pi, const Permutation& sigma) {
  return perm_mul(pi, sigma);
}

}  // namespace np

#endif
