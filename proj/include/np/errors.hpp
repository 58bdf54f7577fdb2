#ifndef NP_ERRORS_HPP
#define NP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace np {

// Malformed input: bad sizes, out-of-range levels, mismatched types.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction whose hypotheses are not met by the instance (for example
// a generator recipe anchored at index 3 on a level with fewer points).
// Kept distinct from a falsified identity.
class Unsupported : public std::runtime_error {
 public:
  Unsupported(const std::string& what, std::size_t level)
      : std::runtime_error(what), level_(level) {}

  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

// The instance exceeds a configured enumeration or closure bound.
class Infeasible : public std::runtime_error {
 public:
  Infeasible(const std::string& what, std::size_t bound)
      : std::runtime_error(what), bound_(bound) {}

  std::size_t bound() const noexcept { return bound_; }

 private:
  std::size_t bound_;
};

}  // namespace np

#endif
