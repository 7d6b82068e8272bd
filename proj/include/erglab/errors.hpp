#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace erglab {

/// A precondition of an operation was violated by its input
/// (size mismatch, non-bijective images, E not contained in F, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or materialization limit was hit. The instance is valid
/// but too large for the requested exhaustive treatment.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::string cap, std::size_t requested, std::size_t limit)
      : std::runtime_error("cap '" + cap + "' exceeded: need " + std::to_string(requested) +
                           ", limit " + std::to_string(limit)),
        cap_(std::move(cap)),
        requested_(requested),
        limit_(limit) {}

  const std::string& cap() const noexcept { return cap_; }
  std::size_t requested() const noexcept { return requested_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::string cap_;
  std::size_t requested_;
  std::size_t limit_;
};

/// An exact identity that holds by theorem came out false. Always a bug.
class IdentityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace erglab
