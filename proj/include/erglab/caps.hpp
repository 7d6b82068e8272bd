#pragma once

#include <cstddef>
#include <string_view>

namespace erglab {

/// Enumeration / materialization limits. Overridable at runtime through the
/// ERGLAB_CAPS environment variable, e.g. "full_group=5040,product=200000".
struct Caps {
  std::size_t full_group = 1'000'000;   // |[E]| for exhaustive enumeration
  std::size_t closure = 200'000;        // order of a generated permutation group
  std::size_t product = 1'000'000;      // |X| * |Y|^N for the co-induced space
  std::size_t ball = 5'000'000;         // Cayley ball vertices
  std::size_t word_length = 1'000'000;  // length-function budget

  /// Applies "name=value" overrides; throws ValidationError on unknown names.
  void apply_overrides(std::string_view spec);

  /// Defaults with ERGLAB_CAPS applied (read on every call).
  static Caps from_environment();
};

}  // namespace erglab
