#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace erglab {

using Point = std::uint32_t;

/// A bijection of {0, ..., n-1}. Serves both as a measure-preserving
/// automorphism of a finite uniform space and as an element of S_N.
class Perm {
 public:
  Perm() = default;

  /// Throws ValidationError unless `images` is a bijection of {0..n-1}.
  explicit Perm(std::vector<Point> images);

  static Perm identity(std::size_t n);

  /// Builds from disjoint cycles, e.g. from_cycles(4, {{0, 1}, {2, 3}}).
  static Perm from_cycles(std::size_t n, std::initializer_list<std::initializer_list<Point>> cycles);

  std::size_t size() const noexcept { return images_.size(); }
  Point operator()(Point x) const { return images_[x]; }
  std::span<const Point> images() const noexcept { return images_; }

  Perm inverse() const;
  bool is_identity() const noexcept;
  std::size_t fixed_point_count() const noexcept;

  /// Cycle lengths in non-increasing order (fixed points included).
  std::vector<std::size_t> cycle_type() const;

  /// Composition in function order: (a * b)(x) = a(b(x)).
  friend Perm operator*(const Perm& a, const Perm& b);

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<Point> images_;
};

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept;
};

std::string to_string(const Perm& p);

}  // namespace erglab
