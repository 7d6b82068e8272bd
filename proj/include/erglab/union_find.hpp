#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace erglab {

/// Disjoint-set forest with union by rank and path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::size_t size() const noexcept { return parent_.size(); }

  std::uint32_t find(std::uint32_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Merges the sets of a and b. Returns the surviving root, or the common
  /// root unchanged when they were already joined (check with `merged`).
  struct UniteResult {
    std::uint32_t root;
    std::uint32_t absorbed;
    bool merged;
  };

  UniteResult unite(std::uint32_t a, std::uint32_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return {a, a, false};
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return {a, b, true};
  }

  bool same(std::uint32_t a, std::uint32_t b) noexcept { return find(a) == find(b); }

  void reset() noexcept {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    std::fill(rank_.begin(), rank_.end(), std::uint8_t{0});
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace erglab
