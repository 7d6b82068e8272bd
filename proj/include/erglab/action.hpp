#pragma once

#include "erglab/perm.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace erglab {

struct Generator {
  std::string label;
  Perm perm;
  std::size_t inverse;  // index of the paired generator (itself for involutions)
};

class GroupClosure;

/// A finite group action given by labeled generators with an inverse pairing.
class FinAction {
 public:
  /// Validates sizes and the pairing (paired permutations compose to the
  /// identity, pairing is an involution). Throws ValidationError.
  FinAction(std::size_t m, std::vector<Generator> generators);

  /// Convenience: pairs each generator with itself when involutive, otherwise
  /// appends "<label>^-1" carrying the inverse permutation.
  static FinAction symmetric(std::size_t m, std::vector<std::pair<std::string, Perm>> generators);

  std::size_t space_size() const noexcept { return m_; }
  std::span<const Generator> generators() const noexcept { return gens_; }
  std::optional<std::size_t> find(std::string_view label) const;

  /// Group generated by the generators; throws CapExceeded above `cap` elements.
  GroupClosure closure(std::size_t cap) const;

  /// No non-identity element of the closure fixes a point.
  bool is_free(std::size_t cap) const;

 private:
  std::size_t m_;
  std::vector<Generator> gens_;
};

/// The permutation group generated by a FinAction, with stable element ids.
///
/// Ids follow breadth-first order from the identity (id 0). Elements are named
/// "g^k" when there is a single generator pair, otherwise by a shortest word
/// such as "a*b^-1" with "e" for the identity.
class GroupClosure {
 public:
  GroupClosure(const FinAction& action, std::size_t cap);

  std::size_t order() const noexcept { return elements_.size(); }
  std::size_t degree() const noexcept { return degree_; }
  static constexpr std::size_t identity() noexcept { return 0; }

  const Perm& element(std::size_t id) const { return elements_[id]; }
  const std::string& name(std::size_t id) const { return names_[id]; }
  std::span<const Perm> elements() const noexcept { return elements_; }

  std::optional<std::size_t> find(const Perm& p) const;
  std::optional<std::size_t> find_name(std::string_view name) const;

  /// Closure id of generator `index` of the originating action.
  std::size_t generator_id(std::size_t index) const { return generator_ids_[index]; }
  std::size_t generator_count() const noexcept { return generator_ids_.size(); }

  /// id of element(a) * element(b).
  std::size_t multiply(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }

 private:
  std::size_t degree_ = 0;
  std::vector<Perm> elements_;
  std::vector<std::string> names_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> generator_ids_;
  std::unordered_map<Perm, std::size_t, PermHash> index_;
  std::vector<std::uint32_t> table_;  // dense multiplication table when small
};

}  // namespace erglab
