#pragma once

// Seeded instance generators. Every generator is a pure function of its
// arguments and the Rng state, so a seed reproduces the same instance.

#include "erglab/action.hpp"
#include "erglab/coinduce.hpp"
#include "erglab/eqrel.hpp"
#include "erglab/instance.hpp"
#include "erglab/random.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace erglab {

/// Deterministic per-item seed for batch runs (splitmix64 of seed and index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Random partition of {0..m-1}.
EqRel random_partition(std::size_t m, Rng& rng);

/// Random refinement of `f`. With `dominant`, every F-class gets an E-class
/// holding more than half of it.
EqRel random_refinement(const EqRel& f, Rng& rng, bool dominant = false);

/// Uniform random permutation of {0..m-1}.
Perm random_perm(std::size_t m, Rng& rng);

/// E inside F with an action whose orbits are F: "g" cycles each E-class,
/// "h" cycles one point of every E-class inside each F-class. S and Sp are
/// random elements of [F].
struct PairInstance {
  EqRel e, f;
  FinAction action;
  Perm s, sp;
};
PairInstance random_pair(std::size_t m, Rng& rng);

/// Co-induction data: b0 is the left regular action of a small group G on
/// G x {0..c-1}, a0 is right multiplication by one element h (free, and its
/// orbits refine those of b0 with constant index [G : <h>]), and the target
/// sends h to a random permutation of Y whose order divides that of h.
struct CoinduceInstance {
  FinAction a0, b0;
  TargetSpec target;
  std::string group;  // e.g. "D4"
};
CoinduceInstance random_coinduce(Rng& rng);

/// Instance documents.
json pair_document(const PairInstance& p);
json coinduce_document(const CoinduceInstance& c);
/// Z/n with generator "g" = +1, E = orbits of +2, F = one class, and the
/// percolation block A_g = {x : x mod 3 != 2}. n = 6 is the six-point example.
json cyclic_document(std::size_t n);
/// Z/a x Z/b on a*b points, generators "g" (first factor) and "h" (second);
/// E = orbits of g, F = everything.
json product_document(std::size_t a, std::size_t b);
/// X = Z/m, b0 = "g" (+1), a0 = "d" (+n), E = residues mod n, target Y = {0,1}
/// with d acting by the swap when m/n is even. Requires n | m.
json coinduce_ready_document(std::size_t m, std::size_t n);

/// Dispatch on kind in {random_pair, cyclic, product, coinduce_ready}.
/// Throws ValidationError for an unknown kind or an infeasible size.
json generate(std::string_view kind, const std::vector<std::size_t>& size, std::uint64_t seed);

}  // namespace erglab
