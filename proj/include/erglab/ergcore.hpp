#pragma once

// Capture functionals, full groups and cost on finite uniform spaces.
// Every quantity here is an exact rational with denominator dividing m.

#include "erglab/action.hpp"
#include "erglab/caps.hpp"
#include "erglab/eqrel.hpp"
#include "erglab/perm.hpp"
#include "erglab/random.hpp"
#include "erglab/rational.hpp"

#include <functional>
#include <vector>

namespace erglab {

/// Orbit partition of the group generated by the action.
EqRel orbit_relation(const FinAction& action);

/// Uniform distance mu{x : S(x) != T(x)}.
Rat delta_u(const Perm& s, const Perm& t);

/// phi_E(S) = mu{x : S(x) E x}.
Rat phi(const EqRel& e, const Perm& s);

/// psi_E(S,T) = mu{x : S^-1(x) E T^-1(x)}; left-invariant, psi_E(1,S) = phi_E(S).
Rat psi(const EqRel& e, const Perm& s, const Perm& t);

/// theta_E(S) = 1 - phi_E(S), the uniform distance from S to [E].
Rat theta(const EqRel& e, const Perm& s);

/// T in [E] agreeing with S wherever S(x) E x.
///
/// On A = {x : S(x) E x} and B = S(A), the map S|A splits Y = A u B into
/// cycles (kept) and finite chains a_C -> ... -> b_C; each chain is closed
/// by T(b_C) = a_C. T is the identity off Y, so delta_u(S, T) = theta_E(S).
Perm project_to_full_group(const EqRel& e, const Perm& s);

/// |[E]| = product of class factorials, saturating at SIZE_MAX.
std::size_t full_group_order(const EqRel& e);

/// All of [E]. Throws CapExceeded("full_group") when |[E]| > cap.
std::vector<Perm> full_group(const EqRel& e, std::size_t cap);

/// Calls `visit` on every element of [E] in enumeration order, without
/// materializing the list. Throws CapExceeded("full_group") above `cap`.
void for_each_full_group(const EqRel& e, std::size_t cap, const std::function<void(const Perm&)>& visit);

/// Uniform random element of [E] (independent shuffle inside every class).
Perm random_full_group_element(const EqRel& e, Rng& rng);

/// sum_{n=1..K} 2^-n mu(S(A_n) symdiff T(A_n)) over the supplied sets.
Rat weak_metric(const Perm& s, const Perm& t, const std::vector<std::vector<Point>>& sets);

/// Finite-model cost: a spanning forest of the classes, 1 - #classes/m.
Rat cost(const EqRel& r);

}  // namespace erglab
