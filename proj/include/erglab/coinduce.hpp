#pragma once

// Co-induction on finite models: the cocycle rho = (pi, delta_bar) into
// S_N semidirect Delta^N, the skew-product action b on X x Y^N, and exact
// checks of the measure identity and the pairing identity.

#include "erglab/action.hpp"
#include "erglab/caps.hpp"
#include "erglab/subrel.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace erglab {

/// A Delta-action on Y, described either by images of the a0 generators or
/// by images of named Delta elements. Missing elements default to identity
/// only when `element_images` is used and the name set is complete.
struct TargetSpec {
  std::size_t size = 1;
  std::vector<std::pair<std::string, Perm>> generator_images;  // a0 generator label -> image
  std::vector<std::pair<std::string, Perm>> element_images;    // Delta element name -> image
};

/// Element of S_N semidirect Delta^N; `delta` holds Delta closure ids.
struct Rho {
  Perm pi;
  std::vector<std::size_t> delta;
  friend bool operator==(const Rho&, const Rho&) = default;
};

class CoinducedSystem {
 public:
  /// Validates: a0 free, orbits(a0) refine orbits(b0), constant index N,
  /// and the target images form a homomorphism of the Delta closure.
  CoinducedSystem(FinAction a0, FinAction b0, const TargetSpec& target, const Caps& caps,
                  ChoiceSystem::Convention convention = ChoiceSystem::Convention::min_forward);

  const FinAction& a0() const noexcept { return a0_; }
  const FinAction& b0() const noexcept { return b0_; }
  const GroupClosure& delta() const noexcept { return delta_; }
  const GroupClosure& gamma() const noexcept { return gamma_; }
  const ChoiceSystem& choices() const noexcept { return cs_; }
  std::size_t index() const noexcept { return n_; }
  std::size_t space_size() const noexcept { return cs_.space_size(); }
  std::size_t target_size() const noexcept { return y_; }
  const Perm& target_image(std::size_t delta_id) const { return a_[delta_id]; }
  /// Orbits of the target action on Y.
  EqRel target_orbits() const;

  /// The unique Delta id sending u to v (same E-class), if any.
  std::optional<std::size_t> transit(Point u, Point v) const;
  /// delta_bar(x,y)_n: the Delta element with delta * C_{pi^-1(n)}(x) = C_n(y).
  std::vector<std::size_t> delta_bar(Point x, Point y) const;
  Rho rho_pair(Point x, Point y) const;
  /// rho(gamma, x) = rho(x, gamma x).
  Rho rho(std::size_t gamma_id, Point x) const;
  /// (pi1, d1)(pi2, d2) = (pi1 pi2, n -> d1_n * d2_{pi1^-1(n)}).
  Rho multiply(const Rho& a, const Rho& b) const;
  /// (rho . ybar)_n = a(delta_n)(ybar_{pi^-1(n)}).
  void act(const Rho& r, std::span<const Point> ybar, std::span<Point> out) const;

  /// |X| * |Y|^N, saturating.
  std::size_t product_size() const noexcept { return product_; }
  bool materializable() const noexcept { return product_ <= product_cap_; }
  std::size_t encode(Point x, std::span<const Point> ybar) const;
  Point decode(std::size_t z, std::span<Point> ybar) const;

  /// b(gamma) and a'(delta) as permutations of X x Y^N; CapExceeded("product")
  /// above the configured cap.
  Perm b(std::size_t gamma_id) const;
  Perm a_prime(std::size_t delta_id) const;

 private:
  Perm product_perm(const std::vector<Rho>& per_x, const std::vector<Point>& base) const;

  FinAction a0_, b0_;
  GroupClosure delta_, gamma_;
  ChoiceSystem cs_;
  std::size_t n_ = 1, y_ = 1, product_ = 0, product_cap_ = 0;
  std::vector<Perm> a_;                  // target image per Delta id
  std::vector<std::uint32_t> transit_;   // u * |Delta| + rank of v in its class -> Delta id
  std::vector<std::uint32_t> rank_;      // rank of a point inside its E-class
  std::vector<std::size_t> pow_;         // |Y|^n
};

/// phi^{k,n}(gamma) = mu{x : pi(x, gamma x)(k) = n}. phi_kn(0,0) = phi_E.
Rat phi_kn(const ChoiceSystem& cs, const Perm& gamma, std::size_t k, std::size_t n);

struct IdentityCheck {
  Rat lhs, rhs;
  bool holds = false;
  bool materialized = false;  // lhs also recomputed on the materialized product
};

/// (mu x nu^N)(gamma B0 cap B0) = p phi_E(gamma) + p^2 (1 - phi_E(gamma)),
/// B0 = {(x, ybar) : ybar_0 in B}. Throws ValidationError unless B is
/// invariant under the target action.
IdentityCheck check_thm33_identity(const CoinducedSystem& sys, const std::vector<Point>& b, std::size_t gamma_id);

/// <tau_b(gamma^-1) f^(n), f^(k)> = phi^{k,n}(gamma) * ||f||^2 with
/// f^(j)(x, ybar) = f(ybar_j). Throws ValidationError unless f is mean-zero
/// and invariant under the target action.
IdentityCheck check_prop34_pairing(const CoinducedSystem& sys, const std::vector<Rat>& f, std::size_t k,
                                   std::size_t n, std::size_t gamma_id);

/// All invariant subsets of Y (unions of target orbits). CapExceeded above
/// 2^20 subsets.
std::vector<std::vector<Point>> invariant_subsets(const CoinducedSystem& sys);

struct CoinduceValidation {
  bool rho_cocycle = true;       // rho(g1 g2, x) = rho(g1, g2 x) rho(g2, x)
  bool b_action = true;          // b(s) b(gamma) = b(s gamma)
  bool b_free = true;            // only asserted when b0 is free
  bool a_prime_free = true;
  bool factors = true;           // the three factor maps are equivariant
  bool orbit_inclusion = true;   // E_{a'} inside E_b
  bool materialized = false;
  std::size_t cocycle_pairs = 0;
  bool ok() const { return rho_cocycle && b_action && b_free && a_prime_free && factors && orbit_inclusion; }
};

/// Exhaustive cocycle check; product-space checks run when materializable.
CoinduceValidation validate(const CoinducedSystem& sys);

/// Cycle types of b(gamma) for every gamma; conjugate systems agree.
std::vector<std::vector<std::size_t>> cycle_fingerprint(const CoinducedSystem& sys);

}  // namespace erglab
