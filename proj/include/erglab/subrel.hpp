#pragma once

// Subequivalence relations E inside F: choice functions, the index cocycle,
// the representation tau on the finite carrier, and finite checkers for the
// index and agreement theorems.

#include "erglab/action.hpp"
#include "erglab/caps.hpp"
#include "erglab/eqrel.hpp"
#include "erglab/perm.hpp"
#include "erglab/random.hpp"
#include "erglab/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace erglab {

/// Choice functions C_n for E inside F.
///
/// Within each F-class the E-classes are put in a cyclic order. The default
/// convention orders them by minimal element and reads forward from the class
/// of x, using minimal elements as representatives. The alternate convention
/// orders by maximal element, reads backward, and uses maximal elements; it
/// exists to test independence of the choice.
class ChoiceSystem {
 public:
  enum class Convention { min_forward, max_backward };

  /// Throws ValidationError unless E refines F.
  ChoiceSystem(EqRel e, EqRel f, Convention convention = Convention::min_forward);

  const EqRel& e() const noexcept { return e_; }
  const EqRel& f() const noexcept { return f_; }
  Convention convention() const noexcept { return convention_; }
  std::size_t space_size() const noexcept { return e_.size(); }

  /// N(x): number of E-classes in [x]_F.
  std::size_t index(Point x) const { return order_[f_.class_index(x)].size(); }
  /// N when constant over X.
  std::optional<std::size_t> constant_index() const;
  /// C_n(x) for n < N(x); C_0(x) = x.
  Point choice(Point x, std::size_t n) const;
  /// E-class id (an index into e().classes()) of C_n(x).
  std::size_t class_at(Point x, std::size_t n) const;
  /// The n with [C_n(x)]_E equal to E-class `eclass`; eclass must lie in [x]_F.
  std::size_t slot(Point x, std::size_t eclass) const;
  /// E-class ids of one F-class in the convention's base order.
  const std::vector<std::size_t>& ordered_classes(std::size_t fclass) const { return order_[fclass]; }

 private:
  EqRel e_, f_;
  Convention convention_;
  std::vector<std::vector<std::size_t>> order_;  // per F-class
  std::vector<std::size_t> rank_;                // per E-class: position in its F-class order
  std::vector<Point> rep_;                       // per E-class representative
};

/// pi(x,y) in S_N: pi(x,y)(k) = n iff [C_k(x)]_E = [C_n(y)]_E.
/// Throws ValidationError when x and y are not F-related.
Perm index_cocycle(const ChoiceSystem& cs, Point x, Point y);

/// sigma(S,x) = pi(x, S(x)).
Perm sigma(const ChoiceSystem& cs, const Perm& s, Point x);

/// Bijective choice maps D_n (same in-class rank, n-th class in the rotated
/// order). Exist iff every F-class has equal-size E-classes and N is constant.
std::optional<Perm> shift_map(const ChoiceSystem& cs, std::size_t n);

/// The carrier of tau: pairs (x,n) with n < N(x), laid out x-major.
class TauCarrier {
 public:
  explicit TauCarrier(const ChoiceSystem& cs);
  std::size_t size() const noexcept { return total_; }
  std::size_t offset(Point x) const { return offset_[x]; }
  std::size_t coordinate(Point x, std::size_t n) const { return offset_[x] + n; }
  Point point_of(std::size_t coord) const { return owner_[coord]; }

 private:
  std::size_t total_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<Point> owner_;
};

/// Coordinate permutation of tau(S): (x,n) -> (S(x), sigma(S,x)(n)).
/// Throws ValidationError unless S is in [F].
Perm tau_representation(const ChoiceSystem& cs, const TauCarrier& carrier, const Perm& s);

/// <tau(S) xi_0, xi_0> with the inner product (1/m) sum f g.
Rat tau_character(const ChoiceSystem& cs, const Perm& s);

/// (A, m) read off an invariant vector: A is E-invariant, of positive
/// measure, and every F-class meeting A holds exactly m E-classes of A.
struct Extraction {
  std::vector<Point> set;
  std::size_t m = 0;
  Rat measure;
};

struct InvariantAnalysis {
  std::vector<std::uint32_t> component;  // carrier coordinate -> component id
  std::size_t num_components = 0;
  std::vector<Extraction> extractions;   // one per component indicator
  bool full_group_invariant = true;      // every component indicator fixed by the [F] sample
  std::size_t full_group_checked = 0;
  bool exhaustive = false;
  std::vector<Rat> average;              // Gamma-average of xi_0
  Rat average_pairing;                   // <average, xi_0>
  Rat min_phi;                           // min over the closure of phi_E
  Extraction average_extraction;
};

/// Reads (A, m) off a tau(Gamma)-invariant vector. Throws IdentityViolation
/// when the read-off set fails the stated properties.
Extraction extract_index_set(const ChoiceSystem& cs, const TauCarrier& carrier, const std::vector<Rat>& xi);

/// Invariant vectors of tau restricted to the acting group, plus the
/// [F]-invariance cross-check on an enumerated or sampled part of [F].
/// Throws ValidationError when the action's orbits differ from F.
InvariantAnalysis invariant_analysis(const ChoiceSystem& cs, const FinAction& action, const Caps& caps,
                                     Rng& rng, std::size_t samples = 64);

struct MinIndexReport {
  Rat c;                            // min over the closure of phi_E(S gamma S')
  std::size_t argmin = 0;           // closure id attaining c
  std::vector<std::size_t> class_index;  // N(O) per F-class
  std::size_t m_star = 0;
  std::vector<Point> set;           // union of F-classes of index m_star
  std::vector<Point> agreement_set; // union of F-classes of index 1
  Rat agreement_measure;
  bool vacuous = false;             // c == 0
  /// Every F-class splits into E-classes of a single size, i.e. one-to-one
  /// choice functions exist. The bounds below are only implied then; they
  /// are still evaluated otherwise but not asserted.
  bool equal_classes = true;
  bool index_bound = true;          // m_star <= floor(1/c)
  bool half_bound = true;           // c > 1/2 implies m_star == 1
  bool agreement_bound = true;      // c > 3/4 implies mu(A_1) >= 4c - 3
  bool bounds_hold() const { return index_bound && half_bound && agreement_bound; }
  bool holds() const { return !equal_classes || bounds_hold(); }
};

/// Throws ValidationError unless E refines F, F is the orbit relation and
/// S, S' lie in [F].
MinIndexReport min_index_set(const EqRel& e, const EqRel& f, const Perm& s, const Perm& sp,
                             const FinAction& action, const Caps& caps);

struct SeparatingResult {
  enum class Kind { maps, set, infeasible };
  Kind kind = Kind::maps;
  std::vector<Perm> maps;     // T_0 = id, ..., T_n
  std::vector<Point> set;     // union of F-classes with at most n E-classes
  std::size_t witness_class = 0;  // F-class violating (n+1) * max E-class size <= |O|
  std::string reason;
};

/// Either F-classes of index <= n, or T_0..T_n in [F] with pairwise
/// E-inequivalent values at every point, or the class certifying that no
/// such family exists. A family exists iff (n+1) * s_max(O) <= |O| for every
/// F-class O.
SeparatingResult separating_maps(const EqRel& e, const EqRel& f, std::size_t n);

struct EvadingResult {
  std::optional<Perm> map;  // S in [F] with phi_E(S) = 0
  std::size_t witness_class = 0;
  std::string reason;
};

/// Throws ValidationError when E does not refine F or an F-class holds a
/// single E-class.
EvadingResult evading_map(const EqRel& e, const EqRel& f);

struct Thm27Report {
  Rat epsilon;       // max over the closure of 1 - phi_E
  Rat bound;         // 1 - 4 epsilon
  Rat min_phi;       // min over the checked part of [F]
  Perm minimizer;
  Rat margin;        // min_phi - bound
  std::size_t checked = 0;
  bool exhaustive = false;
  bool pass = true;
};

/// Replaces E by E meet F, then checks phi_E(S) >= 1 - 4 epsilon across [F]
/// (enumerated under caps.full_group, otherwise `samples` random elements).
Thm27Report check_thm27(const EqRel& e, const FinAction& action, const Caps& caps, Rng& rng,
                        std::size_t samples = 4096);

/// Singleton links between consecutive E-class minima inside each F-class;
/// E joined with them is F, with total measure sum_O (N(O)-1)/m.
/// Throws ValidationError unless E refines F.
std::vector<PartialIso> merge_links(const EqRel& e, const EqRel& f);

}  // namespace erglab
