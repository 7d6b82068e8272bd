#pragma once

// Bond percolation on Cayley balls of finitely generated group models, the
// action <-> percolation dictionary on finite actions, and the exhaustion
// length function.

#include "erglab/action.hpp"
#include "erglab/caps.hpp"
#include "erglab/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace erglab {

/// Normal form of a group element; the model fixes its meaning.
using Element = std::vector<std::int64_t>;

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

/// A group with canonical normal forms. Elements compare by normal form.
class GroupModel {
 public:
  virtual ~GroupModel() = default;
  virtual std::string name() const = 0;
  virtual Element identity() const = 0;
  virtual Element multiply(const Element& a, const Element& b) const = 0;
  virtual Element inverse(const Element& a) const = 0;
  /// Symmetric standard generating set.
  virtual std::vector<Element> standard_generators() const = 0;
  /// Word length for the standard generators, when a closed form exists.
  virtual std::optional<std::size_t> standard_length(const Element& a) const { (void)a; return std::nullopt; }
  virtual std::string format(const Element& a) const = 0;
  /// Throws ValidationError on malformed text.
  virtual Element parse(std::string_view text) const = 0;
};

/// Z^d: integer vectors; generators +-e_i; format "(1,-2)".
std::shared_ptr<const GroupModel> make_zd(std::size_t d);
/// Free group F_k: reduced words of letters +-(i+1); format "aB" (upper case
/// is the inverse letter), "e" for the identity.
std::shared_ptr<const GroupModel> make_free(std::size_t k);
/// Permutation group given by generators; elements are image arrays and the
/// standard generators are the given ones closed under inversion.
std::shared_ptr<const GroupModel> make_perm_group(std::size_t degree, std::vector<Perm> generators);
/// Direct product; elements concatenate per-factor forms, each prefixed by
/// its length. Format "<g1|g2>".
std::shared_ptr<const GroupModel> make_product(std::vector<std::shared_ptr<const GroupModel>> factors);
/// "Z2", "Z^3", "F2", "Z2xF2" style names.
std::shared_ptr<const GroupModel> model_from_name(std::string_view name);

/// Truncated left Cayley graph: vertices of word length <= r, edges {g, s g}.
struct CayleyBall {
  std::shared_ptr<const GroupModel> model;
  std::vector<Element> generators;
  std::size_t radius = 0;
  std::vector<Element> vertices;                       // sorted by (distance, normal form)
  std::vector<std::uint32_t> distance;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // (lower index, higher index)
  std::vector<std::uint32_t> boundary;                 // vertices at distance r
  std::unordered_map<Element, std::uint32_t, ElementHash> index;

  std::optional<std::uint32_t> find(const Element& e) const;
};

/// Closes Q under inversion. Throws ValidationError when Q contains the
/// identity, CapExceeded("ball") beyond the vertex budget.
CayleyBall cayley_ball(std::shared_ptr<const GroupModel> model, std::vector<Element> q, std::size_t r,
                       const Caps& caps);

struct PercConfig {
  double p = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::vector<std::uint8_t> open;  // one flag per edge
};

/// Edge e is open iff counter_uniform(seed, trial, e) < p.
PercConfig percolate(const CayleyBall& ball, double p, std::uint64_t seed, std::uint64_t trial = 0);

/// Cluster labels of a configuration (union-find roots canonicalized to the
/// smallest vertex of each cluster).
std::vector<std::uint32_t> cluster_labels(const CayleyBall& ball, const PercConfig& config);

struct ClusterStats {
  std::size_t trials = 0;
  std::vector<double> tau_hat, tau_se;  // per target
  double theta_hat = 0, theta_se = 0;   // identity cluster reaches the boundary
  double boundary_clusters_mean = 0;
};

/// Throws ValidationError when a target lies outside the ball.
ClusterStats cluster_stats(const CayleyBall& ball, const std::vector<PercConfig>& configs,
                           const std::vector<Element>& targets);

struct SweepPoint {
  double p = 0;
  std::size_t trials = 0;
  std::size_t theta_count = 0;
  std::size_t boundary_cluster_sum = 0;
  std::vector<std::size_t> tau_count;
  double theta_hat() const { return trials ? double(theta_count) / double(trials) : 0.0; }
  double theta_se() const;
  double boundary_clusters_mean() const { return trials ? double(boundary_cluster_sum) / double(trials) : 0.0; }
  double tau_hat(std::size_t t) const { return trials ? double(tau_count[t]) / double(trials) : 0.0; }
};

struct SweepCurve {
  std::vector<SweepPoint> points;
  std::vector<Element> targets;
  bool monotone = true;  // theta_hat non-decreasing in p
};

/// Common-random-numbers sweep: trial t draws one uniform per edge from
/// stream t, and the grid point p keeps the edges with u < p. Per-trial
/// counts are integers merged by summation, so the result is identical for
/// any number of workers. The grid must be strictly increasing in [0,1].
SweepCurve sweep(const CayleyBall& ball, const std::vector<double>& grid, std::size_t trials, std::uint64_t seed,
                 const std::vector<Element>& targets = {}, std::size_t workers = 1);

/// First p where theta_hat reaches `level`, linearly interpolated.
std::optional<double> crossing(const SweepCurve& curve, double level = 0.5);
/// Grid p maximizing the least-squares slope of theta_hat over +-`half_window` points.
double inflection(const SweepCurve& curve, std::size_t half_window = 4);

/// Percolation pulled back from a finite action: on the Cayley graph of the
/// acting group, edge {g, s g} is open in Phi(x) iff g x lies in A_s.
struct PhiReport {
  std::size_t group_order = 0;
  std::size_t edges = 0;
  bool free_action = false;
  bool equivariant = true;                 // Phi(g x) = g . Phi(x)
  std::vector<Rat> phi_e;                  // phi_E(gamma) per closure id
  std::vector<Rat> connection;             // P(1 <-> gamma) per closure id
  bool identity_holds = true;              // equality (free) or P <= phi (otherwise)
  std::vector<std::vector<Point>> a_sets;  // per generator, after completion
};

/// `a_sets[i]` is A for generator i; an empty optional is filled by
/// A_{s^-1} = s A_s. Throws ValidationError on incompatible sets. With
/// `radius`, equivariance is checked on edges of that ball only.
PhiReport action_to_percolation(const FinAction& action, const std::vector<std::optional<std::vector<Point>>>& a_sets,
                                const Caps& caps, std::optional<std::size_t> radius = std::nullopt);

/// Exhaustion length |g| = min{n : wordlength(g) <= n a_n}, f(g) = 1/(|g|+1).
class LengthSystem {
 public:
  /// Default a-sequence a_1 = 1, a_{n+1} = n a_n + 1. Throws ValidationError
  /// unless the sequence satisfies a_{n+1} > n a_n.
  LengthSystem(std::shared_ptr<const GroupModel> model, std::vector<Element> q, const Caps& caps,
               std::vector<std::size_t> a = {});
  /// a_n for n >= 1 (extended on demand by the default rule).
  std::size_t a(std::size_t n) const;
  std::size_t word_length(const Element& g) const;
  std::size_t length(const Element& g) const;
  Rat weight(const Element& g) const { return Rat(1, static_cast<long>(length(g) + 1)); }
  const GroupModel& model() const { return *model_; }

 private:
  std::shared_ptr<const GroupModel> model_;
  std::vector<Element> q_;
  bool standard_ = false;
  std::size_t budget_;
  mutable std::vector<std::size_t> a_;
};

}  // namespace erglab
