#pragma once

// Kazhdan-pair arithmetic, averaging-operator certificates from finite
// representations, and the threshold and cost calculators.

#include "erglab/action.hpp"
#include "erglab/caps.hpp"
#include "erglab/gram.hpp"
#include "erglab/rational.hpp"
#include "erglab/subrel.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace erglab {

/// sqrt(2 (1 - ((k - eps^2/2)/k)^n)). Throws ValidationError unless k >= 1,
/// n >= 1 and 0 < eps <= sqrt(2).
double amplify(std::size_t k, double eps, std::size_t n);

enum class BoundSelector { eps_n, pu, cost_a, cost_b, cost_c };

/// Throws ValidationError on an unknown name.
BoundSelector parse_selector(std::string_view name);
std::string to_string(BoundSelector s);

struct BoundValue {
  double value = 0;
  std::optional<Rat> exact;   // rational mode (not available for eps_n)
  bool has_band = false;      // cost selectors: the trivial band 1 <= C < n
  double band_lo = 1, band_hi = 0;
};

/// Closed-form bound in binary64. Throws ValidationError unless n >= 1 and
/// 0 <= eps <= sqrt(2).
BoundValue bounds(BoundSelector s, std::size_t n, double eps);
/// Exact mode from eps^2 given as a rational (eps_n has no rational form).
BoundValue bounds_exact(BoundSelector s, std::size_t n, const Rat& eps_squared);

enum class Prop53Verdict { pass, vacuous, counterexample };
std::string to_string(Prop53Verdict v);

struct Prop53Report {
  Prop53Verdict verdict = Prop53Verdict::vacuous;
  double min_q = 0, min_all = 0;
  double hypothesis = 0, conclusion = 0;  // 1 - d^2 e^2 / 2 and 1 - 2 d^2
};

/// `table[0]` is phi(1), `q` indexes into the table. Throws ValidationError
/// unless phi(1) = 1 and delta > 0.
Prop53Report prop53_check(const std::vector<double>& table, const std::vector<std::size_t>& q, double eps,
                          double delta);

/// Orthogonal representation of a finite permutation group, one matrix per
/// closure element. Permutation representations skip the dense storage.
class FiniteRep {
 public:
  /// Permutation representation of the group on the points it moves.
  static FiniteRep permutation(const GroupClosure& group);
  /// Regular representation (left multiplication on the closure).
  static FiniteRep regular(const GroupClosure& group);
  /// Explicit matrices indexed by closure id; checked for orthogonality
  /// (1e-12) and the homomorphism property.
  static FiniteRep matrices(const GroupClosure& group, std::vector<Eigen::MatrixXd> mats);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t order() const noexcept { return order_; }
  /// y = pi(g) x.
  void apply(std::size_t g, const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  /// y = pi(g)^T x.
  void apply_transpose(std::size_t g, const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  /// Orthonormal basis of the invariant vectors (columns).
  const Eigen::MatrixXd& invariant_basis() const noexcept { return invariant_; }
  Eigen::MatrixXd dense(std::size_t g) const;

 private:
  std::size_t dim_ = 0, order_ = 0;
  std::vector<std::vector<std::uint32_t>> perms_;  // permutation case
  std::vector<Eigen::MatrixXd> mats_;              // matrix case
  Eigen::MatrixXd invariant_;
};

struct AveragingNorm {
  double norm = 0;       // ||T|| on the orthogonal complement of the invariants
  double eps_cap = 0;    // min(sqrt 2, sqrt(2k(1-||T||))): no larger eps works for this Q here
  double eps_floor = 0;  // sqrt(2(1-||T||)): a valid eps for every rep contained in this one
  std::size_t iterations = 0;
};

/// T = (1/k) sum_{g in Q} pi(g), normed by power iteration on T^* T with
/// deflation of the invariant subspace, stopping once the Rayleigh quotient
/// moves by at most 1e-15. Q holds closure ids and must contain the identity.
AveragingNorm averaging_norm(const FiniteRep& rep, const std::vector<std::size_t>& q);

struct TransferResult {
  std::vector<Rat> values;  // per closure id of the Gamma action
  GramCertificate certificate;
};

/// phi(gamma) = sum_delta psi(delta) mu{x : gamma x = delta x}; certified by
/// a Gram check over the Gamma closure. `psi` is indexed by Delta closure id.
TransferResult pd_transfer(const std::vector<Rat>& psi, const FinAction& a0, const FinAction& action, const Caps& caps);

/// Threshold levels 1 - eps^2/2, /4, /8, /16.
std::vector<double> cor54_thresholds(double eps);

struct Cor54Report {
  double eps = 0;
  double min_q = 0;                // min over Q of phi_E
  std::vector<double> thresholds;
  std::size_t level = 0;           // number of thresholds strictly exceeded
  Rat phi0;                        // min over the closure of phi_E
  bool equal_classes = true;       // index conclusions are asserted only then
  bool finite_index_witness = true;  // level >= 1: tau has an invariant vector with an extraction
  bool positive = true;              // level >= 2: phi0 > 0 and m* <= 1/phi0
  bool half = true;                  // level >= 3: phi0 > 1/2 and m* = 1
  bool agreement = true;             // level >= 4: phi0 > 3/4 and mu(A_1) >= 4 phi0 - 3
  bool prop53 = true;                // phi0 >= 1 - 4(1 - min_q)/eps^2
  bool holds() const { return finite_index_witness && positive && half && agreement && prop53; }
};

/// Reads off which threshold min_Q phi_E clears and checks the matching
/// conclusions with the subrelation checkers. `eps` must be valid for the
/// acting group and Q (e.g. AveragingNorm::eps_floor of the regular rep).
Cor54Report cor54_dispatch(const EqRel& e, const FinAction& action, const std::vector<std::size_t>& q, double eps,
                           const Caps& caps);

}  // namespace erglab
