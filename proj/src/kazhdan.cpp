#include "erglab/kazhdan.hpp"

#include "erglab/ergcore.hpp"
#include "erglab/errors.hpp"
#include "erglab/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace erglab {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void require_eps(double eps, bool allow_zero) {
  if (!(eps >= 0.0) || (!allow_zero && eps == 0.0) || eps > kSqrt2 * (1 + 1e-15))
    throw ValidationError("eps must lie in " + std::string(allow_zero ? "[0" : "(0") + ", sqrt 2]");
}

}  // namespace

double amplify(std::size_t k, double eps, std::size_t n) {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (n == 0) throw ValidationError("n must be at least 1");
  require_eps(eps, false);
  double step = eps * eps / (2 * double(k));
  if (step >= 1) return std::sqrt(2.0);
  // 1 - (1 - step)^n without cancellation for small step.
  return std::sqrt(-2 * std::expm1(double(n) * std::log1p(-step)));
}

BoundSelector parse_selector(std::string_view name) {
  if (name == "eps_n") return BoundSelector::eps_n;
  if (name == "pu") return BoundSelector::pu;
  if (name == "cost_a") return BoundSelector::cost_a;
  if (name == "cost_b") return BoundSelector::cost_b;
  if (name == "cost_c") return BoundSelector::cost_c;
  throw ValidationError("unknown selector '" + std::string(name) + "'");
}

std::string to_string(BoundSelector s) {
  switch (s) {
    case BoundSelector::eps_n: return "eps_n";
    case BoundSelector::pu: return "pu";
    case BoundSelector::cost_a: return "cost_a";
    case BoundSelector::cost_b: return "cost_b";
    case BoundSelector::cost_c: return "cost_c";
  }
  return "?";
}

namespace {

bool is_cost(BoundSelector s) {
  return s == BoundSelector::cost_a || s == BoundSelector::cost_b || s == BoundSelector::cost_c;
}

template <typename T>
T closed_form(BoundSelector s, std::size_t n, const T& e2) {
  T nn = T(static_cast<long>(n));
  switch (s) {
    case BoundSelector::pu: return 1 - e2 / 2;
    case BoundSelector::cost_a: return nn * (1 - e2 / 2) + (nn - 1) / (2 * nn - 1);
    case BoundSelector::cost_b: return nn - (nn - 1) * e2 / 8;
    case BoundSelector::cost_c: return nn - e2 / 2;
    case BoundSelector::eps_n: break;
  }
  throw ValidationError("eps_n has no rational form");
}

}  // namespace

BoundValue bounds(BoundSelector s, std::size_t n, double eps) {
  if (n == 0) throw ValidationError("n must be at least 1");
  require_eps(eps, true);
  BoundValue b;
  if (s == BoundSelector::eps_n) b.value = kSqrt2 * std::sqrt(double(2 * n - 1) / double(2 * n + 1));
  else b.value = closed_form<double>(s, n, eps * eps);
  if (is_cost(s)) {
    b.has_band = true;
    b.band_hi = double(n);
  }
  return b;
}

BoundValue bounds_exact(BoundSelector s, std::size_t n, const Rat& eps_squared) {
  if (n == 0) throw ValidationError("n must be at least 1");
  if (eps_squared < 0 || eps_squared > 2) throw ValidationError("eps^2 must lie in [0, 2]");
  if (s == BoundSelector::eps_n) throw ValidationError("eps_n has no rational form");
  BoundValue b;
  b.exact = closed_form<Rat>(s, n, eps_squared);
  b.value = to_double(*b.exact);
  if (is_cost(s)) {
    b.has_band = true;
    b.band_hi = double(n);
  }
  return b;
}

std::string to_string(Prop53Verdict v) {
  switch (v) {
    case Prop53Verdict::pass: return "PASS";
    case Prop53Verdict::vacuous: return "VACUOUS";
    case Prop53Verdict::counterexample: return "COUNTEREXAMPLE";
  }
  return "?";
}

Prop53Report prop53_check(const std::vector<double>& table, const std::vector<std::size_t>& q, double eps, double delta) {
  if (table.empty() || std::abs(table[0] - 1.0) > 1e-12) throw ValidationError("phi(1) must equal 1");
  if (!(delta > 0)) throw ValidationError("delta must be positive");
  require_eps(eps, false);
  Prop53Report r;
  r.hypothesis = 1 - delta * delta * eps * eps / 2;
  r.conclusion = 1 - 2 * delta * delta;
  r.min_q = 1;
  for (std::size_t i : q) {
    if (i >= table.size()) throw ValidationError("Q index outside the table");
    r.min_q = std::min(r.min_q, table[i]);
  }
  r.min_all = *std::min_element(table.begin(), table.end());
  if (r.min_q < r.hypothesis) r.verdict = Prop53Verdict::vacuous;
  else r.verdict = r.min_all >= r.conclusion ? Prop53Verdict::pass : Prop53Verdict::counterexample;
  return r;
}

FiniteRep FiniteRep::permutation(const GroupClosure& group) {
  FiniteRep rep;
  rep.dim_ = group.degree();
  rep.order_ = group.order();
  for (const auto& p : group.elements()) rep.perms_.emplace_back(p.images().begin(), p.images().end());
  UnionFind uf(rep.dim_);
  for (const auto& p : rep.perms_)
    for (std::uint32_t i = 0; i < rep.dim_; ++i) uf.unite(i, p[i]);
  EqRel orbits = EqRel::from_union_find(uf);
  rep.invariant_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rep.dim_), static_cast<Eigen::Index>(orbits.num_classes()));
  for (std::size_t c = 0; c < orbits.num_classes(); ++c) {
    double w = 1.0 / std::sqrt(double(orbits.classes()[c].size()));
    for (Point x : orbits.classes()[c]) rep.invariant_(x, static_cast<Eigen::Index>(c)) = w;
  }
  return rep;
}

FiniteRep FiniteRep::regular(const GroupClosure& group) {
  FiniteRep rep;
  rep.dim_ = rep.order_ = group.order();
  for (std::size_t g = 0; g < group.order(); ++g) {
    std::vector<std::uint32_t> img(group.order());
    for (std::size_t h = 0; h < group.order(); ++h) img[h] = static_cast<std::uint32_t>(group.multiply(g, h));
    rep.perms_.push_back(std::move(img));
  }
  rep.invariant_ = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(rep.dim_), 1, 1.0 / std::sqrt(double(rep.dim_)));
  return rep;
}

FiniteRep FiniteRep::matrices(const GroupClosure& group, std::vector<Eigen::MatrixXd> mats) {
  if (mats.size() != group.order()) throw ValidationError("need one matrix per group element");
  FiniteRep rep;
  rep.order_ = group.order();
  rep.dim_ = static_cast<std::size_t>(mats.front().rows());
  auto d = static_cast<Eigen::Index>(rep.dim_);
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  for (const auto& m : mats) {
    if (m.rows() != d || m.cols() != d) throw ValidationError("matrices must be square of equal size");
    if ((m.transpose() * m - eye).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("matrix is not orthogonal");
  }
  for (std::size_t a = 0; a < group.order(); ++a)
    for (std::size_t b = 0; b < group.order(); ++b)
      if ((mats[group.multiply(a, b)] - mats[a] * mats[b]).cwiseAbs().maxCoeff() > 1e-9)
        throw ValidationError("matrices are not a homomorphism");
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(d, d);
  for (const auto& m : mats) avg += m;
  avg /= double(group.order());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (avg + avg.transpose()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < d; ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  rep.invariant_.resize(d, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) rep.invariant_.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  rep.mats_ = std::move(mats);
  return rep;
}

void FiniteRep::apply(std::size_t g, const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  if (!mats_.empty()) {
    y = mats_[g] * x;
    return;
  }
  y.resize(x.size());
  const auto& p = perms_[g];
  for (std::size_t i = 0; i < dim_; ++i) y(p[i]) = x(static_cast<Eigen::Index>(i));
}

void FiniteRep::apply_transpose(std::size_t g, const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  if (!mats_.empty()) {
    y = mats_[g].transpose() * x;
    return;
  }
  y.resize(x.size());
  const auto& p = perms_[g];
  for (std::size_t i = 0; i < dim_; ++i) y(static_cast<Eigen::Index>(i)) = x(p[i]);
}

Eigen::MatrixXd FiniteRep::dense(std::size_t g) const {
  if (!mats_.empty()) return mats_[g];
  auto d = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < dim_; ++i) m(perms_[g][i], static_cast<Eigen::Index>(i)) = 1.0;
  return m;
}

AveragingNorm averaging_norm(const FiniteRep& rep, const std::vector<std::size_t>& q) {
  if (std::find(q.begin(), q.end(), GroupClosure::identity()) == q.end()) throw ValidationError("Q must contain the identity");
  for (std::size_t g : q)
    if (g >= rep.order()) throw ValidationError("Q element outside the group");
  const Eigen::MatrixXd& inv = rep.invariant_basis();
  auto d = static_cast<Eigen::Index>(rep.dimension());
  AveragingNorm out;
  double k = double(q.size());
  auto finish = [&](double norm) {
    out.norm = norm;
    out.eps_cap = std::min(kSqrt2, std::sqrt(std::max(0.0, 2 * k * (1 - norm))));
    out.eps_floor = std::sqrt(std::max(0.0, 2 * (1 - norm)));
    return out;
  };
  if (inv.cols() >= d) return finish(0.0);

  auto deflate = [&](Eigen::VectorXd& v) { v -= inv * (inv.transpose() * v); };
  auto apply_t = [&](const Eigen::VectorXd& x, bool adjoint) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d), y;
    for (std::size_t g : q) {
      if (adjoint) rep.apply_transpose(g, x, y);
      else rep.apply(g, x, y);
      acc += y;
    }
    return Eigen::VectorXd(acc / k);
  };

  Rng rng(0x5eed);
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = double(uniform_below(rng, 1u << 20)) / double(1u << 20) - 0.5;
  deflate(v);
  if (v.norm() == 0) return finish(0.0);
  v.normalize();
  // The reported norm is ||T v|| for the current unit vector v; taking the
  // square root of the Rayleigh quotient would amplify rounding near 0.
  double lambda = 0, est = 0;
  constexpr std::size_t max_iter = 1'000'000;
  for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
    Eigen::VectorXd w = apply_t(v, false);
    deflate(w);
    est = w.norm();
    Eigen::VectorXd u = apply_t(w, true);
    deflate(u);
    double next = v.dot(u);
    double nu = u.norm();
    if (nu <= 1e-300) break;
    if (out.iterations > 2 && std::abs(next - lambda) <= 1e-15) break;
    lambda = next;
    v = u / nu;
  }
  return finish(est);
}

TransferResult pd_transfer(const std::vector<Rat>& psi, const FinAction& a0, const FinAction& action, const Caps& caps) {
  if (a0.space_size() != action.space_size()) throw ValidationError("actions on different spaces");
  GroupClosure delta = a0.closure(caps.closure), gamma = action.closure(caps.closure);
  if (psi.size() != delta.order()) throw ValidationError("psi needs one value per Delta element");
  for (std::size_t id = 1; id < delta.order(); ++id)
    if (delta.element(id).fixed_point_count() != 0) throw ValidationError("a0 is not free");
  std::size_t m = action.space_size();
  TransferResult out;
  for (const Perm& g : gamma.elements()) {
    Rat v = 0;
    for (std::size_t id = 0; id < delta.order(); ++id) {
      if (psi[id] == 0) continue;
      std::size_t agree = 0;
      for (Point x = 0; x < m; ++x) agree += g(x) == delta.element(id)(x);
      v += psi[id] * ratio(agree, m);
    }
    out.values.push_back(v);
  }
  std::size_t n = gamma.order();
  RatMatrix gram(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = out.values[gamma.multiply(gamma.inverse(i), j)];
  out.certificate = gram_check(gram, Definiteness::positive);
  return out;
}

std::vector<double> cor54_thresholds(double eps) {
  double e2 = eps * eps;
  return {1 - e2 / 2, 1 - e2 / 4, 1 - e2 / 8, 1 - e2 / 16};
}

Cor54Report cor54_dispatch(const EqRel& e, const FinAction& action, const std::vector<std::size_t>& q, double eps,
                           const Caps& caps) {
  require_eps(eps, false);
  EqRel f = orbit_relation(action);
  if (!e.refines(f)) throw ValidationError("E is not contained in F");
  GroupClosure g = action.closure(caps.closure);
  Cor54Report r;
  r.eps = eps;
  r.thresholds = cor54_thresholds(eps);
  Rat min_q = 1;
  for (std::size_t id : q) {
    if (id >= g.order()) throw ValidationError("Q element outside the group");
    min_q = std::min(min_q, phi(e, g.element(id)));
  }
  r.min_q = to_double(min_q);
  r.phi0 = 1;
  for (const Perm& p : g.elements()) r.phi0 = std::min(r.phi0, phi(e, p));
  while (r.level < r.thresholds.size() && r.min_q > r.thresholds[r.level]) ++r.level;
  r.prop53 = to_double(r.phi0) >= 1 - 4 * (1 - r.min_q) / (eps * eps) - 1e-12;

  ChoiceSystem cs(e, f);
  Perm id = Perm::identity(e.size());
  if (r.level >= 1) {
    Rng rng(1);
    auto ia = invariant_analysis(cs, action, caps, rng, 8);
    r.finite_index_witness = ia.average_extraction.m >= 1 && !ia.average_extraction.set.empty();
  }
  MinIndexReport mi = min_index_set(e, f, id, id, action, caps);
  r.equal_classes = mi.equal_classes;
  bool scoped = mi.equal_classes;
  if (r.level >= 2) r.positive = r.phi0 > 0 && (!scoped || mi.index_bound);
  if (r.level >= 3) r.half = r.phi0 > Rat(1, 2) && (!scoped || mi.m_star == 1);
  if (r.level >= 4) r.agreement = r.phi0 > Rat(3, 4) && (!scoped || mi.agreement_measure >= 4 * r.phi0 - 3);
  return r;
}

}  // namespace erglab
