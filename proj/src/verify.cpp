#include "erglab/verify.hpp"

#include "erglab/coinduce.hpp"
#include "erglab/ergcore.hpp"
#include "erglab/errors.hpp"
#include "erglab/generate.hpp"
#include "erglab/gram.hpp"
#include "erglab/kazhdan.hpp"
#include "erglab/percolation.hpp"
#include "erglab/subrel.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <thread>

namespace erglab {

namespace {

struct Outcome {
  bool checked = true;
  bool pass = true;
  std::string message;
  std::map<std::string, std::int64_t> counters;

  void fail(std::string why) {
    if (pass) message = std::move(why);
    pass = false;
  }
};

using Check = std::function<void(std::size_t index, Rng& rng, const SuiteOptions& opt, Outcome& out)>;

std::size_t size_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(uniform_below(rng, hi - lo + 1));
}

std::vector<Point> random_subset(std::size_t m, Rng& rng) {
  std::vector<Point> out;
  for (Point x = 0; x < m; ++x)
    if (uniform_below(rng, 2)) out.push_back(x);
  return out;
}

// ---------------------------------------------------------------- suites

void check_definiteness(std::size_t, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  std::size_t m = size_between(rng, 2, std::max<std::size_t>(2, opt.max_size));
  EqRel e = random_partition(m, rng);
  std::size_t k = size_between(rng, 1, 6);
  std::vector<Perm> s;
  for (std::size_t i = 0; i < k; ++i) s.push_back(random_perm(m, rng));
  std::vector<std::vector<Point>> sets;
  for (std::size_t i = size_between(rng, 1, 4); i > 0; --i) sets.push_back(random_subset(m, rng));

  RatMatrix psi_m(k, std::vector<Rat>(k)), du(k, std::vector<Rat>(k)), wm(k, std::vector<Rat>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      psi_m[i][j] = psi(e, s[i], s[j]);
      du[i][j] = delta_u(s[i], s[j]);
      wm[i][j] = weak_metric(s[i], s[j], sets);
    }
  if (!gram_check(psi_m, Definiteness::positive).pass) out.fail("psi Gram matrix not positive semidefinite");
  if (!gram_check(du, Definiteness::negative).pass) out.fail("delta_u matrix not conditionally negative");
  if (!gram_check(wm, Definiteness::negative).pass) out.fail("weak-metric matrix not conditionally negative");
  out.counters["matrices"] += 3;
}

void check_prop11(std::size_t, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  std::size_t m = size_between(rng, 1, opt.max_size);
  EqRel e = random_partition(m, rng);
  Perm s = random_perm(m, rng);
  std::size_t best = m;
  for_each_full_group(e, opt.caps.full_group, [&](const Perm& t) {
    std::size_t diff = 0;
    for (Point x = 0; x < m; ++x) diff += s(x) != t(x);
    best = std::min(best, diff);
  });
  Rat th = theta(e, s);
  if (th != ratio(best, m)) out.fail("theta " + to_string(th) + " != brute minimum " + to_string(ratio(best, m)));
  Perm t = project_to_full_group(e, s);
  if (!e.contains(t)) out.fail("projection leaves the full group");
  if (delta_u(s, t) != th) out.fail("projection does not attain theta");
  out.counters["full_group_elements"] += static_cast<std::int64_t>(full_group_order(e));
}

void check_tau_character(std::size_t, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  PairInstance p = random_pair(size_between(rng, 1, opt.max_size), rng);
  Perm s = random_full_group_element(p.f, rng), t = random_full_group_element(p.f, rng);
  for (auto conv : {ChoiceSystem::Convention::min_forward, ChoiceSystem::Convention::max_backward}) {
    ChoiceSystem cs(p.e, p.f, conv);
    if (tau_character(cs, s) != phi(p.e, s)) out.fail("<tau(S) xi0, xi0> != phi_E(S)");
    TauCarrier carrier(cs);
    if (!(tau_representation(cs, carrier, s * t) ==
          tau_representation(cs, carrier, s) * tau_representation(cs, carrier, t)))
      out.fail("tau(ST) != tau(S) tau(T)");
  }
  out.counters["pairs"] += 1;
}

void check_cocycle(std::size_t, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  PairInstance p = random_pair(size_between(rng, 1, opt.max_size), rng);
  GroupClosure g = p.action.closure(opt.caps.closure);
  std::size_t m = p.e.size();
  // All pairs when small; otherwise generators against the whole closure,
  // which implies the identity for all pairs by induction on word length.
  std::vector<std::size_t> left;
  if (g.order() <= 120) {
    for (std::size_t id = 0; id < g.order(); ++id) left.push_back(id);
  } else {
    for (std::size_t i = 0; i < g.generator_count(); ++i) left.push_back(g.generator_id(i));
  }
  for (auto conv : {ChoiceSystem::Convention::min_forward, ChoiceSystem::Convention::max_backward}) {
    ChoiceSystem cs(p.e, p.f, conv);
    std::vector<Perm> table;
    table.reserve(g.order() * m);
    for (std::size_t id = 0; id < g.order(); ++id)
      for (Point x = 0; x < m; ++x) table.push_back(sigma(cs, g.element(id), x));
    for (std::size_t a : left)
      for (std::size_t b = 0; b < g.order(); ++b)
        for (Point x = 0; x < m; ++x) {
          Point tx = g.element(b)(x);
          if (!(table[g.multiply(a, b) * m + x] == table[a * m + tx] * table[b * m + x]))
            out.fail("sigma(ST,x) != sigma(S,Tx) sigma(T,x)");
          out.counters["sigma_checks"] += 1;
        }
  }
  CoinduceInstance c = random_coinduce(rng);
  CoinducedSystem sys(c.a0, c.b0, c.target, opt.caps);
  CoinduceValidation v = validate(sys);
  if (!v.rho_cocycle) out.fail("rho(g1 g2, x) != rho(g1, g2 x) rho(g2, x)");
  out.counters["rho_checks"] += static_cast<std::int64_t>(v.cocycle_pairs);
}

void check_thm25(std::size_t, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    PairInstance p = random_pair(size_between(rng, 1, opt.max_size), rng);
    MinIndexReport r = min_index_set(p.e, p.f, p.s, p.sp, p.action, opt.caps);
    if (r.vacuous) continue;
    if (!r.equal_classes) {
      out.counters["unequal_classes_skipped"] += 1;
      if (!r.bounds_hold()) out.counters["unequal_classes_bound_violations"] += 1;
      continue;
    }
    if (!r.index_bound) out.fail("m* > floor(1/c)");
    if (!r.half_bound) out.fail("c > 1/2 but m* != 1");
    if (!r.agreement_bound) out.fail("c > 3/4 but mu(A_1) < 4c - 3");
    if (r.c > Rat(1, 2)) out.counters["c_above_half"] += 1;
    if (r.c > Rat(3, 4)) out.counters["c_above_three_quarters"] += 1;
    if (r.m_star > 1) out.counters["m_star_above_one"] += 1;
    return;
  }
  out.checked = false;
}

void check_thm27(std::size_t, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  std::size_t m = size_between(rng, 1, opt.max_size);
  EqRel e = random_partition(m, rng);
  std::vector<std::pair<std::string, Perm>> gens;
  for (std::size_t i = size_between(rng, 1, 2); i > 0; --i) {
    Perm g = uniform_below(rng, 2) ? random_perm(m, rng) : random_full_group_element(e, rng);
    if (m > 1 && uniform_below(rng, 2)) {
      Point a = static_cast<Point>(uniform_below(rng, m)), b = static_cast<Point>(uniform_below(rng, m));
      std::vector<Point> img(g.images().begin(), g.images().end());
      std::swap(img[a], img[b]);
      g = Perm(std::move(img));
    }
    gens.emplace_back("g" + std::to_string(gens.size()), std::move(g));
  }
  FinAction action = FinAction::symmetric(m, std::move(gens));
  Thm27Report r = check_thm27(e, action, opt.caps, rng);
  if (!r.exhaustive) {
    out.checked = false;
    return;
  }
  if (!r.pass) out.fail("phi_E(S) < 1 - 4 eps for S = " + to_string(r.minimizer));
  if (r.bound > 0) out.counters["nontrivial_bound"] += 1;
  out.counters["full_group_elements"] += static_cast<std::int64_t>(r.checked);
}

void check_coinduce(std::size_t, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  CoinduceInstance c = random_coinduce(rng);
  CoinducedSystem sys(c.a0, c.b0, c.target, opt.caps);
  CoinduceValidation v = validate(sys);
  if (!v.ok()) out.fail("co-induced action validation failed");
  const GroupClosure& g = sys.gamma();
  for (const auto& b : invariant_subsets(sys))
    for (std::size_t id = 0; id < g.order(); ++id) {
      if (!check_thm33_identity(sys, b, id).holds) out.fail("measure identity fails");
      out.counters["thm33_checks"] += 1;
    }
  EqRel orbits = sys.target_orbits();
  const auto& cls = orbits.classes();
  for (std::size_t i = 0; i + 1 < cls.size(); ++i) {
    std::vector<Rat> f(sys.target_size(), Rat(0));
    for (Point y : cls[i]) f[y] = Rat(static_cast<long>(cls[i + 1].size()));
    for (Point y : cls[i + 1]) f[y] = Rat(-static_cast<long>(cls[i].size()));
    for (std::size_t k = 0; k < sys.index(); ++k)
      for (std::size_t n = 0; n < sys.index(); ++n)
        for (std::size_t id = 0; id < g.order(); ++id) {
          if (!check_prop34_pairing(sys, f, k, n, id).holds) out.fail("pairing identity fails");
          out.counters["prop34_checks"] += 1;
        }
  }
  for (std::size_t id = 0; id < g.order(); ++id)
    for (std::size_t k = 0; k < sys.index(); ++k) {
      Rat total = 0;
      for (std::size_t n = 0; n < sys.index(); ++n) total += phi_kn(sys.choices(), g.element(id), k, n);
      if (total != 1) out.fail("phi^{k,.} rows do not sum to 1");
    }
  CoinducedSystem alt(c.a0, c.b0, c.target, opt.caps, ChoiceSystem::Convention::max_backward);
  if (cycle_fingerprint(sys) != cycle_fingerprint(alt)) out.fail("choice conventions give non-conjugate actions");
}

void check_phi_correspondence(std::size_t index, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  std::optional<FinAction> action;
  std::vector<std::optional<std::vector<Point>>> a_sets;
  if (index == 0) {
    Instance inst = parse_instance(cyclic_document(6));
    action.emplace(inst.action(inst.percolation->action));
    for (const auto& gen : action->generators()) {
      auto it = inst.percolation->a_sets.find(gen.label);
      a_sets.push_back(it == inst.percolation->a_sets.end() ? std::nullopt
                                                           : std::optional<std::vector<Point>>(it->second));
    }
  } else {
    std::size_t m = size_between(rng, 2, std::max<std::size_t>(2, opt.max_size));
    for (int attempt = 0; attempt < 64 && !action; ++attempt) {
      std::vector<std::pair<std::string, Perm>> gens;
      for (std::size_t i = size_between(rng, 1, 2); i > 0; --i)
        gens.emplace_back("g" + std::to_string(gens.size()), random_perm(m, rng));
      FinAction cand = FinAction::symmetric(m, std::move(gens));
      try {
        cand.closure(720);
        action.emplace(std::move(cand));
      } catch (const CapExceeded&) {
      }
    }
    if (!action) {
      out.checked = false;
      return;
    }
    auto gens = action->generators();
    a_sets.assign(gens.size(), std::nullopt);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (gens[i].inverse < i) continue;
      std::vector<Point> a = random_subset(m, rng);
      if (gens[i].inverse == i) {
        std::vector<bool> in(m, false);
        for (Point x : a) in[x] = in[gens[i].perm(x)] = true;
        a.clear();
        for (Point x = 0; x < m; ++x)
          if (in[x]) a.push_back(x);
      }
      a_sets[i] = std::move(a);
    }
  }
  PhiReport r = action_to_percolation(*action, a_sets, opt.caps);
  if (!r.equivariant) out.fail("Phi is not equivariant");
  if (!r.identity_holds) out.fail(r.free_action ? "phi_E(gamma) != P(1 <-> gamma)" : "P(1 <-> gamma) > phi_E(gamma)");
  out.counters[r.free_action ? "free" : "non_free"] += 1;
}

void check_length(std::size_t index, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  static const auto f2 = make_free(2);
  static const auto z2 = make_zd(2);
  const auto& model = index % 2 == 0 ? f2 : z2;
  auto gens = model->standard_generators();
  auto word = [&] {
    Element g = model->identity();
    for (std::size_t i = size_between(rng, 0, 12); i > 0; --i)
      g = model->multiply(g, gens[uniform_below(rng, gens.size())]);
    return g;
  };
  Element g = word(), h = word();
  LengthSystem ls(model, gens, opt.caps);
  std::size_t lg = ls.length(g), lh = ls.length(h);
  if (lg != ls.length(model->inverse(g))) out.fail("|g| != |g^-1| for g = " + model->format(g));
  if (ls.length(model->multiply(g, h)) > lg + lh) out.fail("|gh| > |g| + |h|");
  out.counters[index % 2 == 0 ? "F2" : "Z2"] += 1;
}

GroupClosure small_group(Rng& rng, std::size_t& degree_out) {
  std::size_t pick = uniform_below(rng, 3);
  std::size_t n = pick == 0 ? size_between(rng, 2, 8) : pick == 1 ? size_between(rng, 3, 5) : 4;
  std::vector<std::pair<std::string, Perm>> gens;
  std::vector<Point> rot(n), ref(n);
  for (std::size_t i = 0; i < n; ++i) {
    rot[i] = static_cast<Point>((i + 1) % n);
    ref[i] = static_cast<Point>((n - i) % n);
  }
  if (pick == 2) {
    gens.emplace_back("a", Perm::from_cycles(4, {{0, 1}, {2, 3}}));
    gens.emplace_back("b", Perm::from_cycles(4, {{0, 2}, {1, 3}}));
  } else {
    gens.emplace_back("r", Perm(rot));
    if (pick == 1) gens.emplace_back("s", Perm(ref));
  }
  degree_out = n;
  return FinAction::symmetric(n, std::move(gens)).closure(1 << 12);
}

void check_kazhdan_forms(std::size_t, Rng& rng, const SuiteOptions& opt, Outcome& out) {
  const double root2 = std::sqrt(2.0);
  std::size_t k = size_between(rng, 1, 6), n = size_between(rng, 1, 6);
  double eps = root2 * (static_cast<double>(uniform_below(rng, 1000)) + 1) / 1000.0;
  double a1 = amplify(k, eps, 1);
  if (std::abs(a1 - eps / std::sqrt(double(k))) > 1e-12) out.fail("amplify(k, eps, 1) != eps / sqrt(k)");
  double an = amplify(k, eps, n), an1 = amplify(k, eps, n + 1);
  if (an1 < an - 1e-15 || an1 > root2 + 1e-15) out.fail("amplify is not monotone and bounded by sqrt 2");
  auto th = cor54_thresholds(eps);
  if (!(th[0] < th[1] && th[1] < th[2] && th[2] < th[3])) out.fail("threshold levels out of order");

  Rat e2(static_cast<long>(uniform_below(rng, 2001)), 1000);
  for (auto s : {BoundSelector::pu, BoundSelector::cost_a, BoundSelector::cost_b, BoundSelector::cost_c}) {
    BoundValue x = bounds_exact(s, n, e2), d = bounds(s, n, std::sqrt(to_double(e2)));
    if (std::abs(x.value - d.value) > 1e-9 * std::max(1.0, std::abs(x.value))) out.fail("bounds: float and exact disagree");
    Rat nn(static_cast<long>(n));
    if (s == BoundSelector::cost_c && e2 > 0 && !(*x.exact < nn)) out.fail("cost_c bound not below n");
    // cost_a improves on n exactly when eps^2 > 2(n-1) / (n(2n-1)).
    if (s == BoundSelector::cost_a && (*x.exact < nn) != (e2 * nn * (2 * nn - 1) > 2 * (nn - 1)))
      out.fail("cost_a bound and its improvement threshold disagree");
  }

  std::size_t degree = 0;
  GroupClosure g = small_group(rng, degree);
  std::vector<std::size_t> q{GroupClosure::identity()};
  for (std::size_t i = 0; i < g.generator_count(); ++i) q.push_back(g.generator_id(i));
  for (const FiniteRep& rep : {FiniteRep::regular(g), FiniteRep::permutation(g)}) {
    AveragingNorm an_rep = averaging_norm(rep, q);
    auto d = static_cast<Eigen::Index>(rep.dimension());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t id : q) t += rep.dense(id);
    t /= double(q.size());
    const Eigen::MatrixXd& inv = rep.invariant_basis();
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(d, d) - inv * inv.transpose();
    double oracle = Eigen::JacobiSVD<Eigen::MatrixXd>(t * proj).singularValues()(0);
    if (std::abs(oracle - an_rep.norm) > 1e-9)
      out.fail("averaging norm " + std::to_string(an_rep.norm) + " disagrees with the SVD value " + std::to_string(oracle));
  }

  CoinduceInstance c = random_coinduce(rng);
  GroupClosure delta = c.a0.closure(opt.caps.closure);
  EqRel ep = random_partition(c.a0.space_size(), rng);
  std::vector<Rat> psi_vals;
  for (const Perm& d : delta.elements()) psi_vals.push_back(phi(ep, d));
  if (!pd_transfer(psi_vals, c.a0, c.b0, opt.caps).certificate.pass) out.fail("transferred function not positive definite");

  std::optional<PairInstance> p;
  for (int attempt = 0; attempt < 64 && !p; ++attempt) {
    PairInstance cand = random_pair(size_between(rng, 2, opt.max_size), rng);
    try {
      if (cand.action.closure(720).order() > 1) p.emplace(std::move(cand));
    } catch (const CapExceeded&) {
    }
  }
  if (p) {
    GroupClosure pg = p->action.closure(720);
    std::vector<std::size_t> pq{GroupClosure::identity()};
    for (std::size_t i = 0; i < pg.generator_count(); ++i) pq.push_back(pg.generator_id(i));
    double e = averaging_norm(FiniteRep::regular(pg), pq).eps_floor;
    if (e > 0) {
      Cor54Report r = cor54_dispatch(p->e, p->action, pq, std::min(e, root2), opt.caps);
      if (!r.holds()) out.fail("threshold dispatch: a conclusion fails");
      out.counters["cor54_level_" + std::to_string(r.level)] += 1;
    }
  }
}

struct SuiteEntry {
  const char* name;
  Check check;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> suites{
      {"definiteness", check_definiteness},
      {"prop11", check_prop11},
      {"tau_character", check_tau_character},
      {"cocycle", check_cocycle},
      {"thm25", check_thm25},
      {"thm27", check_thm27},
      {"coinduce_identities", check_coinduce},
      {"phi_correspondence", check_phi_correspondence},
      {"length", check_length},
      {"kazhdan_forms", check_kazhdan_forms},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.emplace_back(s.name);
    return out;
  }();
  return names;
}

SuiteResult run_suite(std::string_view name, const SuiteOptions& options) {
  const SuiteEntry* entry = nullptr;
  for (const auto& s : registry())
    if (name == s.name) entry = &s;
  if (!entry) throw ValidationError("unknown suite '" + std::string(name) + "'");
  if (options.max_size < 1) throw ValidationError("max size must be at least 1");
  std::uint64_t suite_salt = 0;
  for (char ch : name) suite_salt = suite_salt * 131 + static_cast<unsigned char>(ch);

  std::vector<Outcome> outcomes(options.count);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < options.count; i += stride) {
      Rng rng(derive_seed(options.seed ^ suite_salt, i));
      Outcome& o = outcomes[i];
      try {
        entry->check(i, rng, options, o);
      } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
      }
    }
  };
  std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, options.count));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }

  SuiteResult r;
  r.suite = entry->name;
  r.instances = options.count;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& o = outcomes[i];
    if (o.checked) ++r.checked;
    if (o.pass) {
      if (o.checked) ++r.passed;
    } else {
      ++r.failure_count;
      if (r.failures.size() < 10) r.failures.push_back("instance " + std::to_string(i) + ": " + o.message);
    }
    for (const auto& [k, v] : o.counters) r.counters[k] += v;
  }
  return r;
}

json to_json(const SuiteResult& r) {
  json counters = json::object();
  for (const auto& [k, v] : r.counters) counters[k] = v;
  return json{{"suite", r.suite},
              {"verdict", r.ok() ? "PASS" : "FAIL"},
              {"instances", r.instances},
              {"checked", r.checked},
              {"passed", r.passed},
              {"failures", r.failure_count},
              {"failure_messages", r.failures},
              {"counters", counters}};
}

}  // namespace erglab
