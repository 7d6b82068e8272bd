#include "erglab/cli.hpp"

#include "erglab/coinduce.hpp"
#include "erglab/ergcore.hpp"
#include "erglab/errors.hpp"
#include "erglab/generate.hpp"
#include "erglab/instance.hpp"
#include "erglab/kazhdan.hpp"
#include "erglab/percolation.hpp"
#include "erglab/subrel.hpp"
#include "erglab/verify.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace erglab {

namespace {

// A check reported a violated identity; the report is still written.
struct CheckFailed {
  json report;
};

struct Common {
  std::string instance, out, format = "json";
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
};

struct Loaded {
  json doc;
  Instance inst;
  std::string hash;
};

Loaded load(const Common& c) {
  if (c.instance.empty()) throw ValidationError("--instance is required for this command");
  Loaded l;
  l.doc = read_json_file(c.instance);
  l.inst = parse_instance(l.doc);
  l.hash = instance_hash(l.doc);
  return l;
}

std::uint64_t require_seed(const Common& c) {
  if (!c.seed) throw ValidationError("--seed is required for stochastic commands");
  return *c.seed;
}

json header(const Common& c, const std::string& hash) { return report_header(c.seed.value_or(0), hash); }

std::string name_of(const GroupClosure& g, std::size_t id) { return g.name(id); }

const FinAction& pick_action(const Instance& inst, const std::string& name) {
  if (!name.empty()) return inst.action(name);
  if (inst.actions.empty()) throw ValidationError("instance defines no actions");
  return inst.actions.begin()->second;
}

// Element names as printed in reports, or generator labels.
std::vector<std::size_t> resolve_elements(const GroupClosure& g, const FinAction& action,
                                          const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    if (auto id = g.find_name(n)) out.push_back(*id);
    else if (auto gen = action.find(n)) out.push_back(g.generator_id(*gen));
    else throw ValidationError("no group element named '" + n + "'");
  }
  return out;
}

json extraction_json(const Extraction& x) {
  return json{{"set", points_json(x.set)}, {"m", x.m}, {"measure", to_json(x.measure)}};
}

// ---------------------------------------------------------------- commands

json cmd_phi(const Common& c, const std::string& relation, const std::string& action_name, const Caps& caps) {
  Loaded l = load(c);
  const EqRel& e = l.inst.relation(relation);
  json values = json::object(), theta_v = json::object();
  if (!l.inst.actions.empty() || !action_name.empty()) {
    GroupClosure g = pick_action(l.inst, action_name).closure(caps.closure);
    for (std::size_t id = 0; id < g.order(); ++id) {
      values[name_of(g, id)] = to_json(phi(e, g.element(id)));
      theta_v[name_of(g, id)] = to_json(theta(e, g.element(id)));
    }
  } else {
    for (const auto& [name, p] : l.inst.perms) {
      values[name] = to_json(phi(e, p));
      theta_v[name] = to_json(theta(e, p));
    }
  }
  json r = header(c, l.hash);
  r["relation"] = relation;
  r["phi"] = values;
  r["theta"] = theta_v;
  return r;
}

struct SubrelArgs {
  std::string e = "E", f, action, s, sp;
  std::size_t n = 1, samples = 4096;
};

json cmd_subrel(const Common& c, const SubrelArgs& a, const Caps& caps) {
  Loaded l = load(c);
  const FinAction& action = pick_action(l.inst, a.action);
  const EqRel& e = l.inst.relation(a.e);
  EqRel f = a.f.empty() ? orbit_relation(action) : l.inst.relation(a.f);
  std::size_t m = l.inst.size;
  Perm s = a.s.empty() ? Perm::identity(m) : l.inst.perm(a.s);
  Perm sp = a.sp.empty() ? Perm::identity(m) : l.inst.perm(a.sp);
  GroupClosure g = action.closure(caps.closure);
  bool ok = true;

  MinIndexReport mi = min_index_set(e, f, s, sp, action, caps);
  ok = ok && mi.holds();
  ChoiceSystem cs(e, f);
  Rng rng(c.seed.value_or(0));
  InvariantAnalysis ia = invariant_analysis(cs, action, caps, rng);
  ok = ok && ia.full_group_invariant;
  Thm27Report t27 = check_thm27(e, action, caps, rng, a.samples);
  ok = ok && t27.pass;

  json r = header(c, l.hash);
  r["c"] = to_json(mi.c);
  r["m_star"] = mi.m_star;
  r["A"] = points_json(mi.set);
  r["verdict"] = mi.vacuous ? "VACUOUS" : (!mi.equal_classes ? "UNEQUAL_CLASSES" : (mi.holds() ? "PASS" : "FAIL"));
  r["equal_classes"] = mi.equal_classes;
  r["witness"] = {{"argmin", name_of(g, mi.argmin)}, {"index_per_class", mi.class_index}};
  r["bounds"] = {{"index_bound", mi.index_bound}, {"half_bound", mi.half_bound}, {"agreement_bound", mi.agreement_bound}};
  r["agreement_set"] = points_json(mi.agreement_set);
  r["agreement_measure"] = to_json(mi.agreement_measure);

  json ex = json::array();
  for (const auto& x : ia.extractions) ex.push_back(extraction_json(x));
  r["invariants"] = {{"components", ia.num_components},
                     {"extractions", ex},
                     {"full_group_invariant", ia.full_group_invariant},
                     {"full_group_checked", ia.full_group_checked},
                     {"exhaustive", ia.exhaustive},
                     {"average_pairing", to_json(ia.average_pairing)},
                     {"min_phi", to_json(ia.min_phi)},
                     {"average_extraction", extraction_json(ia.average_extraction)}};
  r["thm27"] = {{"epsilon", to_json(t27.epsilon)}, {"bound", to_json(t27.bound)}, {"min_phi", to_json(t27.min_phi)},
                {"margin", to_json(t27.margin)},   {"checked", t27.checked},      {"exhaustive", t27.exhaustive},
                {"verdict", t27.pass ? "PASS" : "FAIL"}};

  SeparatingResult sep = separating_maps(e, f, a.n);
  json sj = {{"n", a.n}};
  switch (sep.kind) {
    case SeparatingResult::Kind::set:
      sj["kind"] = "set";
      sj["set"] = points_json(sep.set);
      break;
    case SeparatingResult::Kind::maps: {
      sj["kind"] = "maps";
      json maps = json::array();
      for (const auto& t : sep.maps) maps.push_back(to_json(t));
      sj["maps"] = maps;
      break;
    }
    case SeparatingResult::Kind::infeasible:
      sj["kind"] = "infeasible";
      sj["witness_class"] = sep.witness_class;
      sj["reason"] = sep.reason;
      break;
  }
  r["separating"] = sj;
  try {
    EvadingResult ev = evading_map(e, f);
    r["evading"] = ev.map ? json{{"map", to_json(*ev.map)}} : json{{"witness_class", ev.witness_class}, {"reason", ev.reason}};
  } catch (const ValidationError& err) {
    r["evading"] = {{"reason", err.what()}};
  }
  Rat link_measure = 0;
  for (const auto& p : merge_links(e, f)) link_measure += p.domain_measure();
  r["cost"] = {{"E", to_json(cost(e))}, {"F", to_json(cost(f))}, {"links_measure", to_json(link_measure)}};
  if (!ok) throw CheckFailed{r};
  return r;
}

json cmd_coinduce(const Common& c, const Caps& caps) {
  Loaded l = load(c);
  if (!l.inst.coinduce) throw ValidationError("instance has no coinduce block");
  const CoinduceBlock& blk = *l.inst.coinduce;
  const FinAction& a0 = l.inst.action(blk.a0);
  if (blk.assert_free && !a0.is_free(caps.closure)) throw ValidationError("a0 is asserted free but is not");
  CoinducedSystem sys(a0, l.inst.action(blk.b0), blk.target, caps);
  std::vector<std::string> checks = blk.checks;
  if (checks.empty()) checks = {"cocycle", "action", "thm33", "prop34"};
  const GroupClosure& g = sys.gamma();
  bool ok = true;

  json r = header(c, l.hash);
  r["index"] = sys.index();
  r["delta_order"] = sys.delta().order();
  r["gamma_order"] = g.order();
  r["product_size"] = sys.product_size();
  json results = json::object();
  std::optional<CoinduceValidation> v;
  auto validation = [&]() -> const CoinduceValidation& {
    if (!v) v = validate(sys);
    return *v;
  };
  for (const auto& check : checks) {
    if (check == "cocycle") {
      const auto& x = validation();
      results["cocycle"] = {{"holds", x.rho_cocycle}, {"pairs", x.cocycle_pairs}};
      ok = ok && x.rho_cocycle;
    } else if (check == "action") {
      const auto& x = validation();
      results["action"] = {{"holds", x.ok()},          {"materialized", x.materialized}, {"b_action", x.b_action},
                           {"b_free", x.b_free},       {"a_prime_free", x.a_prime_free}, {"factors", x.factors},
                           {"orbit_inclusion", x.orbit_inclusion}};
      ok = ok && x.ok();
    } else if (check == "thm33") {
      json rows = json::array();
      bool all = true;
      for (const auto& b : invariant_subsets(sys))
        for (std::size_t id = 0; id < g.order(); ++id) {
          IdentityCheck ic = check_thm33_identity(sys, b, id);
          all = all && ic.holds;
          rows.push_back({{"B", points_json(b)}, {"gamma", g.name(id)}, {"lhs", to_json(ic.lhs)},
                          {"rhs", to_json(ic.rhs)}, {"materialized", ic.materialized}});
        }
      results["thm33"] = {{"holds", all}, {"cases", rows}};
      ok = ok && all;
    } else if (check == "prop34") {
      json rows = json::array();
      bool all = true;
      const auto& cls = sys.target_orbits().classes();
      for (std::size_t i = 0; i + 1 < cls.size(); ++i) {
        std::vector<Rat> f(sys.target_size(), Rat(0));
        for (Point y : cls[i]) f[y] = Rat(static_cast<long>(cls[i + 1].size()));
        for (Point y : cls[i + 1]) f[y] = Rat(-static_cast<long>(cls[i].size()));
        json fj = json::array();
        for (const auto& v2 : f) fj.push_back(to_json(v2));
        for (std::size_t k = 0; k < sys.index(); ++k)
          for (std::size_t n = 0; n < sys.index(); ++n)
            for (std::size_t id = 0; id < g.order(); ++id) {
              IdentityCheck ic = check_prop34_pairing(sys, f, k, n, id);
              all = all && ic.holds;
              rows.push_back({{"f", fj}, {"k", k}, {"n", n}, {"gamma", g.name(id)},
                              {"lhs", to_json(ic.lhs)}, {"rhs", to_json(ic.rhs)}});
            }
      }
      results["prop34"] = {{"holds", all}, {"cases", rows}};
      ok = ok && all;
    } else {
      throw ValidationError("unknown coinduce check '" + check + "'");
    }
  }
  json phikn = json::object();
  for (std::size_t id = 0; id < g.order(); ++id) {
    json rows = json::array();
    for (std::size_t k = 0; k < sys.index(); ++k) {
      json row = json::array();
      for (std::size_t n = 0; n < sys.index(); ++n) row.push_back(to_json(phi_kn(sys.choices(), g.element(id), k, n)));
      rows.push_back(row);
    }
    phikn[g.name(id)] = rows;
  }
  r["phi_kn"] = phikn;
  r["checks"] = results;
  r["verdict"] = ok ? "PASS" : "FAIL";
  if (!ok) throw CheckFailed{r};
  return r;
}

struct PercArgs {
  std::string model = "Z2";
  std::size_t radius = 8, trials = 1;
  double p = 0.5;
  std::vector<std::string> targets;
};

std::string config_hash(const json& config) { return instance_hash(config); }

json cmd_percolate(const Common& c, const PercArgs& a, const Caps& caps) {
  if (!c.instance.empty()) {
    Loaded l = load(c);
    if (!l.inst.percolation) throw ValidationError("instance has no percolation block");
    const FinAction& action = l.inst.action(l.inst.percolation->action);
    std::vector<std::optional<std::vector<Point>>> sets;
    for (const auto& gen : action.generators()) {
      auto it = l.inst.percolation->a_sets.find(gen.label);
      sets.push_back(it == l.inst.percolation->a_sets.end() ? std::nullopt
                                                            : std::optional<std::vector<Point>>(it->second));
    }
    PhiReport pr = action_to_percolation(action, sets, caps);
    GroupClosure g = action.closure(caps.closure);
    json phi_e = json::object(), conn = json::object(), aj = json::object();
    for (std::size_t id = 0; id < g.order(); ++id) {
      phi_e[g.name(id)] = to_json(pr.phi_e[id]);
      conn[g.name(id)] = to_json(pr.connection[id]);
    }
    for (std::size_t i = 0; i < action.generators().size(); ++i) aj[action.generators()[i].label] = points_json(pr.a_sets[i]);
    json r = header(c, l.hash);
    r["group_order"] = pr.group_order;
    r["edges"] = pr.edges;
    r["free_action"] = pr.free_action;
    r["equivariant"] = pr.equivariant;
    r["identity"] = pr.free_action ? "equality" : "inequality";
    r["identity_holds"] = pr.identity_holds;
    r["a_sets"] = aj;
    r["phi_E"] = phi_e;
    r["connection"] = conn;
    if (!pr.equivariant || !pr.identity_holds) throw CheckFailed{r};
    return r;
  }
  std::uint64_t seed = require_seed(c);
  if (a.trials < 1) throw ValidationError("--trials must be positive");
  auto model = model_from_name(a.model);
  CayleyBall ball = cayley_ball(model, model->standard_generators(), a.radius, caps);
  std::vector<Element> targets;
  for (const auto& t : a.targets) targets.push_back(model->parse(t));
  std::vector<PercConfig> configs;
  for (std::size_t t = 0; t < a.trials; ++t) configs.push_back(percolate(ball, a.p, seed, t));
  ClusterStats st = cluster_stats(ball, configs, targets);
  json cfg = {{"command", "percolate"}, {"model", a.model}, {"radius", a.radius}, {"p", a.p}, {"trials", a.trials},
              {"targets", a.targets}};
  json r = header(c, config_hash(cfg));
  r["model"] = model->name();
  r["radius"] = a.radius;
  r["p"] = a.p;
  r["trials"] = a.trials;
  r["vertex_count"] = ball.vertices.size();
  r["edge_count"] = ball.edges.size();
  r["theta_hat"] = st.theta_hat;
  r["theta_se"] = st.theta_se;
  r["boundary_clusters_mean"] = st.boundary_clusters_mean;
  json tau = json::array();
  for (std::size_t i = 0; i < targets.size(); ++i)
    tau.push_back({{"target", a.targets[i]}, {"tau_hat", st.tau_hat[i]}, {"tau_se", st.tau_se[i]}});
  r["tau"] = tau;
  if (a.trials == 1) {
    std::size_t open = 0;
    for (auto o : configs[0].open) open += o;
    r["open_edges"] = open;
  }
  return r;
}

struct SweepArgs {
  std::string model = "Z2";
  std::size_t radius = 16, trials = 100, steps = 41;
  double pmin = 0.3, pmax = 0.7;
  std::vector<double> grid;
  std::vector<std::string> targets;
};

std::vector<double> sweep_grid(const SweepArgs& a) {
  if (!a.grid.empty()) return a.grid;
  if (a.steps < 2 || !(a.pmin < a.pmax) || a.pmin < 0 || a.pmax > 1) throw ValidationError("need 0 <= pmin < pmax <= 1 and steps >= 2");
  std::vector<double> g;
  // Rounded to 12 decimals so that 0.21 prints as 0.21.
  for (std::size_t i = 0; i < a.steps; ++i)
    g.push_back(std::round((a.pmin + (a.pmax - a.pmin) * double(i) / double(a.steps - 1)) * 1e12) / 1e12);
  return g;
}

std::string csv_double(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

std::string cmd_sweep(const Common& c, const SweepArgs& a, const Caps& caps) {
  std::uint64_t seed = require_seed(c);
  auto model = model_from_name(a.model);
  CayleyBall ball = cayley_ball(model, model->standard_generators(), a.radius, caps);
  std::vector<Element> targets;
  for (const auto& t : a.targets) targets.push_back(model->parse(t));
  std::vector<double> grid = sweep_grid(a);
  SweepCurve curve = sweep(ball, grid, a.trials, seed, targets, c.workers);

  if (c.format == "csv") {
    std::ostringstream s;
    s << "p,trials,theta_hat,theta_se,boundary_clusters_mean";
    for (const auto& t : a.targets) s << ",tau_hat:" << t;
    s << "\n";
    for (const auto& pt : curve.points) {
      s << csv_double(pt.p) << "," << pt.trials << "," << csv_double(pt.theta_hat()) << "," << csv_double(pt.theta_se())
        << "," << csv_double(pt.boundary_clusters_mean());
      for (std::size_t i = 0; i < targets.size(); ++i) s << "," << csv_double(pt.tau_hat(i));
      s << "\n";
    }
    return s.str();
  }
  json cfg = {{"command", "sweep"}, {"model", a.model}, {"radius", a.radius}, {"trials", a.trials},
              {"grid", grid},       {"targets", a.targets}};
  json r = header(c, config_hash(cfg));
  r["model"] = model->name();
  r["radius"] = a.radius;
  r["vertex_count"] = ball.vertices.size();
  r["edge_count"] = ball.edges.size();
  r["trials"] = a.trials;
  json pts = json::array();
  for (const auto& pt : curve.points) {
    json row = {{"p", pt.p},
                {"theta_hat", pt.theta_hat()},
                {"theta_se", pt.theta_se()},
                {"boundary_clusters_mean", pt.boundary_clusters_mean()}};
    json tau = json::object();
    for (std::size_t i = 0; i < targets.size(); ++i) tau[a.targets[i]] = pt.tau_hat(i);
    row["tau_hat"] = tau;
    pts.push_back(row);
  }
  r["points"] = pts;
  r["monotone"] = curve.monotone;
  auto cross = crossing(curve, 0.5);
  r["crossing"] = cross ? json(*cross) : json(nullptr);
  r["inflection"] = inflection(curve, 4);
  return r.dump(2) + "\n";
}

json cmd_ball(const Common& c, const std::string& model_name, std::size_t radius, const Caps& caps) {
  auto model = model_from_name(model_name);
  CayleyBall ball = cayley_ball(model, model->standard_generators(), radius, caps);
  json gens = json::array();
  for (const auto& g : ball.generators) gens.push_back(model->format(g));
  json cfg = {{"command", "ball"}, {"model", model_name}, {"radius", radius}};
  json r = header(c, config_hash(cfg));
  r["model"] = model->name();
  r["generators"] = gens;
  r["radius"] = radius;
  r["vertex_count"] = ball.vertices.size();
  r["edge_count"] = ball.edges.size();
  r["boundary_count"] = ball.boundary.size();
  return r;
}

struct KazArgs {
  std::size_t k = 1, n = 1;
  double eps = 0.1;
  std::string selector, eps2, rep, kind = "permutation", relation = "E";
  std::vector<std::string> q;
};

json cmd_amplify(const Common& c, const KazArgs& a) {
  json cfg = {{"command", "kazhdan amplify"}, {"k", a.k}, {"eps", a.eps}, {"n", a.n}};
  json r = header(c, config_hash(cfg));
  r["k"] = a.k;
  r["eps"] = a.eps;
  r["n"] = a.n;
  r["value"] = amplify(a.k, a.eps, a.n);
  return r;
}

json cmd_bounds(const Common& c, const KazArgs& a) {
  BoundSelector s = parse_selector(a.selector);
  json cfg = {{"command", "kazhdan bounds"}, {"selector", a.selector}, {"n", a.n}, {"eps", a.eps}, {"eps2", a.eps2}};
  json r = header(c, config_hash(cfg));
  r["selector"] = to_string(s);
  r["n"] = a.n;
  BoundValue b;
  if (!a.eps2.empty()) {
    Rat e2 = parse_rational(a.eps2);
    b = bounds_exact(s, a.n, e2);
    r["eps2"] = to_json(e2);
    r["exact"] = to_json(*b.exact);
  } else {
    b = bounds(s, a.n, a.eps);
    r["eps"] = a.eps;
  }
  r["value"] = b.value;
  if (b.has_band) r["band"] = {b.band_lo, b.band_hi};
  return r;
}

json cmd_avgnorm(const Common& c, const KazArgs& a, const Caps& caps) {
  Loaded l = load(c);
  const FinAction& action = pick_action(l.inst, a.rep);
  GroupClosure g = action.closure(caps.closure);
  std::vector<std::size_t> q{GroupClosure::identity()};
  for (std::size_t id : resolve_elements(g, action, a.q))
    if (std::find(q.begin(), q.end(), id) == q.end()) q.push_back(id);
  FiniteRep rep = a.kind == "regular"       ? FiniteRep::regular(g)
                  : a.kind == "permutation" ? FiniteRep::permutation(g)
                                            : throw ValidationError("--kind must be permutation or regular");
  AveragingNorm an = averaging_norm(rep, q);
  json qn = json::array();
  for (std::size_t id : q) qn.push_back(g.name(id));
  json r = header(c, l.hash);
  r["kind"] = a.kind;
  r["dimension"] = rep.dimension();
  r["group_order"] = g.order();
  r["q"] = qn;
  r["k"] = q.size();
  r["norm"] = an.norm;
  r["eps_cap"] = an.eps_cap;
  r["eps_floor"] = an.eps_floor;
  r["iterations"] = an.iterations;
  return r;
}

json cmd_cor54(const Common& c, const KazArgs& a, const Caps& caps) {
  Loaded l = load(c);
  const FinAction& action = pick_action(l.inst, a.rep);
  GroupClosure g = action.closure(caps.closure);
  std::vector<std::size_t> q{GroupClosure::identity()};
  for (std::size_t id : resolve_elements(g, action, a.q))
    if (std::find(q.begin(), q.end(), id) == q.end()) q.push_back(id);
  if (a.q.empty())
    for (std::size_t i = 0; i < g.generator_count(); ++i)
      if (std::find(q.begin(), q.end(), g.generator_id(i)) == q.end()) q.push_back(g.generator_id(i));
  double eps = a.eps;
  if (eps <= 0) eps = averaging_norm(FiniteRep::regular(g), q).eps_floor;
  Cor54Report cr = cor54_dispatch(l.inst.relation(a.relation), action, q, eps, caps);
  json r = header(c, l.hash);
  r["eps"] = cr.eps;
  r["min_q"] = cr.min_q;
  r["thresholds"] = cr.thresholds;
  r["level"] = cr.level;
  r["phi0"] = to_json(cr.phi0);
  r["equal_classes"] = cr.equal_classes;
  r["conclusions"] = {{"finite_index_witness", cr.finite_index_witness}, {"positive", cr.positive},
                      {"half", cr.half},                                 {"agreement", cr.agreement},
                      {"prop53", cr.prop53}};
  r["verdict"] = cr.holds() ? "PASS" : "FAIL";
  if (!cr.holds()) throw CheckFailed{r};
  return r;
}

struct VerifyArgs {
  std::string suite = "all";
  std::size_t count = 100, max_size = 8;
};

json cmd_verify(const Common& c, const VerifyArgs& a, const Caps& caps) {
  SuiteOptions opt;
  opt.count = a.count;
  opt.max_size = a.max_size;
  opt.seed = require_seed(c);
  opt.workers = c.workers;
  opt.caps = caps;
  std::vector<std::string> names;
  if (a.suite == "all") names = suite_names();
  else names.push_back(a.suite);
  json cfg = {{"command", "verify"}, {"suites", names}, {"count", a.count}, {"max_size", a.max_size}};
  json r = header(c, config_hash(cfg));
  json suites = json::array();
  bool ok = true;
  for (const auto& n : names) {
    SuiteResult sr = run_suite(n, opt);
    ok = ok && sr.ok();
    suites.push_back(to_json(sr));
  }
  r["suites"] = suites;
  r["verdict"] = ok ? "PASS" : "FAIL";
  if (!ok) throw CheckFailed{r};
  return r;
}

json cmd_generate(const Common& c, const std::string& kind, const std::vector<std::size_t>& size) {
  bool random = kind == "random_pair" || (kind == "coinduce_ready" && size.empty());
  std::uint64_t seed = random ? require_seed(c) : c.seed.value_or(0);
  json doc = generate(kind, size, seed);
  parse_instance(doc);
  return doc;
}

void write_output(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + c.out + "'");
  f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-model laboratory for measured equivalence relations", "erglab"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Common c;
  app.add_option("--instance", c.instance, "Instance JSON file");
  app.add_option("--seed", c.seed, "Seed for stochastic commands");
  app.add_option("--out", c.out, "Write the report here instead of stdout");
  app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", c.workers, "Worker threads for sweeps and verify batches")->check(CLI::Range(1, 1024));

  std::string relation = "E", action_name;
  auto* phi_cmd = app.add_subcommand("phi", "phi_E and theta_E over an action's elements");
  phi_cmd->add_option("--relation", relation, "Relation name");
  phi_cmd->add_option("--action", action_name, "Action name (default: first)");

  SubrelArgs sa;
  auto* subrel_cmd = app.add_subcommand("subrel", "Index, invariant-vector and agreement checks for E inside F");
  subrel_cmd->add_option("--E", sa.e, "Subrelation name");
  subrel_cmd->add_option("--F", sa.f, "Ambient relation (default: action orbits)");
  subrel_cmd->add_option("--action", sa.action, "Action name (default: first)");
  subrel_cmd->add_option("--S", sa.s, "Perm name for S (default: identity)");
  subrel_cmd->add_option("--Sp", sa.sp, "Perm name for S' (default: identity)");
  subrel_cmd->add_option("--n", sa.n, "Number of separating maps beyond the identity");
  subrel_cmd->add_option("--samples", sa.samples, "Sample size when [F] is too large to enumerate");

  auto* coinduce_cmd = app.add_subcommand("coinduce", "Run the co-induction checks of an instance");

  PercArgs pa;
  auto* perc_cmd = app.add_subcommand("percolate", "One percolation experiment, or the action dictionary of an instance");
  perc_cmd->add_option("--model", pa.model, "Group model, e.g. Z2, F2, Z2xF2");
  perc_cmd->add_option("--radius", pa.radius, "Ball radius");
  perc_cmd->add_option("--p", pa.p, "Edge probability")->check(CLI::Range(0.0, 1.0));
  perc_cmd->add_option("--trials", pa.trials, "Independent configurations");
  perc_cmd->add_option("--target", pa.targets, "Element for two-point connectivity (repeatable)");

  SweepArgs swa;
  auto* sweep_cmd = app.add_subcommand("sweep", "theta and tau curves over a p grid");
  sweep_cmd->add_option("--model", swa.model, "Group model");
  sweep_cmd->add_option("--radius", swa.radius, "Ball radius");
  sweep_cmd->add_option("--trials", swa.trials, "Trials per grid point");
  sweep_cmd->add_option("--pmin", swa.pmin, "Grid start");
  sweep_cmd->add_option("--pmax", swa.pmax, "Grid end");
  sweep_cmd->add_option("--steps", swa.steps, "Grid points");
  sweep_cmd->add_option("--grid", swa.grid, "Explicit comma-separated grid")->delimiter(',');
  sweep_cmd->add_option("--target", swa.targets, "Element for tau_hat columns (repeatable)");

  std::string ball_model = "Z2";
  std::size_t ball_radius = 4;
  auto* ball_cmd = app.add_subcommand("ball", "Describe a Cayley ball");
  ball_cmd->add_option("--model", ball_model, "Group model");
  ball_cmd->add_option("--radius", ball_radius, "Ball radius");

  KazArgs ka;
  auto* kaz_cmd = app.add_subcommand("kazhdan", "Kazhdan-pair calculators");
  kaz_cmd->require_subcommand(1);
  auto* amp_cmd = kaz_cmd->add_subcommand("amplify", "sqrt(2(1 - ((k - eps^2/2)/k)^n))");
  amp_cmd->add_option("--k", ka.k)->required();
  amp_cmd->add_option("--eps", ka.eps)->required();
  amp_cmd->add_option("--n", ka.n)->required();
  auto* bounds_cmd = kaz_cmd->add_subcommand("bounds", "Closed-form eps_n, p_u and cost bounds");
  bounds_cmd->add_option("--selector", ka.selector)->required();
  bounds_cmd->add_option("--n", ka.n)->required();
  bounds_cmd->add_option("--eps", ka.eps);
  bounds_cmd->add_option("--eps2", ka.eps2, "eps^2 as an exact rational (rational mode)");
  auto* avg_cmd = kaz_cmd->add_subcommand("avgnorm", "Norm of the averaging operator off the invariants");
  avg_cmd->add_option("--rep", ka.rep, "Action name");
  avg_cmd->add_option("--q", ka.q, "Element names of Q (the identity is always included)")->delimiter(',');
  avg_cmd->add_option("--kind", ka.kind, "permutation or regular");
  auto* cor_cmd = kaz_cmd->add_subcommand("cor54", "Threshold dispatch to the subrelation checkers");
  cor_cmd->add_option("--rep", ka.rep, "Action name");
  cor_cmd->add_option("--relation", ka.relation, "Relation name");
  cor_cmd->add_option("--q", ka.q, "Element names of Q (default: the generators)")->delimiter(',');
  cor_cmd->add_option("--eps", ka.eps, "Kazhdan constant (default: eps_floor of the regular rep)");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Randomized verification suites");
  verify_cmd->add_option("--suite", va.suite, "Suite name or 'all'");
  verify_cmd->add_option("--count", va.count, "Instances per suite");
  verify_cmd->add_option("--max-size", va.max_size, "Largest space size");

  std::string kind;
  std::vector<std::size_t> size;
  auto* gen_cmd = app.add_subcommand("generate", "Emit an instance document");
  gen_cmd->add_option("--kind", kind, "random_pair | cyclic | product | coinduce_ready")->required();
  gen_cmd->add_option("--size", size, "Size parameters, e.g. 10 or 4,2")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    Caps caps = Caps::from_environment();
    if (c.format == "csv" && !sweep_cmd->parsed()) throw ValidationError("--format csv is only available for sweep");
    std::string text;
    if (phi_cmd->parsed()) text = cmd_phi(c, relation, action_name, caps).dump(2) + "\n";
    else if (subrel_cmd->parsed()) text = cmd_subrel(c, sa, caps).dump(2) + "\n";
    else if (coinduce_cmd->parsed()) text = cmd_coinduce(c, caps).dump(2) + "\n";
    else if (perc_cmd->parsed()) text = cmd_percolate(c, pa, caps).dump(2) + "\n";
    else if (sweep_cmd->parsed()) text = cmd_sweep(c, swa, caps);
    else if (ball_cmd->parsed()) text = cmd_ball(c, ball_model, ball_radius, caps).dump(2) + "\n";
    else if (amp_cmd->parsed()) text = cmd_amplify(c, ka).dump(2) + "\n";
    else if (bounds_cmd->parsed()) text = cmd_bounds(c, ka).dump(2) + "\n";
    else if (avg_cmd->parsed()) text = cmd_avgnorm(c, ka, caps).dump(2) + "\n";
    else if (cor_cmd->parsed()) text = cmd_cor54(c, ka, caps).dump(2) + "\n";
    else if (verify_cmd->parsed()) text = cmd_verify(c, va, caps).dump(2) + "\n";
    else if (gen_cmd->parsed()) text = cmd_generate(c, kind, size).dump(2) + "\n";
    write_output(c, text, out);
    return kExitOk;
  } catch (const CheckFailed& f) {
    try {
      write_output(c, f.report.dump(2) + "\n", out);
    } catch (const ValidationError& e) {
      err << "error: " << e.what() << "\n";
    }
    err << "check failed: an exact identity was violated\n";
    return kExitCheckFailed;
  } catch (const IdentityViolation& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace erglab
