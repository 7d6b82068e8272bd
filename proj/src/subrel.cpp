#include "erglab/subrel.hpp"

#include "erglab/ergcore.hpp"
#include "erglab/errors.hpp"

#include <algorithm>
#include <numeric>

namespace erglab {

ChoiceSystem::ChoiceSystem(EqRel e, EqRel f, Convention convention)
    : e_(std::move(e)), f_(std::move(f)), convention_(convention) {
  if (e_.size() != f_.size()) throw ValidationError("E and F live on different spaces");
  if (!e_.refines(f_)) throw ValidationError("E is not contained in F");
  const auto& ec = e_.classes();
  order_.assign(f_.num_classes(), {});
  for (std::size_t c = 0; c < ec.size(); ++c) order_[f_.class_index(ec[c].front())].push_back(c);
  if (convention_ == Convention::max_backward) {
    for (auto& o : order_)
      std::sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return ec[a].back() < ec[b].back(); });
  }
  rank_.resize(ec.size());
  rep_.resize(ec.size());
  for (auto& o : order_)
    for (std::size_t i = 0; i < o.size(); ++i) rank_[o[i]] = i;
  for (std::size_t c = 0; c < ec.size(); ++c)
    rep_[c] = convention_ == Convention::min_forward ? ec[c].front() : ec[c].back();
}

std::optional<std::size_t> ChoiceSystem::constant_index() const {
  if (order_.empty()) return std::nullopt;
  std::size_t n = order_.front().size();
  for (const auto& o : order_)
    if (o.size() != n) return std::nullopt;
  return n;
}

std::size_t ChoiceSystem::class_at(Point x, std::size_t n) const {
  const auto& o = order_[f_.class_index(x)];
  std::size_t big_n = o.size(), j = rank_[e_.class_index(x)];
  if (n >= big_n) throw ValidationError("choice index out of range");
  return convention_ == Convention::min_forward ? o[(j + n) % big_n] : o[(j + big_n - n) % big_n];
}

Point ChoiceSystem::choice(Point x, std::size_t n) const { return n == 0 ? x : rep_[class_at(x, n)]; }

std::size_t ChoiceSystem::slot(Point x, std::size_t eclass) const {
  const auto& o = order_[f_.class_index(x)];
  std::size_t big_n = o.size(), j = rank_[e_.class_index(x)], r = rank_[eclass];
  if (o[r] != eclass) throw ValidationError("E-class outside [x]_F");
  return convention_ == Convention::min_forward ? (r + big_n - j) % big_n : (j + big_n - r) % big_n;
}

Perm index_cocycle(const ChoiceSystem& cs, Point x, Point y) {
  if (!cs.f().related(x, y)) throw ValidationError("index cocycle needs F-related points");
  std::size_t n = cs.index(x);
  std::vector<Point> img(n);
  for (std::size_t k = 0; k < n; ++k) img[k] = static_cast<Point>(cs.slot(y, cs.class_at(x, k)));
  return Perm(std::move(img));
}

Perm sigma(const ChoiceSystem& cs, const Perm& s, Point x) { return index_cocycle(cs, x, s(x)); }

std::optional<Perm> shift_map(const ChoiceSystem& cs, std::size_t n) {
  auto big_n = cs.constant_index();
  if (!big_n || n >= *big_n) return std::nullopt;
  const auto& ec = cs.e().classes();
  for (std::size_t fc = 0; fc < cs.f().num_classes(); ++fc) {
    const auto& o = cs.ordered_classes(fc);
    for (std::size_t c : o)
      if (ec[c].size() != ec[o.front()].size()) return std::nullopt;
  }
  std::vector<Point> img(cs.space_size());
  for (Point x = 0; x < img.size(); ++x) {
    auto own = cs.e().class_of(x);
    std::size_t r = static_cast<std::size_t>(std::lower_bound(own.begin(), own.end(), x) - own.begin());
    img[x] = ec[cs.class_at(x, n)][r];
  }
  return Perm(std::move(img));
}

TauCarrier::TauCarrier(const ChoiceSystem& cs) : offset_(cs.space_size()) {
  for (Point x = 0; x < cs.space_size(); ++x) {
    offset_[x] = total_;
    total_ += cs.index(x);
    owner_.resize(total_, x);
  }
}

Perm tau_representation(const ChoiceSystem& cs, const TauCarrier& carrier, const Perm& s) {
  if (s.size() != cs.space_size()) throw ValidationError("permutation on a different space");
  if (!cs.f().contains(s)) throw ValidationError("tau is defined on [F] only");
  std::vector<Point> img(carrier.size());
  for (Point x = 0; x < s.size(); ++x) {
    Perm sg = sigma(cs, s, x);
    for (std::size_t n = 0; n < sg.size(); ++n)
      img[carrier.coordinate(x, n)] = static_cast<Point>(carrier.coordinate(s(x), sg(static_cast<Point>(n))));
  }
  return Perm(std::move(img));
}

Rat tau_character(const ChoiceSystem& cs, const Perm& s) {
  TauCarrier carrier(cs);
  Perm t = tau_representation(cs, carrier, s);
  // tau(S) xi_0 is the indicator of the image of {(x,0)}; pair it with xi_0.
  std::size_t hits = 0;
  for (Point x = 0; x < cs.space_size(); ++x) {
    Point c = t(static_cast<Point>(carrier.offset(x)));
    hits += carrier.offset(carrier.point_of(c)) == c;
  }
  return ratio(hits, cs.space_size());
}

Extraction extract_index_set(const ChoiceSystem& cs, const TauCarrier& carrier, const std::vector<Rat>& xi) {
  if (xi.size() != carrier.size()) throw ValidationError("vector does not live on the carrier");
  std::size_t m_space = cs.space_size();
  std::vector<std::vector<std::size_t>> arg(m_space);
  std::optional<std::size_t> m;
  for (Point x = 0; x < m_space; ++x) {
    Rat best = 0;
    for (std::size_t n = 0; n < cs.index(x); ++n) best = std::max(best, Rat(abs(xi[carrier.coordinate(x, n)])));
    if (best == 0) continue;
    for (std::size_t n = 0; n < cs.index(x); ++n)
      if (abs(xi[carrier.coordinate(x, n)]) == best) arg[x].push_back(n);
    if (!m) m = arg[x].size();
  }
  if (!m) throw ValidationError("cannot extract from the zero vector");

  std::vector<bool> in_a(m_space, false), class_used(cs.e().num_classes(), false);
  for (Point x = 0; x < m_space; ++x) {
    if (arg[x].size() != *m) continue;
    for (std::size_t n : arg[x]) {
      std::size_t c = cs.class_at(x, n);
      if (class_used[c]) continue;
      class_used[c] = true;
      for (Point y : cs.e().classes()[c]) in_a[y] = true;
    }
  }
  Extraction ex;
  ex.m = *m;
  std::vector<std::size_t> per_f(cs.f().num_classes(), 0);
  for (std::size_t c = 0; c < class_used.size(); ++c)
    if (class_used[c]) ++per_f[cs.f().class_index(cs.e().classes()[c].front())];
  for (std::size_t k : per_f)
    if (k != 0 && k != ex.m) throw IdentityViolation("extracted set has an F-class with the wrong E-index");
  for (Point x = 0; x < m_space; ++x)
    if (in_a[x]) ex.set.push_back(x);
  if (ex.set.empty()) throw IdentityViolation("extracted set is null");
  ex.measure = ratio(ex.set.size(), m_space);
  return ex;
}

InvariantAnalysis invariant_analysis(const ChoiceSystem& cs, const FinAction& action, const Caps& caps, Rng& rng,
                                     std::size_t samples) {
  if (action.space_size() != cs.space_size() || !(orbit_relation(action) == cs.f()))
    throw ValidationError("action orbits differ from F");
  TauCarrier carrier(cs);
  InvariantAnalysis out;

  UnionFind uf(carrier.size());
  for (const auto& g : action.generators()) {
    Perm t = tau_representation(cs, carrier, g.perm);
    for (Point c = 0; c < carrier.size(); ++c) uf.unite(c, t(c));
  }
  EqRel comps = EqRel::from_union_find(uf);
  out.num_components = comps.num_classes();
  out.component.resize(carrier.size());
  for (Point c = 0; c < carrier.size(); ++c) out.component[c] = static_cast<std::uint32_t>(comps.class_index(c));

  auto check = [&](const Perm& t) {
    Perm tt = tau_representation(cs, carrier, t);
    for (Point c = 0; c < carrier.size(); ++c)
      if (out.component[tt(c)] != out.component[c]) out.full_group_invariant = false;
    ++out.full_group_checked;
  };
  constexpr std::size_t enumerate_limit = 5040;
  if (full_group_order(cs.f()) <= std::min(caps.full_group, enumerate_limit)) {
    out.exhaustive = true;
    for_each_full_group(cs.f(), caps.full_group, check);
  } else {
    for (std::size_t i = 0; i < samples; ++i) check(random_full_group_element(cs.f(), rng));
  }

  for (const auto& cls : comps.classes()) {
    std::vector<Rat> xi(carrier.size());
    for (Point c : cls) xi[c] = 1;
    out.extractions.push_back(extract_index_set(cs, carrier, xi));
  }

  GroupClosure group = action.closure(caps.closure);
  out.average.assign(carrier.size(), Rat(0));
  out.min_phi = 1;
  for (const Perm& g : group.elements()) {
    Perm t = tau_representation(cs, carrier, g);
    for (Point x = 0; x < cs.space_size(); ++x) out.average[t(static_cast<Point>(carrier.offset(x)))] += 1;
    out.min_phi = std::min(out.min_phi, phi(cs.e(), g));
  }
  for (auto& v : out.average) v /= group.order();
  out.average_pairing = 0;
  for (Point x = 0; x < cs.space_size(); ++x) out.average_pairing += out.average[carrier.offset(x)];
  out.average_pairing /= cs.space_size();
  if (out.average_pairing < out.min_phi) throw IdentityViolation("average of xi_0 pairs below min phi");
  out.average_extraction = extract_index_set(cs, carrier, out.average);
  return out;
}

namespace {

void require_in_full_group(const EqRel& f, const Perm& s, const char* name) {
  if (s.size() != f.size() || !f.contains(s)) throw ValidationError(std::string(name) + " is not in [F]");
}

}  // namespace

MinIndexReport min_index_set(const EqRel& e, const EqRel& f, const Perm& s, const Perm& sp, const FinAction& action,
                             const Caps& caps) {
  if (!e.refines(f)) throw ValidationError("E is not contained in F");
  if (!(orbit_relation(action) == f)) throw ValidationError("F is not the orbit relation of the action");
  require_in_full_group(f, s, "S");
  require_in_full_group(f, sp, "S'");

  MinIndexReport r;
  GroupClosure group = action.closure(caps.closure);
  r.c = 2;
  for (std::size_t id = 0; id < group.order(); ++id) {
    Rat v = phi(e, s * group.element(id) * sp);
    if (v < r.c) {
      r.c = v;
      r.argmin = id;
    }
  }
  r.class_index.assign(f.num_classes(), 0);
  std::vector<std::size_t> class_size(f.num_classes(), 0);
  for (const auto& c : e.classes()) {
    std::size_t fc = f.class_index(c.front());
    ++r.class_index[fc];
    if (class_size[fc] == 0) class_size[fc] = c.size();
    else if (class_size[fc] != c.size()) r.equal_classes = false;
  }
  r.m_star = *std::min_element(r.class_index.begin(), r.class_index.end());
  for (std::size_t fc = 0; fc < f.num_classes(); ++fc) {
    const auto& pts = f.classes()[fc];
    if (r.class_index[fc] == r.m_star) r.set.insert(r.set.end(), pts.begin(), pts.end());
    if (r.class_index[fc] == 1) r.agreement_set.insert(r.agreement_set.end(), pts.begin(), pts.end());
  }
  std::sort(r.set.begin(), r.set.end());
  std::sort(r.agreement_set.begin(), r.agreement_set.end());
  r.agreement_measure = ratio(r.agreement_set.size(), f.size());
  r.vacuous = r.c == 0;
  if (!r.vacuous) r.index_bound = r.c * r.m_star <= 1;
  if (r.c > Rat(1, 2)) r.half_bound = r.m_star == 1;
  if (r.c > Rat(3, 4)) r.agreement_bound = r.agreement_measure >= 4 * r.c - 3;
  return r;
}

namespace {

// Builds T_0..T_n class by class; returns the first F-class where
// (n+1) * s_max > |O| (no family exists there).
std::optional<std::size_t> build_family(const EqRel& e, const EqRel& f, std::size_t n, std::vector<Perm>& maps) {
  ChoiceSystem cs(e, f);
  std::size_t m = e.size();
  std::vector<std::vector<Point>> img(n + 1, std::vector<Point>(m));
  for (std::size_t fc = 0; fc < f.num_classes(); ++fc) {
    const auto& order = cs.ordered_classes(fc);
    std::size_t total = 0, s_max = 0;
    bool homogeneous = true;
    for (std::size_t c : order) {
      std::size_t sz = e.classes()[c].size();
      total += sz;
      s_max = std::max(s_max, sz);
      homogeneous = homogeneous && sz == e.classes()[order.front()].size();
    }
    if ((n + 1) * s_max > total) return fc;
    if (homogeneous) {
      // Index shift: keep the in-class rank, move i classes along the order.
      for (std::size_t j = 0; j < order.size(); ++j) {
        const auto& own = e.classes()[order[j]];
        for (std::size_t i = 0; i <= n; ++i) {
          const auto& target = e.classes()[order[(j + i) % order.size()]];
          for (std::size_t r = 0; r < own.size(); ++r) img[i][own[r]] = target[r];
        }
      }
    } else {
      // List the class grouped by E-class; T_i rotates the list by i*q with
      // q = floor(M/(n+1)) >= s_max, so the n+1 images fall in distinct blocks.
      std::vector<Point> list;
      for (std::size_t c : order) list.insert(list.end(), e.classes()[c].begin(), e.classes()[c].end());
      std::size_t q = total / (n + 1);
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t k = 0; k < total; ++k) img[i][list[k]] = list[(k + i * q) % total];
    }
  }
  maps.clear();
  for (auto& v : img) maps.emplace_back(std::move(v));
  for (std::size_t i = 0; i <= n; ++i)
    if (!f.contains(maps[i])) throw IdentityViolation("separating map left [F]");
  if (!maps[0].is_identity()) throw IdentityViolation("T_0 is not the identity");
  for (Point x = 0; x < m; ++x)
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j)
        if (e.related(maps[i](x), maps[j](x))) throw IdentityViolation("separating maps collide in an E-class");
  return std::nullopt;
}

std::string infeasible_reason(const EqRel& e, const EqRel& f, std::size_t fc, std::size_t n) {
  std::size_t s_max = 0;
  for (const auto& c : e.classes())
    if (f.class_index(c.front()) == fc) s_max = std::max(s_max, c.size());
  return "F-class " + std::to_string(fc) + ": (n+1)*max E-class size = " + std::to_string((n + 1) * s_max) +
         " exceeds class size " + std::to_string(f.classes()[fc].size());
}

}  // namespace

SeparatingResult separating_maps(const EqRel& e, const EqRel& f, std::size_t n) {
  if (!e.refines(f)) throw ValidationError("E is not contained in F");
  std::vector<std::size_t> index(f.num_classes(), 0);
  for (const auto& c : e.classes()) ++index[f.class_index(c.front())];
  SeparatingResult out;
  for (std::size_t fc = 0; fc < f.num_classes(); ++fc)
    if (index[fc] <= n) out.set.insert(out.set.end(), f.classes()[fc].begin(), f.classes()[fc].end());
  if (!out.set.empty()) {
    std::sort(out.set.begin(), out.set.end());
    out.kind = SeparatingResult::Kind::set;
    return out;
  }
  if (auto bad = build_family(e, f, n, out.maps)) {
    out.kind = SeparatingResult::Kind::infeasible;
    out.witness_class = *bad;
    out.reason = infeasible_reason(e, f, *bad, n);
    out.maps.clear();
  }
  return out;
}

EvadingResult evading_map(const EqRel& e, const EqRel& f) {
  if (!e.refines(f)) throw ValidationError("E is not contained in F");
  std::vector<std::size_t> index(f.num_classes(), 0);
  for (const auto& c : e.classes()) ++index[f.class_index(c.front())];
  for (std::size_t fc = 0; fc < f.num_classes(); ++fc)
    if (index[fc] == 1)
      throw ValidationError("F-class " + std::to_string(fc) + " holds a single E-class; phi cannot vanish there");
  EvadingResult out;
  std::vector<Perm> maps;
  if (auto bad = build_family(e, f, 1, maps)) {
    out.witness_class = *bad;
    out.reason = infeasible_reason(e, f, *bad, 1);
    return out;
  }
  if (phi(e, maps[1]) != 0) throw IdentityViolation("evading map is captured by E");
  out.map = std::move(maps[1]);
  return out;
}

Thm27Report check_thm27(const EqRel& e, const FinAction& action, const Caps& caps, Rng& rng, std::size_t samples) {
  EqRel f = orbit_relation(action);
  EqRel ef = e.meet(f);
  GroupClosure group = action.closure(caps.closure);
  Thm27Report r;
  r.epsilon = 0;
  for (const Perm& g : group.elements()) r.epsilon = std::max(r.epsilon, Rat(1 - phi(ef, g)));
  r.bound = 1 - 4 * r.epsilon;
  r.min_phi = 2;
  auto visit = [&](const Perm& s) {
    Rat v = phi(ef, s);
    if (v < r.min_phi) {
      r.min_phi = v;
      r.minimizer = s;
    }
    ++r.checked;
  };
  if (full_group_order(f) <= caps.full_group) {
    r.exhaustive = true;
    for_each_full_group(f, caps.full_group, visit);
  } else {
    for (std::size_t i = 0; i < samples; ++i) visit(random_full_group_element(f, rng));
  }
  r.margin = r.min_phi - r.bound;
  r.pass = r.margin >= 0;
  return r;
}

std::vector<PartialIso> merge_links(const EqRel& e, const EqRel& f) {
  if (!e.refines(f)) throw ValidationError("E is not contained in F");
  std::vector<std::vector<Point>> minima(f.num_classes());
  for (const auto& c : e.classes()) minima[f.class_index(c.front())].push_back(c.front());
  std::vector<PartialIso> links;
  for (const auto& mins : minima)
    for (std::size_t i = 0; i + 1 < mins.size(); ++i) links.emplace_back(e.size(), std::vector{std::pair{mins[i], mins[i + 1]}});
  return links;
}

}  // namespace erglab
