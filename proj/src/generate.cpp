#include "erglab/generate.hpp"

#include "erglab/ergcore.hpp"
#include "erglab/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace erglab {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

std::vector<std::vector<Point>> split_randomly(std::vector<Point> pts, Rng& rng) {
  std::vector<std::vector<Point>> out;
  if (pts.empty()) return out;
  std::size_t k = 1 + static_cast<std::size_t>(uniform_below(rng, pts.size()));
  out.resize(k);
  for (Point x : pts) out[uniform_below(rng, k)].push_back(x);
  std::erase_if(out, [](const auto& c) { return c.empty(); });
  return out;
}

Perm cycle_through(std::size_t m, const std::vector<std::vector<Point>>& cycles) {
  std::vector<Point> img(m);
  std::iota(img.begin(), img.end(), Point{0});
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) img[c[i]] = c[(i + 1) % c.size()];
  return Perm(std::move(img));
}

json action_json(const FinAction& a) {
  json gens = json::array(), inv = json::object();
  auto g = a.generators();
  for (std::size_t i = 0; i < g.size(); ++i) {
    gens.push_back(g[i].label);
    if (g[i].inverse > i) inv[g[i].label] = g[g[i].inverse].label;
  }
  return json{{"generators", gens}, {"inverses", inv}};
}

void add_action_perms(json& perms, const FinAction& a) {
  for (const auto& g : a.generators()) perms[g.label] = to_json(g.perm);
}

}  // namespace

EqRel random_partition(std::size_t m, Rng& rng) {
  std::vector<Point> pts(m);
  std::iota(pts.begin(), pts.end(), Point{0});
  return EqRel::from_classes(m, split_randomly(std::move(pts), rng));
}

EqRel random_refinement(const EqRel& f, Rng& rng, bool dominant) {
  std::vector<std::vector<Point>> classes;
  for (const auto& c : f.classes()) {
    std::vector<Point> pts = c;
    if (dominant) {
      shuffle(rng, pts);
      std::size_t s = pts.size() / 2 + 1 + static_cast<std::size_t>(uniform_below(rng, pts.size() - pts.size() / 2));
      classes.emplace_back(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(s));
      for (auto& part : split_randomly({pts.begin() + static_cast<std::ptrdiff_t>(s), pts.end()}, rng))
        classes.push_back(std::move(part));
    } else {
      for (auto& part : split_randomly(std::move(pts), rng)) classes.push_back(std::move(part));
    }
  }
  return EqRel::from_classes(f.size(), classes);
}

Perm random_perm(std::size_t m, Rng& rng) {
  std::vector<Point> img(m);
  std::iota(img.begin(), img.end(), Point{0});
  shuffle(rng, img);
  return Perm(std::move(img));
}

PairInstance random_pair(std::size_t m, Rng& rng) {
  EqRel f = random_partition(m, rng);
  EqRel e = random_refinement(f, rng, uniform_below(rng, 2) == 0);
  std::vector<std::vector<Point>> ecycles, links;
  for (const auto& c : e.classes()) {
    std::vector<Point> cyc = c;
    shuffle(rng, cyc);
    ecycles.push_back(std::move(cyc));
  }
  for (const auto& fc : f.classes()) {
    std::map<std::size_t, std::vector<Point>> by_class;
    for (Point x : fc) by_class[e.class_index(x)].push_back(x);
    std::vector<Point> link;
    for (auto& [id, pts] : by_class) link.push_back(pts[uniform_below(rng, pts.size())]);
    shuffle(rng, link);
    links.push_back(std::move(link));
  }
  std::vector<std::pair<std::string, Perm>> gens;
  Perm g = cycle_through(m, ecycles), h = cycle_through(m, links);
  if (!g.is_identity()) gens.emplace_back("g", g);
  if (!h.is_identity()) gens.emplace_back("h", h);
  if (gens.empty()) gens.emplace_back("g", g);
  FinAction action = FinAction::symmetric(m, std::move(gens));
  Perm s = random_full_group_element(f, rng), sp = random_full_group_element(f, rng);
  return PairInstance{std::move(e), std::move(f), std::move(action), std::move(s), std::move(sp)};
}

CoinduceInstance random_coinduce(Rng& rng) {
  // Small groups as permutation groups: cyclic, dihedral, Klein four.
  struct Shape {
    std::string name;
    std::size_t degree;
    std::vector<Perm> gens;
  };
  std::vector<Shape> shapes;
  for (std::size_t n = 2; n <= 8; ++n) {
    std::vector<Point> rot(n);
    for (std::size_t i = 0; i < n; ++i) rot[i] = static_cast<Point>((i + 1) % n);
    shapes.push_back({"Z" + std::to_string(n), n, {Perm(rot)}});
  }
  for (std::size_t n = 3; n <= 4; ++n) {
    std::vector<Point> rot(n), ref(n);
    for (std::size_t i = 0; i < n; ++i) {
      rot[i] = static_cast<Point>((i + 1) % n);
      ref[i] = static_cast<Point>((n - i) % n);
    }
    shapes.push_back({"D" + std::to_string(n), n, {Perm(rot), Perm(ref)}});
  }
  shapes.push_back({"K4", 4, {Perm::from_cycles(4, {{0, 1}, {2, 3}}), Perm::from_cycles(4, {{0, 2}, {1, 3}})}});

  const Shape& shape = shapes[uniform_below(rng, shapes.size())];
  std::vector<std::pair<std::string, Perm>> sgens;
  for (std::size_t i = 0; i < shape.gens.size(); ++i) sgens.emplace_back("s" + std::to_string(i), shape.gens[i]);
  FinAction abstract = FinAction::symmetric(shape.degree, std::move(sgens));
  GroupClosure g = abstract.closure(1 << 12);
  std::size_t order = g.order();

  // h: a non-identity element whose subgroup has index <= 4.
  std::vector<std::size_t> candidates;
  for (std::size_t id = 1; id < order; ++id) {
    std::size_t k = 1;
    for (std::size_t p = id; p != 0; p = g.multiply(p, id)) ++k;
    if (order / k <= 4) candidates.push_back(id);
  }
  std::size_t hid = candidates[uniform_below(rng, candidates.size())];
  std::size_t hord = 1;
  for (std::size_t p = hid; p != 0; p = g.multiply(p, hid)) ++hord;

  std::size_t copies = 1 + static_cast<std::size_t>(uniform_below(rng, 2));
  std::size_t m = order * copies;
  auto regular = [&](auto&& image) {
    std::vector<Point> img(m);
    for (std::size_t c = 0; c < copies; ++c)
      for (std::size_t id = 0; id < order; ++id) img[c * order + id] = static_cast<Point>(c * order + image(id));
    return Perm(std::move(img));
  };
  std::vector<std::pair<std::string, Perm>> bgens, agens;
  for (std::size_t i = 0; i < shape.gens.size(); ++i) {
    std::size_t sid = g.generator_id(abstract.find("s" + std::to_string(i)).value());
    bgens.emplace_back("s" + std::to_string(i), regular([&](std::size_t id) { return g.multiply(sid, id); }));
  }
  agens.emplace_back("d", regular([&](std::size_t id) { return g.multiply(id, hid); }));

  std::size_t y = 2 + static_cast<std::size_t>(uniform_below(rng, 2));
  Perm img;
  do {
    img = random_perm(y, rng);
    Perm p = Perm::identity(y);
    for (std::size_t i = 0; i < hord; ++i) p = p * img;
    if (p.is_identity()) break;
  } while (true);
  TargetSpec target;
  target.size = y;
  target.generator_images.emplace_back("d", img);
  return CoinduceInstance{FinAction::symmetric(m, std::move(agens)), FinAction::symmetric(m, std::move(bgens)),
                          std::move(target), shape.name};
}

json pair_document(const PairInstance& p) {
  json perms = json::object();
  add_action_perms(perms, p.action);
  perms["S"] = to_json(p.s);
  perms["Sp"] = to_json(p.sp);
  return json{{"space", {{"size", p.e.size()}}},
              {"perms", perms},
              {"relations", {{"E", to_json(p.e)}, {"F", to_json(p.f)}}},
              {"actions", {{"G", action_json(p.action)}}}};
}

json coinduce_document(const CoinduceInstance& c) {
  json perms = json::object();
  add_action_perms(perms, c.a0);
  add_action_perms(perms, c.b0);
  json images = json::object();
  for (const auto& [label, img] : c.target.generator_images) images[label] = to_json(img);
  EqRel e = orbit_relation(c.a0), f = orbit_relation(c.b0);
  return json{{"space", {{"size", c.a0.space_size()}}},
              {"perms", perms},
              {"relations", {{"E", to_json(e)}, {"F", to_json(f)}}},
              {"actions", {{"D", action_json(c.a0)}, {"G", action_json(c.b0)}}},
              {"coinduce",
               {{"a0", {{"action", "D"}, {"free", true}}},
                {"b0", {{"action", "G"}}},
                {"a", {{"size", c.target.size}, {"generator_images", images}}},
                {"checks", {"cocycle", "action", "thm33", "prop34"}}}}};
}

json cyclic_document(std::size_t n) {
  if (n < 1) throw ValidationError("cyclic instance needs n >= 1");
  std::vector<Point> shift(n);
  for (std::size_t i = 0; i < n; ++i) shift[i] = static_cast<Point>((i + 1) % n);
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) uf.unite(static_cast<Point>(i), static_cast<Point>((i + 2) % n));
  EqRel e = EqRel::from_union_find(uf);
  std::vector<Point> a;
  for (Point x = 0; x < n; ++x)
    if (x % 3 != 2) a.push_back(x);
  return json{{"space", {{"size", n}}},
              {"perms", {{"g", json(shift)}}},
              {"relations", {{"E", to_json(e)}, {"F", to_json(EqRel::single_class(n))}}},
              {"actions", {{"Z", {{"generators", {"g"}}, {"inverses", json::object()}}}}},
              {"percolation", {{"action", "Z"}, {"a_sets", {{"g", json(a)}}}}}};
}

json product_document(std::size_t a, std::size_t b) {
  if (a < 1 || b < 1) throw ValidationError("product instance needs positive factors");
  std::size_t m = a * b;
  std::vector<Point> g(m), h(m);
  std::vector<std::vector<Point>> eclasses(b);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      g[i * b + j] = static_cast<Point>(((i + 1) % a) * b + j);
      h[i * b + j] = static_cast<Point>(i * b + (j + 1) % b);
      eclasses[j].push_back(static_cast<Point>(i * b + j));
    }
  FinAction act = FinAction::symmetric(m, {{"g", Perm(g)}, {"h", Perm(h)}});
  json perms = json::object();
  add_action_perms(perms, act);
  return json{{"space", {{"size", m}}},
              {"perms", perms},
              {"relations", {{"E", to_json(EqRel::from_classes(m, eclasses))}, {"F", to_json(EqRel::single_class(m))}}},
              {"actions", {{"G", action_json(act)}}}};
}

json coinduce_ready_document(std::size_t m, std::size_t n) {
  if (m < 1 || n < 1 || m % n != 0) throw ValidationError("coinduce_ready needs n dividing m");
  std::vector<Point> g(m), d(m);
  std::vector<std::vector<Point>> eclasses(n);
  for (std::size_t x = 0; x < m; ++x) {
    g[x] = static_cast<Point>((x + 1) % m);
    d[x] = static_cast<Point>((x + n) % m);
    eclasses[x % n].push_back(static_cast<Point>(x));
  }
  FinAction a0 = FinAction::symmetric(m, {{"d", Perm(d)}}), b0 = FinAction::symmetric(m, {{"g", Perm(g)}});
  json perms = json::object();
  add_action_perms(perms, a0);
  add_action_perms(perms, b0);
  json swap = (m / n) % 2 == 0 ? json{1, 0} : json{0, 1};
  return json{{"space", {{"size", m}}},
              {"perms", perms},
              {"relations", {{"E", to_json(EqRel::from_classes(m, eclasses))}, {"F", to_json(EqRel::single_class(m))}}},
              {"actions", {{"D", action_json(a0)}, {"G", action_json(b0)}}},
              {"coinduce",
               {{"a0", {{"action", "D"}, {"free", true}}},
                {"b0", {{"action", "G"}}},
                {"a", {{"size", 2}, {"generator_images", {{"d", swap}}}}},
                {"checks", {"cocycle", "action", "thm33", "prop34"}}}}};
}

json generate(std::string_view kind, const std::vector<std::size_t>& size, std::uint64_t seed) {
  auto arg = [&](std::size_t i, std::size_t fallback) { return i < size.size() ? size[i] : fallback; };
  if (kind == "random_pair") {
    std::size_t m = arg(0, 8);
    if (m < 1 || m > 4096) throw ValidationError("random_pair size must lie in [1, 4096]");
    Rng rng(seed);
    return pair_document(random_pair(m, rng));
  }
  if (kind == "cyclic") return cyclic_document(arg(0, 6));
  if (kind == "product") return product_document(arg(0, 3), arg(1, 4));
  if (kind == "coinduce_ready") {
    if (size.empty()) {
      Rng rng(seed);
      return coinduce_document(random_coinduce(rng));
    }
    return coinduce_ready_document(arg(0, 4), arg(1, 2));
  }
  throw ValidationError("unknown instance kind '" + std::string(kind) + "'");
}

}  // namespace erglab
