#include "erglab/errors.hpp"
#include "erglab/percolation.hpp"

#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <queue>
#include <set>

using namespace erglab;

namespace {

CayleyBall ball_of(const char* model, std::size_t r) {
  auto m = model_from_name(model);
  return cayley_ball(m, m->standard_generators(), r, Caps{});
}

// Plain BFS over open edges, labeling each cluster by its smallest vertex.
std::vector<std::uint32_t> bfs_labels(const CayleyBall& ball, const PercConfig& c) {
  std::size_t v = ball.vertices.size();
  std::vector<std::vector<std::uint32_t>> adj(v);
  for (std::size_t e = 0; e < ball.edges.size(); ++e)
    if (c.open[e]) {
      adj[ball.edges[e].first].push_back(ball.edges[e].second);
      adj[ball.edges[e].second].push_back(ball.edges[e].first);
    }
  std::vector<std::uint32_t> label(v, UINT32_MAX);
  for (std::uint32_t s = 0; s < v; ++s) {
    if (label[s] != UINT32_MAX) continue;
    std::queue<std::uint32_t> q;
    q.push(s);
    label[s] = s;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto w : adj[u])
        if (label[w] == UINT32_MAX) {
          label[w] = s;
          q.push(w);
        }
    }
  }
  return label;
}

}  // namespace

TEST_CASE("ball sizes") {
  for (std::size_t r = 0; r <= 6; ++r) {
    CayleyBall z = ball_of("Z2", r);
    CHECK(z.vertices.size() == 2 * r * r + 2 * r + 1);
    std::size_t edges = 0;
    long rr = static_cast<long>(r);
    for (long x = -rr; x <= rr; ++x)
      for (long y = -rr; y <= rr; ++y) {
        if (std::labs(x) + std::labs(y) > rr) continue;
        edges += std::labs(x + 1) + std::labs(y) <= rr;
        edges += std::labs(x) + std::labs(y + 1) <= rr;
      }
    CHECK(z.edges.size() == edges);

    CayleyBall f = ball_of("F2", r);
    std::size_t pow3 = 1;
    for (std::size_t i = 0; i < r; ++i) pow3 *= 3;
    CHECK(f.vertices.size() == 1 + 2 * (pow3 - 1));
    CHECK(f.edges.size() == f.vertices.size() - 1);
    CHECK(f.boundary.size() == (r == 0 ? 1 : 4 * pow3 / 3));
  }
  CayleyBall z2 = ball_of("Z2", 2);
  CHECK(z2.vertices.size() == 13);
  CHECK(ball_of("F2", 2).vertices.size() == 17);
  CHECK(ball_of("Z2", 0).edges.empty());
}

TEST_CASE("ball construction rejects the identity in Q") {
  auto m = model_from_name("Z2");
  CHECK_THROWS_AS(cayley_ball(m, {m->identity()}, 2, Caps{}), ValidationError);
  Caps tiny;
  tiny.ball = 10;
  CHECK_THROWS_AS(cayley_ball(m, m->standard_generators(), 5, tiny), CapExceeded);
}

TEST_CASE("extreme parameters") {
  CayleyBall b = ball_of("Z2", 5);
  PercConfig closed = percolate(b, 0.0, 3);
  PercConfig open = percolate(b, 1.0, 3);
  for (auto o : closed.open) CHECK(o == 0);
  for (auto o : open.open) CHECK(o == 1);
  ClusterStats s0 = cluster_stats(b, {closed}, {});
  ClusterStats s1 = cluster_stats(b, {open}, {});
  CHECK(s0.theta_hat == 0);
  CHECK(s1.theta_hat == 1);
  CHECK(s0.boundary_clusters_mean == doctest::Approx(double(b.boundary.size())));
  CHECK(s1.boundary_clusters_mean == 1);
}

TEST_CASE("configurations are deterministic per seed and trial") {
  CayleyBall b = ball_of("F2", 4);
  CHECK(percolate(b, 0.5, 11, 2).open == percolate(b, 0.5, 11, 2).open);
  CHECK(percolate(b, 0.5, 11, 2).open != percolate(b, 0.5, 11, 3).open);
  CHECK(percolate(b, 0.5, 11, 2).open != percolate(b, 0.5, 12, 2).open);
}

TEST_CASE("cluster labels agree with breadth-first search") {
  for (const char* model : {"Z2", "F2", "Z2xF2"}) {
    CayleyBall b = ball_of(model, 4);
    for (std::uint64_t t = 0; t < 5; ++t) {
      PercConfig c = percolate(b, 0.45, 99, t);
      CHECK(cluster_labels(b, c) == bfs_labels(b, c));
    }
  }
}

TEST_CASE("sweep matches individual configurations") {
  CayleyBall b = ball_of("Z2", 8);
  auto m = b.model;
  std::vector<Element> targets{m->parse("(3,0)"), m->parse("(2,2)")};
  std::vector<double> grid{0.0, 0.3, 0.5, 0.7, 1.0};
  SweepCurve curve = sweep(b, grid, 40, 17, targets, 1);
  REQUIRE(curve.points.size() == grid.size());
  for (const SweepPoint& pt : curve.points) {
    std::vector<PercConfig> configs;
    for (std::uint64_t t = 0; t < 40; ++t) configs.push_back(percolate(b, pt.p, 17, t));
    ClusterStats s = cluster_stats(b, configs, targets);
    CHECK(pt.theta_hat() == doctest::Approx(s.theta_hat));
    CHECK(pt.boundary_clusters_mean() == doctest::Approx(s.boundary_clusters_mean));
    CHECK(pt.tau_hat(0) == doctest::Approx(s.tau_hat[0]));
    CHECK(pt.tau_hat(1) == doctest::Approx(s.tau_hat[1]));
  }
  CHECK(curve.points.front().theta_hat() == 0);
  CHECK(curve.points.back().theta_hat() == 1);
  CHECK(curve.monotone);
}

TEST_CASE("sweep is independent of the worker count") {
  CayleyBall b = ball_of("F2", 6);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  SweepCurve a = sweep(b, grid, 30, 5, {}, 1);
  SweepCurve c = sweep(b, grid, 30, 5, {}, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.points[i].theta_count == c.points[i].theta_count);
    CHECK(a.points[i].boundary_cluster_sum == c.points[i].boundary_cluster_sum);
  }
  CHECK_THROWS_AS(sweep(b, {0.5, 0.4}, 10, 1), ValidationError);
}

TEST_CASE("supercritical square lattice reaches the boundary") {
  CayleyBall b = ball_of("Z2", 64);
  SweepCurve c = sweep(b, {0.6}, 100, 1);
  CHECK(c.points[0].theta_hat() > 0.5);
}

TEST_CASE("crossing and inflection on a synthetic curve") {
  SweepCurve c;
  for (int i = 0; i <= 10; ++i) {
    SweepPoint pt;
    pt.p = i / 10.0;
    pt.trials = 100;
    pt.theta_count = static_cast<std::size_t>(100.0 / (1.0 + std::exp(-30.0 * (pt.p - 0.4))));
    c.points.push_back(pt);
  }
  auto x = crossing(c, 0.5);
  REQUIRE(x.has_value());
  CHECK(*x == doctest::Approx(0.4).epsilon(0.02));
  CHECK(inflection(c, 1) == doctest::Approx(0.4));
  SweepPoint flat;
  flat.trials = 1;
  CHECK_FALSE(crossing(SweepCurve{{flat}, {}, true}, 0.5).has_value());
}

TEST_CASE("pulled-back percolation on six points") {
  // X = Z/6 with g = +1 and A_g = {x : x mod 3 != 2}; clusters {0,1,2}, {3,4,5}.
  std::vector<Point> s(6);
  for (Point i = 0; i < 6; ++i) s[i] = (i + 1) % 6;
  FinAction act = FinAction::symmetric(6, {{"g", Perm(s)}});
  PhiReport r = action_to_percolation(act, {std::vector<Point>{0, 1, 3, 4}, std::nullopt}, Caps{});
  GroupClosure cl = act.closure(100);
  const Rat expect[6] = {1, ratio(2, 3), ratio(1, 3), 0, ratio(1, 3), ratio(2, 3)};
  Perm gk = Perm::identity(6);
  for (std::size_t k = 0; k < 6; ++k, gk = Perm(s) * gk) {
    std::size_t id = cl.find(gk).value();
    CHECK(r.phi_e[id] == expect[k]);
    CHECK(r.connection[id] == expect[k]);
  }
  CHECK(r.free_action);
  CHECK(r.equivariant);
  CHECK(r.identity_holds);
  CHECK(r.a_sets[1] == std::vector<Point>{1, 2, 4, 5});
}

TEST_CASE("pulled-back percolation with full and empty sets") {
  // Non-free action of S_3 on 3 points.
  FinAction act = FinAction::symmetric(
      3, {{"a", Perm::from_cycles(3, {{0, 1}})}, {"b", Perm::from_cycles(3, {{0, 1, 2}})}});
  GroupClosure cl = act.closure(100);
  std::size_t ng = act.generators().size();
  std::vector<std::optional<std::vector<Point>>> full(ng, std::vector<Point>{0, 1, 2});
  PhiReport all = action_to_percolation(act, full, Caps{});
  std::vector<std::optional<std::vector<Point>>> none(ng, std::vector<Point>{});
  PhiReport empty = action_to_percolation(act, none, Caps{});
  CHECK_FALSE(all.free_action);
  for (std::size_t id = 0; id < cl.order(); ++id) {
    CHECK(all.phi_e[id] == 1);
    std::size_t fixed = 0;
    for (Point x = 0; x < 3; ++x) fixed += cl.element(id)(x) == x;
    CHECK(empty.phi_e[id] == ratio(fixed, 3));
    CHECK(empty.connection[id] == (id == 0 ? 1 : 0));
    CHECK(empty.connection[id] <= empty.phi_e[id]);
  }
  CHECK(all.identity_holds);
  CHECK(empty.identity_holds);
}

TEST_CASE("pulled-back percolation rejects incompatible sets") {
  std::vector<Point> s{1, 2, 3, 0};
  FinAction act = FinAction::symmetric(4, {{"g", Perm(s)}});
  CHECK_THROWS_AS(action_to_percolation(act, {std::vector<Point>{0}, std::vector<Point>{0}}, Caps{}),
                  ValidationError);
}

TEST_CASE("exhaustion length") {
  auto z = model_from_name("Z1");
  LengthSystem ls(z, z->standard_generators(), Caps{});
  CHECK(ls.a(1) == 1);
  CHECK(ls.a(2) == 2);
  CHECK(ls.a(3) == 5);
  CHECK(ls.a(4) == 16);
  CHECK(ls.a(5) == 65);
  CHECK(ls.length(z->identity()) == 0);
  const std::pair<const char*, std::size_t> cases[] = {{"(1)", 1}, {"(-2)", 2}, {"(4)", 2}, {"(5)", 3},
                                                       {"(15)", 3}, {"(16)", 4}, {"(64)", 4}, {"(65)", 5}};
  for (auto [text, len] : cases) CHECK(ls.length(z->parse(text)) == len);
  CHECK(ls.weight(z->parse("(5)")) == ratio(1, 4));
  CHECK_THROWS_AS(LengthSystem(z, z->standard_generators(), Caps{}, {1, 1}), ValidationError);
}

TEST_CASE("model names and element text round-trip") {
  for (const char* name : {"Z2", "Z^3", "F2", "Z2xF2"}) {
    auto m = model_from_name(name);
    CayleyBall b = cayley_ball(m, m->standard_generators(), 2, Caps{});
    for (const Element& e : b.vertices) CHECK(m->parse(m->format(e)) == e);
    for (const Element& g : b.vertices)
      for (const Element& h : b.vertices) CHECK(m->multiply(m->multiply(g, h), m->inverse(h)) == g);
  }
  auto f = model_from_name("F2");
  CHECK(f->format(f->identity()) == "e");
  CHECK(f->multiply(f->parse("aB"), f->parse("bA")) == f->identity());
  CHECK(f->standard_length(f->parse("abAB")) == 4u);
  CHECK_THROWS_AS(model_from_name("Q7"), ValidationError);
  CHECK_THROWS_AS(f->parse("ax"), ValidationError);
}
