#include "erglab/ergcore.hpp"
#include "erglab/errors.hpp"
#include "erglab/generate.hpp"

#include "doctest.h"

#include <algorithm>
#include <numeric>

using namespace erglab;

namespace {

EqRel rel(std::size_t m, std::vector<std::vector<Point>> classes) { return EqRel::from_classes(m, classes); }

// Every permutation of {0..m-1} that keeps each point in its class, by
// filtering S_m against a plain label array.
std::vector<std::vector<Point>> brute_full_group(const std::vector<int>& label) {
  std::vector<Point> p(label.size());
  std::iota(p.begin(), p.end(), Point{0});
  std::vector<std::vector<Point>> out;
  do {
    bool ok = true;
    for (std::size_t x = 0; x < p.size() && ok; ++x) ok = label[p[x]] == label[x];
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int> labels(const EqRel& e) {
  std::vector<int> out(e.size());
  for (Point x = 0; x < e.size(); ++x) out[x] = static_cast<int>(e.class_index(x));
  return out;
}

}  // namespace

TEST_CASE("orbit relation examples") {
  CHECK(orbit_relation(FinAction::symmetric(4, {{"e", Perm::identity(4)}})).num_classes() == 4);
  CHECK(orbit_relation(FinAction::symmetric(4, {{"s", Perm::from_cycles(4, {{0, 1}, {2, 3}})}})) ==
        rel(4, {{0, 1}, {2, 3}}));
  CHECK(orbit_relation(FinAction::symmetric(4, {{"c", Perm::from_cycles(4, {{0, 1, 2, 3}})}})) ==
        EqRel::single_class(4));
}

TEST_CASE("delta_u, phi, psi, theta examples") {
  Perm id = Perm::identity(4), t01 = Perm::from_cycles(4, {{0, 1}}), c4 = Perm::from_cycles(4, {{0, 1, 2, 3}});
  Perm swap = Perm::from_cycles(4, {{0, 2}, {1, 3}});
  EqRel e = rel(4, {{0, 1}, {2, 3}});
  CHECK(delta_u(c4, c4) == 0);
  CHECK(delta_u(id, t01) == Rat(1, 2));
  CHECK(delta_u(id, c4) == 1);
  CHECK(phi(e, id) == 1);
  CHECK(phi(e, swap) == 0);
  CHECK(phi(e, c4) == Rat(1, 2));
  CHECK(psi(e, c4, c4) == 1);
  CHECK(psi(e, id, c4) == Rat(1, 2));
  CHECK(psi(EqRel::equality(4), t01, c4) == 1 - delta_u(t01, c4));
  CHECK(theta(e, id) == 0);
  CHECK(theta(e, swap) == 1);
  CHECK(theta(e, c4) == Rat(1, 2));
}

TEST_CASE("projection examples") {
  EqRel e = rel(4, {{0, 1, 2}, {3}});
  CHECK(project_to_full_group(e, Perm::from_cycles(4, {{0, 1, 2, 3}})) == Perm::from_cycles(4, {{0, 1, 2}}));
  Perm inside = Perm::from_cycles(4, {{0, 2}});
  CHECK(project_to_full_group(e, inside) == inside);
  CHECK(project_to_full_group(EqRel::equality(5), Perm::from_cycles(5, {{0, 3, 4}})) == Perm::identity(5));
}

TEST_CASE("full group sizes") {
  CHECK(full_group(EqRel::equality(4), 100).size() == 1);
  CHECK(full_group(rel(4, {{0, 1}, {2, 3}}), 100).size() == 4);
  CHECK(full_group(EqRel::single_class(3), 100).size() == 6);
  CHECK(full_group_order(EqRel::single_class(8)) == 40320);
  CHECK_THROWS_AS(full_group(EqRel::single_class(8), 1000), CapExceeded);
}

TEST_CASE("full group enumeration matches a filter of S_m") {
  Rng rng(21);
  for (int it = 0; it < 40; ++it) {
    std::size_t m = 1 + uniform_below(rng, 6);
    EqRel e = random_partition(m, rng);
    auto brute = brute_full_group(labels(e));
    auto mine = full_group(e, 1000000);
    std::vector<std::vector<Point>> got;
    for (const auto& p : mine) got.emplace_back(p.images().begin(), p.images().end());
    std::sort(got.begin(), got.end());
    std::sort(brute.begin(), brute.end());
    CHECK(got == brute);
  }
}

TEST_CASE("theta is the distance to the full group; the projection attains it") {
  Rng rng(1101);
  for (int it = 0; it < 200; ++it) {
    std::size_t m = 1 + uniform_below(rng, 7);
    EqRel e = random_partition(m, rng);
    Perm s = random_perm(m, rng);
    std::size_t best = m;
    for (const auto& t : brute_full_group(labels(e))) {
      std::size_t d = 0;
      for (Point x = 0; x < m; ++x) d += s(x) != t[x];
      best = std::min(best, d);
    }
    CHECK(theta(e, s) == Rat(static_cast<long>(best), static_cast<long>(m)));
    Perm t = project_to_full_group(e, s);
    CHECK(e.contains(t));
    CHECK(delta_u(s, t) == theta(e, s));
    for (Point x = 0; x < m; ++x)
      if (e.related(s(x), x)) CHECK(t(x) == s(x));
  }
}

TEST_CASE("psi is left-invariant and restricts to phi") {
  Rng rng(5);
  for (int it = 0; it < 100; ++it) {
    std::size_t m = 1 + uniform_below(rng, 8);
    EqRel e = random_partition(m, rng);
    Perm r = random_perm(m, rng), s = random_perm(m, rng), t = random_perm(m, rng);
    CHECK(psi(e, r * s, r * t) == psi(e, s, t));
    CHECK(psi(e, Perm::identity(m), s) == phi(e, s));
    CHECK(psi(e, s, t) == psi(e, t, s));
  }
}

TEST_CASE("weak metric examples") {
  Perm id = Perm::identity(4), t01 = Perm::from_cycles(4, {{0, 1}});
  CHECK(weak_metric(t01, t01, {{0, 2}}) == 0);
  CHECK(weak_metric(id, t01, {{0}}) == Rat(1, 4));
  CHECK(weak_metric(id, t01, {}) == 0);
  CHECK(weak_metric(id, t01, {{2}, {0}}) == Rat(1, 8));
}

TEST_CASE("cost examples") {
  CHECK(cost(EqRel::equality(5)) == 0);
  CHECK(cost(EqRel::single_class(4)) == Rat(3, 4));
  CHECK(cost(rel(6, {{0, 1, 2}, {3, 4, 5}})) == Rat(2, 3));
}

TEST_CASE("random full group elements stay in the full group") {
  Rng rng(9);
  for (int it = 0; it < 100; ++it) {
    EqRel e = random_partition(1 + uniform_below(rng, 10), rng);
    CHECK(e.contains(random_full_group_element(e, rng)));
  }
}
