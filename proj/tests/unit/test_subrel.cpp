#include "erglab/ergcore.hpp"
#include "erglab/errors.hpp"
#include "erglab/generate.hpp"
#include "erglab/subrel.hpp"

#include "doctest.h"

#include <algorithm>
#include <set>

using namespace erglab;

namespace {

EqRel rel(std::size_t m, std::vector<std::vector<Point>> classes) { return EqRel::from_classes(m, classes); }

FinAction shift_action(std::size_t n, std::size_t step) {
  std::vector<Point> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>((i + step) % n);
  return FinAction::symmetric(n, {{"g", Perm(img)}});
}

// Independent check of an extraction: A is a union of E-classes and every
// F-class meeting A holds exactly m of its E-classes.
bool extraction_valid(const EqRel& e, const EqRel& f, const Extraction& x) {
  std::set<Point> a(x.set.begin(), x.set.end());
  if (a.empty()) return false;
  for (Point p : x.set)
    for (Point q : e.class_of(p))
      if (!a.count(q)) return false;
  for (const auto& fc : f.classes()) {
    std::set<std::size_t> eclasses;
    for (Point p : fc)
      if (a.count(p)) eclasses.insert(e.class_index(p));
    if (!eclasses.empty() && eclasses.size() != x.m) return false;
  }
  return x.measure == Rat(static_cast<long>(a.size()), static_cast<long>(e.size()));
}

}  // namespace

TEST_CASE("choice function examples") {
  ChoiceSystem one(EqRel::single_class(4), EqRel::single_class(4));
  CHECK(one.index(0) == 1);
  CHECK(one.choice(3, 0) == 3);

  ChoiceSystem cs(rel(6, {{0, 1}, {2, 3}, {4, 5}}), EqRel::single_class(6));
  CHECK(cs.choice(0, 0) == 0);
  CHECK(cs.choice(0, 1) == 2);
  CHECK(cs.choice(0, 2) == 4);
  CHECK(cs.choice(2, 0) == 2);
  CHECK(cs.choice(2, 1) == 4);
  CHECK(cs.choice(2, 2) == 0);
  CHECK(cs.constant_index() == std::optional<std::size_t>(3));

  ChoiceSystem eq(EqRel::equality(4), rel(4, {{0, 1}, {2}, {3}}));
  CHECK(eq.index(0) == 2);
  CHECK(eq.index(2) == 1);
  CHECK(eq.choice(0, 1) == 1);
  CHECK(eq.choice(1, 1) == 0);
  CHECK_FALSE(eq.constant_index().has_value());

  CHECK_THROWS_AS(ChoiceSystem(EqRel::single_class(3), EqRel::equality(3)), ValidationError);
}

TEST_CASE("index cocycle examples") {
  ChoiceSystem cs(rel(6, {{0, 1}, {2, 3}, {4, 5}}), EqRel::single_class(6));
  CHECK(index_cocycle(cs, 3, 3).is_identity());
  Perm p = index_cocycle(cs, 0, 2);
  CHECK(p(0) == 2);
  CHECK(p(1) == 0);
  CHECK(p(2) == 1);
  ChoiceSystem two(EqRel::equality(4), rel(4, {{0, 1}, {2, 3}}));
  CHECK_THROWS_AS(index_cocycle(two, 0, 2), ValidationError);
  ChoiceSystem single(EqRel::single_class(4), EqRel::single_class(4));
  CHECK(index_cocycle(single, 0, 3).is_identity());
}

TEST_CASE("tau character examples on the six-point space") {
  ChoiceSystem cs(rel(6, {{0, 2, 4}, {1, 3, 5}}), EqRel::single_class(6));
  Perm s1 = Perm::from_cycles(6, {{0, 1, 2, 3, 4, 5}});
  CHECK(tau_character(cs, s1 * s1) == 1);
  CHECK(tau_character(cs, s1) == 0);
  TauCarrier carrier(cs);
  CHECK(tau_representation(cs, carrier, Perm::identity(6)).is_identity());
  ChoiceSystem sub(rel(6, {{0, 1}, {2, 3}, {4, 5}}), rel(6, {{0, 1, 2, 3}, {4, 5}}));
  CHECK_THROWS_AS(tau_representation(sub, TauCarrier(sub), s1), ValidationError);
}

TEST_CASE("sigma cocycle identity and tau character on random pairs") {
  Rng rng(404);
  for (int it = 0; it < 150; ++it) {
    PairInstance p = random_pair(1 + uniform_below(rng, 8), rng);
    for (auto conv : {ChoiceSystem::Convention::min_forward, ChoiceSystem::Convention::max_backward}) {
      ChoiceSystem cs(p.e, p.f, conv);
      Perm s = random_full_group_element(p.f, rng), t = random_full_group_element(p.f, rng);
      for (Point x = 0; x < p.e.size(); ++x) CHECK(sigma(cs, s * t, x) == sigma(cs, s, t(x)) * sigma(cs, t, x));
      CHECK(tau_character(cs, s) == phi(p.e, s));
    }
  }
}

TEST_CASE("choice conventions give equal characters and component sizes") {
  Rng rng(17);
  for (int it = 0; it < 60; ++it) {
    PairInstance p = random_pair(1 + uniform_below(rng, 7), rng);
    ChoiceSystem a(p.e, p.f), b(p.e, p.f, ChoiceSystem::Convention::max_backward);
    Perm s = random_full_group_element(p.f, rng);
    CHECK(tau_character(a, s) == tau_character(b, s));
    Rng r1(1), r2(1);
    InvariantAnalysis ia = invariant_analysis(a, p.action, Caps{}, r1);
    InvariantAnalysis ib = invariant_analysis(b, p.action, Caps{}, r2);
    std::vector<std::size_t> sa(ia.num_components), sb(ib.num_components);
    for (auto c : ia.component) ++sa[c];
    for (auto c : ib.component) ++sb[c];
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    CHECK(sa == sb);
  }
}

TEST_CASE("invariant analysis extractions") {
  Rng rng(3);
  // E = F: xi_0 is the all-ones vector and extracts (X, 1).
  FinAction z4 = shift_action(4, 1);
  ChoiceSystem whole(EqRel::single_class(4), EqRel::single_class(4));
  InvariantAnalysis ia = invariant_analysis(whole, z4, Caps{}, rng);
  CHECK(ia.num_components == 1);
  CHECK(ia.average_extraction.m == 1);
  CHECK(ia.average_extraction.set.size() == 4);

  ChoiceSystem six(rel(6, {{0, 2, 4}, {1, 3, 5}}), EqRel::single_class(6));
  InvariantAnalysis is = invariant_analysis(six, shift_action(6, 1), Caps{}, rng);
  CHECK(is.min_phi == 0);
  CHECK(is.average_pairing >= is.min_phi);
  CHECK(is.full_group_invariant);
  for (const auto& x : is.extractions) CHECK(extraction_valid(six.e(), six.f(), x));

  for (int it = 0; it < 80; ++it) {
    PairInstance p = random_pair(1 + uniform_below(rng, 7), rng);
    ChoiceSystem cs(p.e, p.f);
    InvariantAnalysis r = invariant_analysis(cs, p.action, Caps{}, rng);
    CHECK(r.full_group_invariant);
    CHECK(r.average_pairing >= r.min_phi);
    for (const auto& x : r.extractions) CHECK(extraction_valid(p.e, p.f, x));
    CHECK(extraction_valid(p.e, p.f, r.average_extraction));
  }
  CHECK_THROWS_AS(invariant_analysis(six, shift_action(6, 2), Caps{}, rng), ValidationError);
}

TEST_CASE("min index set examples") {
  FinAction z2 = FinAction::symmetric(4, {{"s", Perm::from_cycles(4, {{0, 1}, {2, 3}})}});
  EqRel f = rel(4, {{0, 1}, {2, 3}});
  MinIndexReport r = min_index_set(rel(4, {{0, 1}, {2}, {3}}), f, Perm::identity(4), Perm::identity(4), z2, Caps{});
  CHECK(r.c == Rat(1, 2));
  CHECK(r.m_star == 1);
  CHECK(r.set == std::vector<Point>{0, 1});
  CHECK(r.holds());

  MinIndexReport same = min_index_set(f, f, Perm::identity(4), Perm::identity(4), z2, Caps{});
  CHECK(same.c == 1);
  CHECK(same.set.size() == 4);

  MinIndexReport vac = min_index_set(rel(6, {{0, 2, 4}, {1, 3, 5}}), EqRel::single_class(6), Perm::identity(6),
                                     Perm::identity(6), shift_action(6, 1), Caps{});
  CHECK(vac.vacuous);
  CHECK(vac.c == 0);

  CHECK_THROWS_AS(min_index_set(f, f, Perm::from_cycles(4, {{0, 2}}), Perm::identity(4), z2, Caps{}), ValidationError);
}

TEST_CASE("min index bound against a direct minimum") {
  Rng rng(2024);
  int nonvacuous = 0;
  for (int it = 0; it < 120; ++it) {
    PairInstance p = random_pair(1 + uniform_below(rng, 7), rng);
    MinIndexReport r = min_index_set(p.e, p.f, p.s, p.sp, p.action, Caps{});
    Rat c = 1;
    GroupClosure g = p.action.closure(1 << 20);
    for (const Perm& x : g.elements()) c = std::min(c, phi(p.e, p.s * x * p.sp));
    CHECK(r.c == c);
    std::size_t mstar = p.e.size();
    ChoiceSystem cs(p.e, p.f);
    for (Point x = 0; x < p.e.size(); ++x) mstar = std::min(mstar, cs.index(x));
    CHECK(r.m_star == mstar);
    bool equal = true;
    for (const auto& cl : p.e.classes())
      for (const auto& other : p.e.classes())
        if (p.f.related(cl.front(), other.front()) && cl.size() != other.size()) equal = false;
    CHECK(r.equal_classes == equal);
    if (c > 0 && equal) {
      ++nonvacuous;
      CHECK(Rat(static_cast<long>(mstar)) <= 1 / c);
      CHECK(r.holds());
    }
  }
  CHECK(nonvacuous > 20);
}

TEST_CASE("index bound needs equal class sizes") {
  // E-classes of sizes 4 and 1 under S_5: every element captures 3/5, yet
  // the index is 2. No one-to-one choice functions exist here.
  EqRel e = EqRel::from_classes(5, {{0, 1, 2, 3}, {4}});
  FinAction s5 = FinAction::symmetric(5, {{"a", Perm::from_cycles(5, {{0, 1}})}, {"b", Perm::from_cycles(5, {{0, 1, 2, 3, 4}})}});
  Perm id = Perm::identity(5);
  MinIndexReport r = min_index_set(e, EqRel::single_class(5), id, id, s5, Caps{});
  CHECK(r.c == ratio(3, 5));
  CHECK(r.m_star == 2);
  CHECK_FALSE(r.equal_classes);
  CHECK_FALSE(r.half_bound);
  CHECK(r.holds());
}

TEST_CASE("separating maps examples") {
  EqRel f = EqRel::single_class(4);
  SeparatingResult r = separating_maps(rel(4, {{0, 1}, {2, 3}}), f, 1);
  REQUIRE(r.kind == SeparatingResult::Kind::maps);
  CHECK(r.maps[0].is_identity());
  CHECK(r.maps[1] == Perm::from_cycles(4, {{0, 2}, {1, 3}}));
  CHECK(separating_maps(rel(4, {{0, 1, 2}, {3}}), f, 1).kind == SeparatingResult::Kind::infeasible);
  SeparatingResult s = separating_maps(rel(4, {{0, 1}, {2}, {3}}), rel(4, {{0, 1}, {2, 3}}), 1);
  CHECK(s.kind == SeparatingResult::Kind::set);
}

TEST_CASE("separating maps agree with exhaustive search") {
  Rng rng(99);
  for (int it = 0; it < 150; ++it) {
    std::size_t m = 1 + uniform_below(rng, 5);
    EqRel f = random_partition(m, rng);
    EqRel e = random_refinement(f, rng);
    std::size_t n = 1 + uniform_below(rng, 2);
    auto fg = full_group(f, 1000);
    bool exists = false;
    auto separated = [&](const std::vector<const Perm*>& ts) {
      for (Point x = 0; x < m; ++x)
        for (std::size_t i = 0; i < ts.size(); ++i)
          for (std::size_t j = i + 1; j < ts.size(); ++j)
            if (e.related((*ts[i])(x), (*ts[j])(x))) return false;
      return true;
    };
    Perm id = Perm::identity(m);
    if (n == 1) {
      for (const auto& t : fg) exists = exists || separated({&id, &t});
    } else {
      for (std::size_t a = 0; a < fg.size() && !exists; ++a)
        for (std::size_t b = 0; b < fg.size() && !exists; ++b) exists = separated({&id, &fg[a], &fg[b]});
    }
    SeparatingResult r = separating_maps(e, f, n);
    CHECK(exists == (r.kind == SeparatingResult::Kind::maps));
    if (r.kind == SeparatingResult::Kind::maps) {
      REQUIRE(r.maps.size() == n + 1);
      CHECK(r.maps[0].is_identity());
      std::vector<const Perm*> ts;
      for (const auto& t : r.maps) {
        CHECK(f.contains(t));
        ts.push_back(&t);
      }
      CHECK(separated(ts));
    }
    if (r.kind == SeparatingResult::Kind::set) {
      ChoiceSystem cs(e, f);
      for (Point x : r.set) CHECK(cs.index(x) <= n);
      CHECK_FALSE(r.set.empty());
    }
  }
}

TEST_CASE("evading map examples and exhaustive agreement") {
  EqRel f = EqRel::single_class(4);
  EvadingResult r = evading_map(rel(4, {{0, 1}, {2, 3}}), f);
  REQUIRE(r.map.has_value());
  CHECK(*r.map == Perm::from_cycles(4, {{0, 2}, {1, 3}}));
  CHECK_FALSE(evading_map(rel(4, {{0, 1, 2}, {3}}), f).map.has_value());
  CHECK_THROWS_AS(evading_map(EqRel::single_class(4), f), ValidationError);

  EqRel halves = rel(8, {{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  EqRel blocks = rel(8, {{0, 1, 2, 3}, {4, 5, 6, 7}});
  EvadingResult b = evading_map(halves, blocks);
  REQUIRE(b.map.has_value());
  CHECK(blocks.contains(*b.map));
  CHECK(phi(halves, *b.map) == 0);

  Rng rng(8);
  for (int it = 0; it < 150; ++it) {
    std::size_t m = 2 + uniform_below(rng, 5);
    EqRel ff = random_partition(m, rng);
    EqRel e = random_refinement(ff, rng);
    ChoiceSystem cs(e, ff);
    bool single = false;
    for (Point x = 0; x < m; ++x) single = single || cs.index(x) == 1;
    if (single) {
      CHECK_THROWS_AS(evading_map(e, ff), ValidationError);
      continue;
    }
    bool exists = false;
    for (const auto& t : full_group(ff, 1 << 20)) exists = exists || phi(e, t) == 0;
    EvadingResult ev = evading_map(e, ff);
    CHECK(exists == ev.map.has_value());
    if (ev.map) {
      CHECK(ff.contains(*ev.map));
      CHECK(phi(e, *ev.map) == 0);
    }
  }
}

TEST_CASE("check_thm27 examples") {
  Rng rng(1);
  FinAction z2 = FinAction::symmetric(4, {{"s", Perm::from_cycles(4, {{0, 1}, {2, 3}})}});
  Thm27Report r = check_thm27(rel(4, {{0, 1}, {2}, {3}}), z2, Caps{}, rng);
  CHECK(r.epsilon == Rat(1, 2));
  CHECK(r.bound < 0);
  CHECK(r.exhaustive);
  CHECK(r.checked == 4);
  CHECK(r.pass);

  Thm27Report same = check_thm27(rel(4, {{0, 1}, {2, 3}}), z2, Caps{}, rng);
  CHECK(same.epsilon == 0);
  CHECK(same.min_phi == 1);

  FinAction trivial = FinAction::symmetric(3, {{"e", Perm::identity(3)}});
  Thm27Report t = check_thm27(EqRel::equality(3), trivial, Caps{}, rng);
  CHECK(t.epsilon == 0);
  CHECK(t.checked == 1);
  CHECK(t.pass);
}

TEST_CASE("merge links realize F at minimal measure") {
  CHECK(merge_links(EqRel::single_class(5), EqRel::single_class(5)).empty());
  EqRel e = rel(6, {{0, 1}, {2, 3}, {4, 5}});
  auto links = merge_links(e, EqRel::single_class(6));
  CHECK(links.size() == 2);
  Rat measure = 0;
  for (const auto& l : links) measure += l.domain_measure();
  CHECK(cost(EqRel::single_class(6)) == cost(e) + measure);
  CHECK(cost(EqRel::single_class(6)) == Rat(5, 6));
  CHECK(merge_links(EqRel::equality(7), EqRel::single_class(7)).size() == 6);

  Rng rng(12);
  for (int it = 0; it < 100; ++it) {
    PairInstance p = random_pair(1 + uniform_below(rng, 10), rng);
    auto ls = merge_links(p.e, p.f);
    CHECK(join(p.e, ls) == p.f);
    Rat total = 0;
    for (const auto& l : ls) {
      CHECK(l.within(p.f));
      total += l.domain_measure();
    }
    CHECK(cost(p.f) == cost(p.e) + total);
  }
}
