#include "erglab/ergcore.hpp"

#include "erglab/errors.hpp"

#include <algorithm>
#include <limits>

namespace erglab {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ValidationError(std::string("size mismatch: ") + what);
}

}  // namespace

EqRel orbit_relation(const FinAction& action) {
  UnionFind uf(action.space_size());
  for (const auto& g : action.generators())
    for (Point x = 0; x < action.space_size(); ++x) uf.unite(x, g.perm(x));
  return EqRel::from_union_find(uf);
}

Rat delta_u(const Perm& s, const Perm& t) {
  require_same(s.size(), t.size(), "delta_u");
  std::size_t n = 0;
  for (Point x = 0; x < s.size(); ++x) n += s(x) != t(x);
  return ratio(n, s.size());
}

Rat phi(const EqRel& e, const Perm& s) {
  require_same(e.size(), s.size(), "phi");
  std::size_t n = 0;
  for (Point x = 0; x < s.size(); ++x) n += e.related(s(x), x);
  return ratio(n, s.size());
}

Rat psi(const EqRel& e, const Perm& s, const Perm& t) {
  require_same(e.size(), s.size(), "psi");
  require_same(e.size(), t.size(), "psi");
  Perm si = s.inverse(), ti = t.inverse();
  std::size_t n = 0;
  for (Point x = 0; x < s.size(); ++x) n += e.related(si(x), ti(x));
  return ratio(n, s.size());
}

Rat theta(const EqRel& e, const Perm& s) { return 1 - phi(e, s); }

Perm project_to_full_group(const EqRel& e, const Perm& s) {
  require_same(e.size(), s.size(), "project_to_full_group");
  std::size_t m = s.size();
  std::vector<bool> in_a(m), in_b(m);
  for (Point x = 0; x < m; ++x) {
    in_a[x] = e.related(s(x), x);
    if (in_a[x]) in_b[s(x)] = true;
  }
  std::vector<Point> t(m);
  for (Point x = 0; x < m; ++x) t[x] = in_a[x] ? s(x) : x;
  // Chains start in A \ B and leave A at their last point b; close them up.
  for (Point a = 0; a < m; ++a) {
    if (!in_a[a] || in_b[a]) continue;
    Point b = a;
    while (in_a[b]) b = s(b);
    t[b] = a;
  }
  return Perm(std::move(t));
}

std::size_t full_group_order(const EqRel& e) {
  constexpr std::size_t sat = std::numeric_limits<std::size_t>::max();
  std::size_t order = 1;
  for (const auto& c : e.classes())
    for (std::size_t k = 2; k <= c.size(); ++k) {
      if (order > sat / k) return sat;
      order *= k;
    }
  return order;
}

void for_each_full_group(const EqRel& e, std::size_t cap, const std::function<void(const Perm&)>& visit) {
  std::size_t order = full_group_order(e);
  if (order > cap) throw CapExceeded("full_group", order, cap);
  const auto& classes = e.classes();
  // Odometer over per-class arrangements, each advanced by next_permutation.
  std::vector<std::vector<Point>> arrangement(classes.begin(), classes.end());
  std::vector<Point> img(e.size());
  for (;;) {
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (std::size_t i = 0; i < classes[c].size(); ++i) img[classes[c][i]] = arrangement[c][i];
    visit(Perm(img));
    std::size_t c = 0;
    while (c < classes.size() && !std::next_permutation(arrangement[c].begin(), arrangement[c].end())) ++c;
    if (c == classes.size()) break;
  }
}

std::vector<Perm> full_group(const EqRel& e, std::size_t cap) {
  std::vector<Perm> out;
  out.reserve(std::min(full_group_order(e), cap));
  for_each_full_group(e, cap, [&](const Perm& p) { out.push_back(p); });
  return out;
}

Perm random_full_group_element(const EqRel& e, Rng& rng) {
  std::vector<Point> img(e.size());
  for (const auto& c : e.classes()) {
    std::vector<Point> targets = c;
    shuffle(rng, targets);
    for (std::size_t i = 0; i < c.size(); ++i) img[c[i]] = targets[i];
  }
  return Perm(std::move(img));
}

Rat weak_metric(const Perm& s, const Perm& t, const std::vector<std::vector<Point>>& sets) {
  require_same(s.size(), t.size(), "weak_metric");
  std::size_t m = s.size();
  Rat total = 0, weight = Rat(1, 2);
  std::vector<int> mark(m);
  for (const auto& a : sets) {
    std::fill(mark.begin(), mark.end(), 0);
    for (Point x : a) {
      if (x >= m) throw ValidationError("weak_metric set point " + std::to_string(x) + " out of range");
      mark[s(x)] ^= 1;
      mark[t(x)] ^= 2;
    }
    std::size_t sym = 0;
    for (int v : mark) sym += v == 1 || v == 2;
    total += weight * ratio(sym, m);
    weight /= 2;
  }
  return total;
}

Rat cost(const EqRel& r) { return 1 - ratio(r.num_classes(), r.size()); }

}  // namespace erglab
