#include "erglab/eqrel.hpp"

#include "erglab/errors.hpp"

#include <algorithm>
#include <map>

namespace erglab {

namespace {

// Canonical form from arbitrary per-point labels.
void canonicalize(const std::vector<std::size_t>& raw, std::vector<std::uint32_t>& label,
                  std::vector<std::vector<Point>>& classes) {
  std::map<std::size_t, std::uint32_t> first;  // raw label -> canonical index
  label.assign(raw.size(), 0);
  classes.clear();
  for (std::size_t x = 0; x < raw.size(); ++x) {
    auto [it, inserted] = first.try_emplace(raw[x], static_cast<std::uint32_t>(classes.size()));
    if (inserted) classes.emplace_back();
    label[x] = it->second;
    classes[it->second].push_back(static_cast<Point>(x));
  }
}

}  // namespace

EqRel EqRel::equality(std::size_t m) {
  std::vector<std::size_t> raw(m);
  for (std::size_t i = 0; i < m; ++i) raw[i] = i;
  EqRel e;
  canonicalize(raw, e.label_, e.classes_);
  return e;
}

EqRel EqRel::single_class(std::size_t m) {
  EqRel e;
  canonicalize(std::vector<std::size_t>(m, 0), e.label_, e.classes_);
  return e;
}

EqRel EqRel::from_classes(std::size_t m, const std::vector<std::vector<Point>>& classes) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> raw(m, unset);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].empty()) throw ValidationError("empty class in relation");
    for (Point x : classes[c]) {
      if (x >= m) throw ValidationError("class point " + std::to_string(x) + " out of range");
      if (raw[x] != unset) throw ValidationError("point " + std::to_string(x) + " in two classes");
      raw[x] = c;
    }
  }
  for (std::size_t x = 0; x < m; ++x)
    if (raw[x] == unset) throw ValidationError("point " + std::to_string(x) + " in no class");
  EqRel e;
  canonicalize(raw, e.label_, e.classes_);
  return e;
}

EqRel EqRel::from_union_find(UnionFind& forest) {
  std::vector<std::size_t> raw(forest.size());
  for (std::size_t x = 0; x < raw.size(); ++x) raw[x] = forest.find(x);
  EqRel e;
  canonicalize(raw, e.label_, e.classes_);
  return e;
}

bool EqRel::refines(const EqRel& coarser) const {
  if (coarser.size() != size()) throw ValidationError("relations on different spaces");
  for (const auto& c : classes_)
    for (Point x : c)
      if (!coarser.related(c.front(), x)) return false;
  return true;
}

EqRel EqRel::meet(const EqRel& other) const {
  if (other.size() != size()) throw ValidationError("relations on different spaces");
  std::vector<std::size_t> raw(size());
  for (std::size_t x = 0; x < size(); ++x) raw[x] = label_[x] * other.num_classes() + other.label_[x];
  EqRel e;
  canonicalize(raw, e.label_, e.classes_);
  return e;
}

EqRel EqRel::join(const EqRel& other) const {
  if (other.size() != size()) throw ValidationError("relations on different spaces");
  UnionFind uf(size());
  for (const auto* rel : {this, &other})
    for (const auto& c : rel->classes_)
      for (Point x : c) uf.unite(c.front(), x);
  return from_union_find(uf);
}

bool EqRel::contains(const Perm& s) const {
  if (s.size() != size()) throw ValidationError("permutation and relation on different spaces");
  for (std::size_t x = 0; x < size(); ++x)
    if (label_[s(static_cast<Point>(x))] != label_[x]) return false;
  return true;
}

PartialIso::PartialIso(std::size_t m, std::vector<std::pair<Point, Point>> graph)
    : m_(m), graph_(std::move(graph)) {
  std::vector<bool> dom(m, false), rng(m, false);
  for (auto [x, y] : graph_) {
    if (x >= m || y >= m) throw ValidationError("partial isomorphism point out of range");
    if (dom[x]) throw ValidationError("partial isomorphism repeats domain point " + std::to_string(x));
    if (rng[y]) throw ValidationError("partial isomorphism is not injective at " + std::to_string(y));
    dom[x] = rng[y] = true;
  }
  std::sort(graph_.begin(), graph_.end());
}

Rat PartialIso::domain_measure() const { return ratio(graph_.size(), m_); }

bool PartialIso::within(const EqRel& f) const {
  if (f.size() != m_) throw ValidationError("partial isomorphism and relation on different spaces");
  return std::all_of(graph_.begin(), graph_.end(), [&](auto g) { return f.related(g.first, g.second); });
}

EqRel join(const EqRel& e, std::span<const PartialIso> links) {
  UnionFind uf(e.size());
  for (const auto& c : e.classes())
    for (Point x : c) uf.unite(c.front(), x);
  for (const auto& link : links) {
    if (link.space_size() != e.size()) throw ValidationError("link on a different space");
    for (auto [x, y] : link.graph()) uf.unite(x, y);
  }
  return EqRel::from_union_find(uf);
}

}  // namespace erglab
