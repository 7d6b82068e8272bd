#pragma once

#include "erglab/perm.hpp"
#include "erglab/rational.hpp"
#include "erglab/union_find.hpp"

#include <span>
#include <utility>
#include <vector>

namespace erglab {

/// Equivalence relation on a finite uniform space {0..m-1}.
///
/// Built through a union-find forest and frozen into canonical form:
/// classes are sorted internally and listed by their minimal element, and
/// `class_index(x)` is the position of x's class in that list. Two relations
/// compare equal iff they are the same partition.
class EqRel {
 public:
  EqRel() = default;

  static EqRel equality(std::size_t m);
  static EqRel single_class(std::size_t m);

  /// Throws ValidationError unless `classes` partitions {0..m-1}.
  static EqRel from_classes(std::size_t m, const std::vector<std::vector<Point>>& classes);

  /// Freezes the current state of a union-find forest.
  static EqRel from_union_find(UnionFind& forest);

  std::size_t size() const noexcept { return label_.size(); }
  std::size_t num_classes() const noexcept { return classes_.size(); }

  std::size_t class_index(Point x) const { return label_[x]; }
  bool related(Point x, Point y) const { return label_[x] == label_[y]; }

  const std::vector<std::vector<Point>>& classes() const noexcept { return classes_; }
  std::span<const Point> class_of(Point x) const { return classes_[label_[x]]; }

  /// True iff every class of *this lies inside a class of `coarser`.
  bool refines(const EqRel& coarser) const;

  EqRel meet(const EqRel& other) const;
  EqRel join(const EqRel& other) const;

  /// Is `s` in the full group [E], i.e. s(x) E x for every x?
  bool contains(const Perm& s) const;

  friend bool operator==(const EqRel& a, const EqRel& b) { return a.label_ == b.label_; }

 private:
  std::vector<std::uint32_t> label_;
  std::vector<std::vector<Point>> classes_;
};

/// A partial bijection theta: dom -> rng with explicit graph; an element of [[F]]
/// when its graph lies inside F.
class PartialIso {
 public:
  /// `graph` lists (x, theta(x)). Throws ValidationError if not injective,
  /// a point repeats in the domain, or a point is out of range.
  PartialIso(std::size_t m, std::vector<std::pair<Point, Point>> graph);

  std::size_t space_size() const noexcept { return m_; }
  const std::vector<std::pair<Point, Point>>& graph() const noexcept { return graph_; }

  /// Domain measure |dom| / m.
  Rat domain_measure() const;

  /// graph(theta) is a subset of F.
  bool within(const EqRel& f) const;

 private:
  std::size_t m_;
  std::vector<std::pair<Point, Point>> graph_;  // sorted by domain point
};

/// E joined with the graphs of `links` (the relation generated by both).
EqRel join(const EqRel& e, std::span<const PartialIso> links);

}  // namespace erglab
