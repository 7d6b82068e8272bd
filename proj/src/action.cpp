#include "erglab/action.hpp"

#include "erglab/errors.hpp"

#include <deque>
#include <set>

namespace erglab {

FinAction::FinAction(std::size_t m, std::vector<Generator> generators)
    : m_(m), gens_(std::move(generators)) {
  if (m == 0) throw ValidationError("space must have at least one point");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    if (!labels.insert(g.label).second) throw ValidationError("duplicate generator label '" + g.label + "'");
    if (g.perm.size() != m) throw ValidationError("generator '" + g.label + "' has wrong degree");
    if (g.inverse >= gens_.size() || gens_[g.inverse].inverse != i)
      throw ValidationError("inverse pairing of '" + g.label + "' is not an involution");
    if (!(g.perm * gens_[g.inverse].perm).is_identity())
      throw ValidationError("'" + g.label + "' and '" + gens_[g.inverse].label + "' are not mutually inverse");
  }
}

FinAction FinAction::symmetric(std::size_t m, std::vector<std::pair<std::string, Perm>> generators) {
  std::vector<Generator> gens;
  for (auto& [label, perm] : generators) {
    if (perm.size() != m) throw ValidationError("generator '" + label + "' has wrong degree");
    std::size_t i = gens.size();
    if ((perm * perm).is_identity()) {
      gens.push_back({label, perm, i});
    } else {
      Perm inv = perm.inverse();
      gens.push_back({label, perm, i + 1});
      gens.push_back({label + "^-1", std::move(inv), i});
    }
  }
  return FinAction(m, std::move(gens));
}

std::optional<std::size_t> FinAction::find(std::string_view label) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].label == label) return i;
  return std::nullopt;
}

GroupClosure FinAction::closure(std::size_t cap) const { return GroupClosure(*this, cap); }

bool FinAction::is_free(std::size_t cap) const {
  GroupClosure g(*this, cap);
  for (std::size_t id = 1; id < g.order(); ++id)
    if (g.element(id).fixed_point_count() != 0) return false;
  return true;
}

namespace {

constexpr std::size_t dense_table_limit = 1u << 22;

}  // namespace

GroupClosure::GroupClosure(const FinAction& action, std::size_t cap) : degree_(action.space_size()) {
  auto gens = action.generators();
  auto add = [&](Perm p, std::string name) {
    if (elements_.size() >= cap) throw CapExceeded("closure", elements_.size() + 1, cap);
    index_.emplace(p, elements_.size());
    elements_.push_back(std::move(p));
    names_.push_back(std::move(name));
  };

  // A single generator pair generates a cyclic group; name its powers g^k.
  bool cyclic = !gens.empty() && (gens.size() == 1 || (gens.size() == 2 && gens[0].inverse == 1));
  if (cyclic) {
    const auto& g = gens[0];
    Perm p = Perm::identity(degree_);
    std::size_t k = 0;
    do {
      add(p, g.label + "^" + std::to_string(k++));
      p = g.perm * p;
    } while (!p.is_identity());
  } else {
    add(Perm::identity(degree_), "e");
    for (std::size_t head = 0; head < elements_.size(); ++head) {
      for (const auto& g : gens) {
        Perm q = g.perm * elements_[head];
        if (index_.count(q)) continue;
        std::string name = head == 0 ? g.label : g.label + "*" + names_[head];
        add(std::move(q), std::move(name));
      }
    }
  }

  for (const auto& g : gens) generator_ids_.push_back(index_.at(g.perm));
  inverse_.resize(order());
  for (std::size_t id = 0; id < order(); ++id) inverse_[id] = index_.at(elements_[id].inverse());

  std::size_t n = order();
  if (n * n <= dense_table_limit) {
    table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        table_[a * n + b] = static_cast<std::uint32_t>(index_.at(elements_[a] * elements_[b]));
  }
}

std::optional<std::size_t> GroupClosure::find(const Perm& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> GroupClosure::find_name(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t GroupClosure::multiply(std::size_t a, std::size_t b) const {
  std::size_t n = order();
  if (!table_.empty()) return table_[a * n + b];
  return index_.at(elements_[a] * elements_[b]);
}

}  // namespace erglab
