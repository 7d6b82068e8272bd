#include "erglab/instance.hpp"

#include "erglab/errors.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace erglab {

const Perm& Instance::perm(const std::string& name) const {
  auto it = perms.find(name);
  if (it == perms.end()) throw ValidationError("no perm named '" + name + "'");
  return it->second;
}

const EqRel& Instance::relation(const std::string& name) const {
  auto it = relations.find(name);
  if (it == relations.end()) throw ValidationError("no relation named '" + name + "'");
  return it->second;
}

const FinAction& Instance::action(const std::string& name) const {
  auto it = actions.find(name);
  if (it == actions.end()) throw ValidationError("no action named '" + name + "'");
  return it->second;
}

namespace {

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(where + ": missing '" + key + "'");
  return obj.at(key);
}

Point as_point(const json& v, std::size_t m, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0 || static_cast<std::size_t>(v.get<long long>()) >= m)
    throw ValidationError(where + ": point out of range");
  return static_cast<Point>(v.get<long long>());
}

std::vector<Point> as_points(const json& v, std::size_t m, const std::string& where) {
  if (!v.is_array()) throw ValidationError(where + ": expected an array of points");
  std::vector<Point> out;
  for (const auto& x : v) out.push_back(as_point(x, m, where));
  return out;
}

Perm as_perm(const json& v, std::size_t m, const std::string& where) {
  auto img = as_points(v, m, where);
  if (img.size() != m) throw ValidationError(where + ": image array must have length " + std::to_string(m));
  try {
    return Perm(std::move(img));
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

FinAction parse_action(const json& spec, const std::map<std::string, Perm>& perms, std::size_t m,
                       const std::string& where) {
  const json& gens = member(spec, "generators", where);
  if (!gens.is_array() || gens.empty()) throw ValidationError(where + ": generators must be a non-empty array");
  std::vector<Generator> out;
  for (const auto& g : gens) {
    if (!g.is_string()) throw ValidationError(where + ": generator names must be strings");
    auto it = perms.find(g.get<std::string>());
    if (it == perms.end()) throw ValidationError(where + ": unknown perm '" + g.get<std::string>() + "'");
    out.push_back({it->first, it->second, static_cast<std::size_t>(-1)});
  }
  auto index_of = [&](const std::string& label) -> std::size_t {
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i].label == label) return i;
    throw ValidationError(where + ": inverse names unknown generator '" + label + "'");
  };
  if (spec.contains("inverses")) {
    for (const auto& [a, b] : spec.at("inverses").items()) {
      if (!b.is_string()) throw ValidationError(where + ": inverse entries must be strings");
      std::size_t i = index_of(a), j = index_of(b.get<std::string>());
      if ((out[i].inverse != static_cast<std::size_t>(-1) && out[i].inverse != j) ||
          (out[j].inverse != static_cast<std::size_t>(-1) && out[j].inverse != i))
        throw ValidationError(where + ": conflicting inverse pairing for '" + a + "'");
      out[i].inverse = j;
      out[j].inverse = i;
    }
  }
  std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (out[i].inverse != static_cast<std::size_t>(-1)) continue;
    if ((out[i].perm * out[i].perm).is_identity()) {
      out[i].inverse = i;
    } else {
      out[i].inverse = out.size();
      out.push_back({out[i].label + "^-1", out[i].perm.inverse(), i});
    }
  }
  try {
    return FinAction(m, std::move(out));
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

std::vector<std::pair<std::string, Perm>> named_perms(const json& obj, std::size_t m, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  std::vector<std::pair<std::string, Perm>> out;
  for (const auto& [k, v] : obj.items()) out.emplace_back(k, as_perm(v, m, where + "." + k));
  return out;
}

}  // namespace

Instance parse_instance(const json& doc) {
  Instance inst;
  const json& space = member(doc, "space", "instance");
  const json& size = member(space, "size", "space");
  if (!size.is_number_integer() || size.get<long long>() < 1) throw ValidationError("space.size must be a positive integer");
  inst.size = size.get<std::size_t>();
  std::size_t m = inst.size;

  if (doc.contains("perms"))
    for (const auto& [k, v] : doc.at("perms").items()) inst.perms.emplace(k, as_perm(v, m, "perms." + k));
  if (doc.contains("relations"))
    for (const auto& [k, v] : doc.at("relations").items()) {
      if (!v.is_array()) throw ValidationError("relations." + k + ": expected a list of classes");
      std::vector<std::vector<Point>> classes;
      for (const auto& c : v) classes.push_back(as_points(c, m, "relations." + k));
      try {
        inst.relations.emplace(k, EqRel::from_classes(m, classes));
      } catch (const ValidationError& e) {
        throw ValidationError("relations." + k + ": " + e.what());
      }
    }
  if (doc.contains("actions"))
    for (const auto& [k, v] : doc.at("actions").items()) inst.actions.emplace(k, parse_action(v, inst.perms, m, "actions." + k));

  if (doc.contains("coinduce")) {
    const json& c = doc.at("coinduce");
    CoinduceBlock blk;
    const json& a0 = member(c, "a0", "coinduce");
    blk.a0 = member(a0, "action", "coinduce.a0").get<std::string>();
    blk.assert_free = a0.value("free", true);
    blk.b0 = member(member(c, "b0", "coinduce"), "action", "coinduce.b0").get<std::string>();
    inst.action(blk.a0);
    inst.action(blk.b0);
    if (c.contains("a")) {
      const json& a = c.at("a");
      const json& ys = member(a, "size", "coinduce.a");
      if (!ys.is_number_integer() || ys.get<long long>() < 1) throw ValidationError("coinduce.a.size must be positive");
      blk.target.size = ys.get<std::size_t>();
      if (a.contains("generator_images"))
        blk.target.generator_images = named_perms(a.at("generator_images"), blk.target.size, "coinduce.a.generator_images");
      if (a.contains("images"))
        blk.target.element_images = named_perms(a.at("images"), blk.target.size, "coinduce.a.images");
    }
    if (c.contains("checks"))
      for (const auto& s : c.at("checks")) blk.checks.push_back(s.get<std::string>());
    inst.coinduce = std::move(blk);
  }
  if (doc.contains("percolation")) {
    const json& p = doc.at("percolation");
    PhiBlock blk;
    blk.action = member(p, "action", "percolation").get<std::string>();
    const FinAction& act = inst.action(blk.action);
    for (const auto& [k, v] : member(p, "a_sets", "percolation").items()) {
      if (!act.find(k)) throw ValidationError("percolation.a_sets: unknown generator '" + k + "'");
      blk.a_sets.emplace(k, as_points(v, m, "percolation.a_sets." + k));
    }
    inst.percolation = std::move(blk);
  }
  return inst;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string instance_hash(const json& doc) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json report_header(std::uint64_t seed, const std::string& hash) {
  return json{{"tool_version", kToolVersion}, {"seed", seed}, {"instance_hash", hash}};
}

json to_json(const Perm& p) { return json(std::vector<Point>(p.images().begin(), p.images().end())); }

json to_json(const EqRel& e) { return json(e.classes()); }

json to_json(const Rat& r) { return to_string(r); }

json points_json(const std::vector<Point>& pts) { return json(pts); }

}  // namespace erglab
