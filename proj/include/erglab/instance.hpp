#pragma once

// JSON instance documents and report plumbing.
//
//   {"space": {"size": 6},
//    "perms": {"g": [1,2,3,4,5,0]},
//    "relations": {"E": [[0,2,4],[1,3,5]]},
//    "actions": {"Z": {"generators": ["g"], "inverses": {}}},
//    "coinduce": {"a0": {"action": "D", "free": true}, "b0": {"action": "G"},
//                 "a": {"size": 2, "generator_images": {"d": [1,0]}},
//                 "checks": ["cocycle", "action", "thm33", "prop34"]},
//    "percolation": {"action": "Z", "a_sets": {"g": [0,1,3,4]}}}
//
// An action's generators name perms. "inverses" pairs labels explicitly;
// unpaired involutions pair with themselves and any other unpaired
// generator gets a synthesized "<label>^-1".

#include "erglab/action.hpp"
#include "erglab/coinduce.hpp"
#include "erglab/eqrel.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace erglab {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

struct CoinduceBlock {
  std::string a0, b0;
  bool assert_free = true;
  TargetSpec target;
  std::vector<std::string> checks;
};

struct PhiBlock {
  std::string action;
  std::map<std::string, std::vector<Point>> a_sets;  // generator label -> A
};

struct Instance {
  std::size_t size = 0;
  std::map<std::string, Perm> perms;
  std::map<std::string, EqRel> relations;
  std::map<std::string, FinAction> actions;
  std::optional<CoinduceBlock> coinduce;
  std::optional<PhiBlock> percolation;

  const Perm& perm(const std::string& name) const;
  const EqRel& relation(const std::string& name) const;
  const FinAction& action(const std::string& name) const;
};

/// Throws ValidationError on any schema or consistency problem.
Instance parse_instance(const json& doc);
/// Reads and parses; throws ValidationError when unreadable.
json read_json_file(const std::string& path);

/// FNV-1a (64 bit) of the canonical dump, as 16 hex digits.
std::string instance_hash(const json& doc);

/// {"tool_version", "seed", "instance_hash"} prefix shared by all reports.
json report_header(std::uint64_t seed, const std::string& hash);

json to_json(const Perm& p);
json to_json(const EqRel& e);
json to_json(const Rat& r);
json points_json(const std::vector<Point>& pts);

}  // namespace erglab
