#include "erglab/errors.hpp"
#include "erglab/generate.hpp"
#include "erglab/instance.hpp"

#include "doctest.h"

using namespace erglab;

namespace {

json six_point() {
  return json::parse(R"({"space": {"size": 6},
    "perms": {"g": [1,2,3,4,5,0]},
    "relations": {"E": [[0,2,4],[1,3,5]]},
    "actions": {"Z": {"generators": ["g"], "inverses": {}}},
    "percolation": {"action": "Z", "a_sets": {"g": [0,1,3,4]}}})");
}

}  // namespace

TEST_CASE("a minimal document parses") {
  Instance in = parse_instance(six_point());
  CHECK(in.size == 6);
  CHECK(in.perm("g")(5) == 0);
  CHECK(in.relation("E").num_classes() == 2);
  const FinAction& z = in.action("Z");
  REQUIRE(z.generators().size() == 2);
  CHECK(z.generators()[1].label == "g^-1");
  CHECK(z.generators()[1].perm == in.perm("g").inverse());
  REQUIRE(in.percolation.has_value());
  CHECK(in.percolation->a_sets.at("g") == std::vector<Point>{0, 1, 3, 4});
  CHECK_THROWS_AS(in.perm("h"), ValidationError);
  CHECK_THROWS_AS(in.relation("F"), ValidationError);
  CHECK_THROWS_AS(in.action("Y"), ValidationError);
}

TEST_CASE("involutions and explicit inverse pairs") {
  json doc = json::parse(R"({"space": {"size": 4},
    "perms": {"s": [1,0,2,3], "r": [1,2,3,0], "ri": [3,0,1,2]},
    "actions": {"A": {"generators": ["s", "r", "ri"], "inverses": {"r": "ri"}}}})");
  Instance in = parse_instance(doc);
  auto gens = in.action("A").generators();
  REQUIRE(gens.size() == 3);
  CHECK(gens[0].inverse == 0);
  CHECK(gens[1].inverse == 2);
  CHECK(gens[2].inverse == 1);
}

TEST_CASE("malformed documents are rejected") {
  const char* bad[] = {
      R"({})",
      R"({"space": {"size": 0}})",
      R"({"space": {"size": 3}, "perms": {"g": [0,0,1]}})",
      R"({"space": {"size": 3}, "perms": {"g": [0,1]}})",
      R"({"space": {"size": 3}, "relations": {"E": [[0,1],[1,2]]}})",
      R"({"space": {"size": 3}, "relations": {"E": [[0,1]]}})",
      R"({"space": {"size": 3}, "perms": {"g": [1,2,0]}, "actions": {"A": {"generators": ["h"]}}})",
      R"({"space": {"size": 3}, "perms": {"g": [1,2,0], "h": [1,2,0]},
          "actions": {"A": {"generators": ["g", "h"], "inverses": {"g": "h"}}}})",
      R"({"space": {"size": 3}, "perms": {"g": [1,2,0]}, "actions": {"A": {"generators": ["g"]}},
          "percolation": {"action": "B", "a_sets": {}}})",
      R"({"space": {"size": "three"}})",
  };
  for (const char* text : bad) CHECK_THROWS_AS(parse_instance(json::parse(text)), ValidationError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/instance.json"), ValidationError);
}

TEST_CASE("hashes are stable and sensitive") {
  json a = six_point();
  std::string h = instance_hash(a);
  CHECK(h.size() == 16);
  CHECK(h == instance_hash(six_point()));
  json b = a;
  b["perms"]["g"][0] = 5;
  b["perms"]["g"][5] = 1;
  CHECK(instance_hash(b) != h);
  // FNV-1a of the empty object text "{}".
  CHECK(instance_hash(json::object()) == "08f44b07b5901a25");
  json hdr = report_header(7, h);
  CHECK(hdr["tool_version"] == kToolVersion);
  CHECK(hdr["seed"] == 7);
  CHECK(hdr["instance_hash"] == h);
}

TEST_CASE("generated documents parse") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance p = parse_instance(generate("random_pair", {4 + seed % 5}, seed));
    CHECK(p.relation("E").refines(p.relation("F")));
    Instance c = parse_instance(generate("coinduce_ready", {}, seed));
    CHECK(c.coinduce.has_value());
  }
  CHECK(generate("random_pair", {9}, 3) == generate("random_pair", {9}, 3));
  Instance cy = parse_instance(generate("cyclic", {6}, 0));
  CHECK(cy.relation("E").num_classes() == 2);
  CHECK(cy.percolation->a_sets.at("g") == std::vector<Point>{0, 1, 3, 4});
  CHECK(cy.perm("g") == parse_instance(six_point()).perm("g"));
  CHECK(cy.relation("E").classes() == parse_instance(six_point()).relation("E").classes());
  Instance pr = parse_instance(generate("product", {3, 4}, 0));
  CHECK(pr.size == 12);
  Instance cr = parse_instance(generate("coinduce_ready", {4, 2}, 0));
  CHECK(cr.coinduce->target.size == 2);
  CHECK_THROWS_AS(generate("torus", {}, 0), ValidationError);
}

TEST_CASE("rationals and relations serialize canonically") {
  CHECK(to_json(ratio(2, 4)) == "1/2");
  CHECK(to_json(Rat(3)) == "3");
  CHECK(to_json(EqRel::from_classes(4, {{2, 0}, {1}, {3}})) == json::parse("[[0,2],[1],[3]]"));
  CHECK(to_json(Perm::from_cycles(3, {{0, 1}})) == json::parse("[1,0,2]"));
}
