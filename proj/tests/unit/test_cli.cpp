#include "erglab/cli.hpp"
#include "erglab/generate.hpp"
#include "erglab/instance.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace erglab;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "erglab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_temp(const std::string& name, const json& doc) {
  auto path = std::filesystem::temp_directory_path() / ("erglab_test_" + name + ".json");
  std::ofstream(path) << doc.dump(2);
  return path.string();
}

}  // namespace

TEST_CASE("phi report on six points") {
  std::string path = write_temp("cyclic6", generate("cyclic", {6}, 0));
  Run r = run({"--instance", path, "phi", "--relation", "E"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["tool_version"] == kToolVersion);
  CHECK(j["instance_hash"].get<std::string>().size() == 16);
  CHECK(j["phi"]["g^0"] == "1");
  CHECK(j["phi"]["g^1"] == "0");
  CHECK(j["phi"]["g^2"] == "1");

  Run p = run({"--instance", path, "percolate"});
  REQUIRE(p.code == kExitOk);
  json pj = json::parse(p.out);
  CHECK(pj["phi_E"]["g^1"] == "2/3");
  CHECK(pj["connection"]["g^3"] == "0");
}

TEST_CASE("invalid input exits with 1") {
  CHECK(run({"--instance", "/nonexistent.json", "phi", "--relation", "E"}).code == kExitInvalid);
  CHECK(run({"percolate", "--model", "Z2", "--radius", "3", "--p", "0.5"}).code == kExitInvalid);  // no seed
  CHECK(run({"generate", "--kind", "torus"}).code == kExitInvalid);
  CHECK(run({"kazhdan", "amplify", "--k", "2", "--eps", "3", "--n", "1"}).code == kExitInvalid);
  CHECK(run({"no-such-command"}).code == kExitInvalid);
  Run caps = run({"--seed", "1", "percolate", "--model", "Z2", "--radius", "100000", "--p", "0.5"});
  CHECK(caps.code == kExitInvalid);
  CHECK_FALSE(caps.err.empty());
}

TEST_CASE("a failing check exits with 2 and still reports") {
  // Q = {identity} with eps = 1.4 claims far more than this action supports.
  std::string path = write_temp("cyclic6b", generate("cyclic", {6}, 0));
  Run r = run({"--instance", path, "kazhdan", "cor54", "--relation", "E", "--q", "g^0", "--eps", "1.4"});
  CHECK(r.code == kExitCheckFailed);
  json j = json::parse(r.out);
  CHECK(j["verdict"] == "FAIL");
}

TEST_CASE("generate is reproducible") {
  Run a = run({"--seed", "7", "generate", "--kind", "random_pair", "--size", "10"});
  Run b = run({"--seed", "7", "generate", "--kind", "random_pair", "--size", "10"});
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(run({"--seed", "8", "generate", "--kind", "random_pair", "--size", "10"}).out != a.out);
  CHECK(run({"generate", "--kind", "random_pair", "--size", "10"}).code == kExitInvalid);
}

TEST_CASE("sweep output does not depend on workers") {
  std::vector<std::string> base{"--seed", "3", "--format", "csv", "sweep", "--model", "F2", "--radius", "5",
                                "--trials", "40", "--pmin", "0.2", "--pmax", "0.6", "--steps", "9"};
  std::vector<std::string> w1 = base, w3 = base;
  w1.insert(w1.begin(), {"--workers", "1"});
  w3.insert(w3.begin(), {"--workers", "3"});
  Run a = run(w1), b = run(w3);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("p,trials,theta_hat,theta_se,boundary_clusters_mean", 0) == 0);
}

TEST_CASE("kazhdan calculators") {
  json a = json::parse(run({"kazhdan", "amplify", "--k", "3", "--eps", "0.1", "--n", "2"}).out);
  CHECK(a["value"].get<double>() == doctest::Approx(0.08161563031129995));
  json b = json::parse(run({"kazhdan", "bounds", "--selector", "cost_a", "--n", "2", "--eps2", "1"}).out);
  CHECK(b["exact"] == "4/3");
  std::string z4 = write_temp("z4", generate("cyclic", {4}, 0));
  json n = json::parse(run({"--instance", z4, "kazhdan", "avgnorm", "--rep", "Z", "--q", "g,g^-1", "--kind", "regular"}).out);
  CHECK(n["norm"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("verify runs a small suite") {
  Run r = run({"--seed", "1", "verify", "--suite", "tau_character", "--count", "10"});
  CHECK(r.code == kExitOk);
  CHECK(json::parse(r.out)["verdict"] == "PASS");
}
