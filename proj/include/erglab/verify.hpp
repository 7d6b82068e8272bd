#pragma once

// Randomized verification suites. Instance i of a run draws from its own
// generator seeded by derive_seed(seed, i), so results do not depend on the
// worker count or on scheduling.

#include "erglab/caps.hpp"
#include "erglab/instance.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace erglab {

struct SuiteOptions {
  std::size_t count = 100;
  std::size_t max_size = 8;  // largest space size generated
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  Caps caps;
};

struct SuiteResult {
  std::string suite;
  std::size_t instances = 0;
  std::size_t checked = 0;  // instances where the property was not vacuous
  std::size_t passed = 0;
  std::size_t failure_count = 0;
  std::vector<std::string> failures;  // first few messages, by instance index
  std::map<std::string, std::int64_t> counters;
  bool ok() const { return failure_count == 0; }
};

/// definiteness, prop11, tau_character, cocycle, thm25, thm27,
/// coinduce_identities, phi_correspondence, length, kazhdan_forms.
const std::vector<std::string>& suite_names();

/// Throws ValidationError for an unknown suite or bad options.
SuiteResult run_suite(std::string_view name, const SuiteOptions& options);

json to_json(const SuiteResult& r);

}  // namespace erglab
