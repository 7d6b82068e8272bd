#include "erglab/random.hpp"

#include "doctest.h"

#include <set>

using namespace erglab;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter uniforms lie strictly inside (0,1) and are pure functions") {
  for (std::uint64_t i = 0; i < 4096; ++i) {
    double u = counter_uniform(7, 3, i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(u == counter_uniform(7, 3, i));
  }
  CHECK(counter_uniform(7, 3, 0) != counter_uniform(7, 4, 0));
  CHECK(counter_uniform(7, 3, 0) != counter_uniform(8, 3, 0));
}

TEST_CASE("bulk fill matches item-wise draws") {
  std::vector<double> v(1001);
  counter_uniforms(11, 5, v);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == counter_uniform(11, 5, i));
}

TEST_CASE("uniform_below stays in range and hits every value") {
  Rng rng(1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    auto x = uniform_below(rng, 7);
    CHECK(x < 7);
    seen.insert(x);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("uniform mean is close to one half") {
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += counter_uniform(3, 0, static_cast<std::uint64_t>(i));
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}
