#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace erglab {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Pure function of (counter, key); no state, so any partitioning of the
/// counter space across workers reproduces the same stream.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Uniform in (0,1) for item `index` of stream `stream` under `seed`.
/// Four consecutive indices share one Philox block.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Fills `out` with counter_uniform(seed, stream, i) for i in [0, out.size()).
void counter_uniforms(std::uint64_t seed, std::uint64_t stream, std::vector<double>& out);

/// Sequential generator for instance generation; uniform_below is implemented
/// here (not via std distributions) so reports are identical across toolchains.
using Rng = std::mt19937_64;

std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace erglab
