#include "erglab/random.hpp"

namespace erglab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

inline double to_unit(std::uint32_t x) { return (static_cast<double>(x) + 0.5) * 0x1p-32; }

Philox4x32::Counter block(std::uint64_t seed, std::uint64_t stream, std::uint64_t b) {
  Philox4x32::Counter ctr{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Philox4x32::generate(ctr, key);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter c, Key k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMul0, c[0], lo0, hi0);
    mulhilo(kMul1, c[2], lo1, hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return to_unit(block(seed, stream, index / 4)[index % 4]);
}

void counter_uniforms(std::uint64_t seed, std::uint64_t stream, std::vector<double>& out) {
  std::size_t n = out.size();
  for (std::size_t b = 0; b * 4 < n; ++b) {
    auto r = block(seed, stream, b);
    for (std::size_t j = 0; j < 4 && b * 4 + j < n; ++j) out[b * 4 + j] = to_unit(r[j]);
  }
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  // Rejection sampling on the top of the range keeps the draw exactly uniform.
  std::uint64_t limit = n == 0 ? 0 : (~std::uint64_t{0} - n + 1) % n;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= limit) return r % n;
  }
}

}  // namespace erglab
