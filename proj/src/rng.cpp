#include "phi4/rng.hpp"

#include <cmath>
#include <numbers>

namespace phi4 {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  constexpr std::uint64_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = M0 * c[0];
    const std::uint64_t p1 = M1 * c[2];
    c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1), std::uint32_t(p0 >> 32) ^ c[3] ^ k[1],
         std::uint32_t(p0)};
    k[0] += W0;
    k[1] += W1;
  }
  return c;
}

std::pair<double, double> normal_pair(const NoiseSeed& seed, std::uint64_t sample, std::uint32_t mode,
                                      std::uint32_t step) {
  const auto r = philox4x32({mode, step, std::uint32_t(sample), std::uint32_t(sample >> 32)},
                            {std::uint32_t(seed.master), std::uint32_t(seed.master >> 32)});
  // 53-bit uniforms in (0, 1).
  const std::uint64_t a = ((std::uint64_t(r[0]) << 32) | r[1]) >> 11;
  const std::uint64_t b = ((std::uint64_t(r[2]) << 32) | r[3]) >> 11;
  const double u1 = (double(a) + 0.5) * 0x1.0p-53;
  const double u2 = (double(b) + 0.5) * 0x1.0p-53;
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  return {rad * std::cos(th), rad * std::sin(th)};
}

}  // namespace phi4
