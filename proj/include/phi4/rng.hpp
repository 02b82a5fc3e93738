#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace phi4 {

// Philox4x32-10 counter-based generator (Salmon et al. 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

// Master seed; every draw is a pure function of (seed, sample, mode, step).
struct NoiseSeed {
  std::uint64_t master = 0;
};

// Two independent standard normals for one (sample, mode, step) counter.
std::pair<double, double> normal_pair(const NoiseSeed& seed, std::uint64_t sample, std::uint32_t mode,
                                      std::uint32_t step);

}  // namespace phi4
