#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace dualstop {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

// Identifies an independent noise source. Distinct streams under the same
// seed never share a counter.
struct NoiseKey {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;

  bool operator==(const NoiseKey&) const = default;
};

inline constexpr std::uint32_t kMaxStream = (1u << 24) - 1;

// Two independent standard normals for (path, step, block). Block b covers
// Brownian dimensions 2b and 2b+1.
std::pair<double, double> gaussian_pair(const NoiseKey& key, std::uint64_t path,
                                        std::uint32_t step, std::uint32_t block);

// Maps 64 random bits to a double in the open interval (0, 1).
inline double open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace dualstop
