#include "dualstop/philox.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dualstop {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::pair<double, double> gaussian_pair(const NoiseKey& key, std::uint64_t path,
                                        std::uint32_t step, std::uint32_t block) {
  if (key.stream > kMaxStream || block > 0xFF) {
    throw std::out_of_range("noise stream or block index out of range");
  }
  const PhiloxCounter ctr{step, (key.stream << 8) | block,
                          static_cast<std::uint32_t>(path),
                          static_cast<std::uint32_t>(path >> 32)};
  const PhiloxKey k{static_cast<std::uint32_t>(key.seed),
                    static_cast<std::uint32_t>(key.seed >> 32)};
  const PhiloxCounter r = philox4x32(ctr, k);
  const double u1 = open_unit((static_cast<std::uint64_t>(r[0]) << 32) | r[1]);
  const double u2 = open_unit((static_cast<std::uint64_t>(r[2]) << 32) | r[3]);
  // Box-Muller
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace dualstop
