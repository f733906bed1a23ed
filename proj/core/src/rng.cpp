#include "demix/rng.hpp"

#include <cmath>
#include <numbers>

namespace demix {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
__extension__ using u128 = unsigned __int128;
}  // namespace

RngState RngState::child(std::uint64_t label) const noexcept {
  return RngState(Raw{}, mix(key_ ^ mix(label * kGolden + 0x243f6a8885a308d3ULL)));
}

std::uint64_t RngState::next_u64() noexcept {
  ++counter_;
  return mix(key_ + counter_ * kGolden);
}

double RngState::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngState::uniform_index(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection of the biased low region.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const u128 m = static_cast<u128>(next_u64()) * n;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

double RngState::normal() noexcept {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(angle);
  return r * std::cos(angle);
}

}  // namespace demix
