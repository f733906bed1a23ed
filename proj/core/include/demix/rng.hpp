#pragma once

#include <cstdint>
#include <optional>

namespace demix {

/// Splittable counter-based generator (SplitMix64 output function over a
/// keyed counter). Value-semantic: copying a state copies its stream, and
/// child streams are a pure function of (key, label), so per-trial streams
/// are reproducible independent of scheduling.
class RngState {
 public:
  explicit RngState(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

  /// Independent stream derived from this state's key and `label`.
  /// Does not advance this stream.
  [[nodiscard]] RngState child(std::uint64_t label) const noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  /// Uniform integer on [0, n); n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;
  /// Fair coin returning ±1.
  double sign() noexcept { return (next_u64() >> 63) != 0 ? 1.0 : -1.0; }
  /// Standard normal via Box–Muller; the second variate is cached.
  double normal() noexcept;

  // Satisfies UniformRandomBitGenerator.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

  friend bool operator==(const RngState&, const RngState&) = default;

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  struct Raw {};
  RngState(Raw, std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

}  // namespace demix
