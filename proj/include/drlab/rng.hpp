#pragma once

#include <cstdint>

namespace drlab {

// SplitMix64 finalizer. Stateless, platform-independent.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so parallel replications keyed by stream index
// produce identical values regardless of execution order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(mix64(seed) ^ mix64(0x5851f42d4c957f2dULL * (stream + 1)))) {}

  std::uint64_t u64_at(std::uint64_t counter) const {
    return mix64(key_ ^ (counter * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit_at(std::uint64_t counter) const {
    return static_cast<double>(u64_at(counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return u64_at(counter_++); }
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  int next_sign() { return (next_u64() & 1u) ? 1 : -1; }

  void seek(std::uint64_t counter) { counter_ = counter; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace drlab
