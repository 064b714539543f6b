#pragma once

#include <cstdint>

namespace dgs {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for stream `index` under `master`. Independent of how many other
// indices are derived, so adding trials never reshuffles existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

// Counter-based generator: the n-th output is mix64(key + n * gamma), so the
// stream is identical on every platform and any stream can be split off
// without touching the parent's state. Gaussians come from Box-Muller on top
// of the uniform stream rather than from <random> distributions, whose output
// is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(derive_seed(seed, stream)) {}

  std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * kGamma); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  double normal() noexcept;

  // Child stream keyed by (this stream's key, id); does not advance *this.
  Rng split(std::uint64_t id) const noexcept { return Rng(key_, id); }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dgs
