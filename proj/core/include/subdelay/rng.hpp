#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace subdelay {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for one (cell, replication) pair: three chained SplitMix64 rounds,
/// each folding in one input. Pure integer arithmetic, so the value is the
/// same on every platform.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t cell_index,
                                    std::uint64_t replication_index) noexcept {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ mix64(cell_index ^ 0x243f6a8885a308d3ULL));
  h = mix64(h ^ mix64(replication_index ^ 0x13198a2e03707344ULL));
  return h;
}

/// Random source for simulations.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std:: distributions are not (libstdc++ and libc++ differ),
/// so the variates below are derived from raw engine output directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unit-rate exponential.
  double exponential() { return -std::log1p(-uniform()); }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace subdelay
