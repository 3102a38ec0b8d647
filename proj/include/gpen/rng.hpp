#pragma once

#include <cmath>
#include <cstdint>

#include "gpen/types.hpp"

namespace gpen {

/// Splittable counter-based generator. A stream is fully determined by
/// (seed, stream); draws are a pure function of the counter, so independent
/// streams can be handed to parallel workers and results do not depend on
/// scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream + 0x6a09e667f3bcc909ULL))) {}

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
    return mix(z);
  }

  /// Uniform in (0,1), never exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Rademacher sign, +1 or -1.
  double sign() { return (next_u64() & 1) ? 1.0 : -1.0; }

  Vec normal_vec(Index n) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Vec unit_vec(Index n) {
    Vec v = normal_vec(n);
    double nv = v.norm();
    while (nv < 1e-300) {
      v = normal_vec(n);
      nv = v.norm();
    }
    return v / nv;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gpen
