#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spectral {

/// Deterministic random source. mt19937_64 output is fully specified by the
/// standard and the mappings below avoid the implementation-defined library
/// distributions, so streams are reproducible across platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {  // in [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double exponential() { return -std::log1p(-uniform01()); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double k = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * k;
    have_spare_ = true;
    return u * k;
  }

  std::uint64_t next_u64() { return engine_(); }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spectral
