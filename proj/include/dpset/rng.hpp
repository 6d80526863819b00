// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace dpset {

/// Deterministic randomness stream used by encodes and the benchmark
/// harness. All integer draws use threshold rejection, so results are
/// identical on every platform (std::mt19937_64 is fully specified by the
/// standard; the std distributions are not, so we avoid them).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Stream derived from (master, index); used to give every trial its own
  /// independent, reproducible randomness.
  static RngStream derived(std::uint64_t master, std::uint64_t index) {
    return RngStream(mix64(mix64(master) + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform draw from [0, n). Exact: rejects the biased prefix of the
  /// 64-bit range instead of reducing it.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    std::uint64_t word = engine_();
    while (word < threshold) word = engine_();
    return word % n;
  }

  /// True with probability p, using a 53-bit draw.
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    const auto cut = static_cast<std::uint64_t>(p * 9007199254740992.0);  // p * 2^53
    return (engine_() >> 11) < cut;
  }

  std::array<std::uint8_t, 16> next_bytes16() {
    std::array<std::uint8_t, 16> out{};
    for (int half = 0; half < 2; ++half) {
      std::uint64_t word = engine_();
      for (int i = 0; i < 8; ++i) {
        out[static_cast<std::size_t>(8 * half + i)] =
            static_cast<std::uint8_t>(word >> (8 * i));
      }
    }
    return out;
  }

 private:
  static std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace dpset
