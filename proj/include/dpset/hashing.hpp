// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dpset/field.hpp"
#include "dpset/rng.hpp"

namespace dpset {

/// Opaque universe element; equality is byte-wise. Benchmarks use 16-byte
/// strings, but any length is accepted.
using UniverseElement = std::vector<std::uint8_t>;

/// 128-bit key for one hash function. Seeds are drawn fresh per encoding
/// and stored verbatim in the released object, so decoders reproduce the
/// same hash values.
struct HashSeed {
  std::array<std::uint8_t, 16> bytes{};

  bool operator==(const HashSeed&) const = default;
  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }
};

/// Deterministic word stream keyed by (seed, input): successive BLAKE2b
/// blocks of seed-keyed hashes of input || block counter. Stands in for the
/// fully random hash functions of the analysis; with a PRF in their place
/// the privacy guarantee is computational.
class PrfStream {
 public:
  PrfStream(const HashSeed& seed, std::span<const std::uint8_t> input);

  std::uint16_t next_u16();
  std::uint32_t next_u32();

  /// Uniform draw from [0, n). Rejection-sampled on fixed-width words; no
  /// modulo bias.
  std::uint32_t uniform_below(std::uint32_t n);

 private:
  void refill();

  alignas(64) std::array<std::uint8_t, 384> midstate_;  // opaque keyed-hash state
  std::uint64_t block_ = 0;
  std::array<std::uint8_t, 64> buffer_;
  std::size_t pos_ = sizeof(buffer_);
};

/// h: U -> F. Deterministic in (seed, u, field); uniform on [0, q) over
/// random seeds.
felem hash_to_field(const HashSeed& seed, std::span<const std::uint8_t> u,
                    const Field& field);

/// h1: U -> [0, m - w]. The starting column of u's band; 0-based. Requires
/// 1 <= w <= m.
std::uint32_t hash_band_start(const HashSeed& seed, std::span<const std::uint8_t> u,
                              std::uint32_t m, std::uint32_t w);

/// h2: U -> F^w. The band's coefficients; coordinates are independent and
/// uniform, zeros allowed anywhere.
std::vector<felem> hash_band_values(const HashSeed& seed,
                                    std::span<const std::uint8_t> u, std::uint32_t w,
                                    const Field& field);

HashSeed seed_from_rng(RngStream& rng);

/// Seed from the operating system's entropy source.
HashSeed seed_from_entropy();

}  // namespace dpset
