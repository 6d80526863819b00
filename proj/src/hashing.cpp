// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#include "dpset/hashing.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>
#include <string>

namespace dpset {

namespace {

static_assert(sizeof(crypto_generichash_state) <= 384);
static_assert(alignof(crypto_generichash_state) <= 64);

const bool kSodiumReady = [] {
  return sodium_init() >= 0;
}();

}  // namespace

PrfStream::PrfStream(const HashSeed& seed, std::span<const std::uint8_t> input) {
  if (!kSodiumReady) throw std::runtime_error("libsodium initialization failed");
  auto* state = reinterpret_cast<crypto_generichash_state*>(midstate_.data());
  crypto_generichash_init(state, seed.bytes.data(), seed.bytes.size(),
                          crypto_generichash_BYTES_MAX);
  crypto_generichash_update(state, input.data(), input.size());
}

void PrfStream::refill() {
  alignas(64) crypto_generichash_state state;
  std::memcpy(&state, midstate_.data(), sizeof(state));
  std::uint8_t counter[8];
  for (int i = 0; i < 8; ++i) counter[i] = static_cast<std::uint8_t>(block_ >> (8 * i));
  crypto_generichash_update(&state, counter, sizeof(counter));
  crypto_generichash_final(&state, buffer_.data(), buffer_.size());
  ++block_;
  pos_ = 0;
}

std::uint16_t PrfStream::next_u16() {
  if (pos_ + 2 > buffer_.size()) refill();
  const std::uint16_t value = static_cast<std::uint16_t>(
      buffer_[pos_] | (static_cast<std::uint16_t>(buffer_[pos_ + 1]) << 8));
  pos_ += 2;
  return value;
}

std::uint32_t PrfStream::next_u32() {
  const std::uint32_t low = next_u16();
  return low | (static_cast<std::uint32_t>(next_u16()) << 16);
}

std::uint32_t PrfStream::uniform_below(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below range must be nonempty");
  // Accept words in [t, 2^bits) where t = 2^bits mod n: a contiguous run of
  // a multiple of n values, so the residue is exactly uniform. Field-sized
  // ranges take the 16-bit path to halve the stream bytes consumed.
  if (n <= (1u << 16)) {
    const std::uint32_t threshold = (1u << 16) % n;
    std::uint32_t word = next_u16();
    while (word < threshold) word = next_u16();
    return word % n;
  }
  const std::uint32_t threshold =
      static_cast<std::uint32_t>((1ULL << 32) % n);
  std::uint32_t word = next_u32();
  while (word < threshold) word = next_u32();
  return word % n;
}

felem hash_to_field(const HashSeed& seed, std::span<const std::uint8_t> u,
                    const Field& field) {
  PrfStream stream(seed, u);
  return static_cast<felem>(stream.uniform_below(field.order()));
}

std::uint32_t hash_band_start(const HashSeed& seed, std::span<const std::uint8_t> u,
                              std::uint32_t m, std::uint32_t w) {
  if (w < 1 || w > m) {
    throw std::invalid_argument("band width " + std::to_string(w) +
                                " out of range for m = " + std::to_string(m));
  }
  PrfStream stream(seed, u);
  return stream.uniform_below(m - w + 1);
}

std::vector<felem> hash_band_values(const HashSeed& seed,
                                    std::span<const std::uint8_t> u, std::uint32_t w,
                                    const Field& field) {
  if (w < 1) throw std::invalid_argument("band width must be at least 1");
  PrfStream stream(seed, u);
  std::vector<felem> values(w);
  const std::uint32_t q = field.order();
  for (auto& v : values) v = static_cast<felem>(stream.uniform_below(q));
  return values;
}

HashSeed seed_from_rng(RngStream& rng) {
  HashSeed seed;
  seed.bytes = rng.next_bytes16();
  return seed;
}

HashSeed seed_from_entropy() {
  if (!kSodiumReady) throw std::runtime_error("libsodium initialization failed");
  HashSeed seed;
  randombytes_buf(seed.bytes.data(), seed.bytes.size());
  return seed;
}

}  // namespace dpset
