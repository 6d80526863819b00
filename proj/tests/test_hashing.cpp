// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "dpset/hashing.hpp"
#include "support/oracles.hpp"

using namespace dpset;

namespace {

UniverseElement element_from(RngStream& rng) {
  const auto bytes = rng.next_bytes16();
  return UniverseElement(bytes.begin(), bytes.end());
}

HashSeed seed_of(std::uint8_t fill) {
  HashSeed s;
  s.bytes.fill(fill);
  return s;
}

}  // namespace

TEST_CASE("hash operations are pure functions of their inputs") {
  const Field f5 = Field::prime(5);
  const HashSeed seed = seed_of(0xA1);
  RngStream rng(3);
  for (int i = 0; i < 50; ++i) {
    const UniverseElement u = element_from(rng);
    CHECK(hash_to_field(seed, u, f5) == hash_to_field(seed, u, f5));
    CHECK(hash_band_start(seed, u, 100, 8) == hash_band_start(seed, u, 100, 8));
    CHECK(hash_band_values(seed, u, 12, f5) == hash_band_values(seed, u, 12, f5));
  }
}

TEST_CASE("hash_to_field is uniform over fresh inputs") {
  const Field f3 = Field::prime(3);
  const HashSeed seed = seed_of(0x55);
  RngStream rng(17);
  std::vector<std::uint64_t> counts(3, 0);
  for (int i = 0; i < 100000; ++i) {
    ++counts[hash_to_field(seed, element_from(rng), f3)];
  }
  for (const auto c : counts) {
    const double freq = static_cast<double>(c) / 100000.0;
    CHECK(freq >= 0.32);
    CHECK(freq <= 0.34);
  }
  CHECK(testing::chi_square_uniform(counts) < testing::chi_square_99(2));
}

TEST_CASE("independent seeds collide at the inverse field order") {
  const Field f5 = Field::prime(5);
  RngStream rng(23);
  const UniverseElement u = element_from(rng);
  std::uint64_t agreements = 0;
  const int pairs = 10000;
  for (int i = 0; i < pairs; ++i) {
    HashSeed a, b;
    a.bytes = rng.next_bytes16();
    b.bytes = rng.next_bytes16();
    if (hash_to_field(a, u, f5) == hash_to_field(b, u, f5)) ++agreements;
  }
  // Expectation 2000, sigma = 40; allow 4 sigma.
  CHECK(agreements >= 1840);
  CHECK(agreements <= 2160);
}

TEST_CASE("hash_band_start covers exactly its range") {
  const HashSeed seed = seed_of(0x10);
  RngStream rng(29);

  SUBCASE("full-width band is forced to the first column") {
    for (int i = 0; i < 100; ++i) {
      CHECK(hash_band_start(seed, element_from(rng), 7, 7) == 0);
    }
  }

  SUBCASE("start stays within [0, m - w]") {
    for (int i = 0; i < 1000; ++i) {
      CHECK(hash_band_start(seed, element_from(rng), 10, 3) <= 7);
    }
  }

  SUBCASE("uniform over the 91 legal starts") {
    std::vector<std::uint64_t> counts(91, 0);
    for (int i = 0; i < 100000; ++i) {
      ++counts[hash_band_start(seed, element_from(rng), 100, 10)];
    }
    CHECK(testing::chi_square_uniform(counts) < testing::chi_square_99(90));
  }

  SUBCASE("band wider than the matrix is rejected") {
    CHECK_THROWS_AS(hash_band_start(seed, UniverseElement{1, 2}, 4, 5),
                    std::invalid_argument);
  }
}

TEST_CASE("hash_band_values has the right shape and zero-rate") {
  const Field f2 = Field::prime(2);
  const HashSeed seed = seed_of(0x77);
  RngStream rng(31);

  for (std::uint32_t w : {1u, 5u, 64u}) {
    CHECK(hash_band_values(seed, element_from(rng), w, f2).size() == w);
  }

  // Over F_2 with w = 8 the all-zero band has probability 2^-8.
  std::uint64_t all_zero = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto band = hash_band_values(seed, element_from(rng), 8, f2);
    bool zero = true;
    for (const auto v : band) zero = zero && v == 0;
    all_zero += zero;
  }
  // Expectation 390.6, sigma = 19.8; allow 4 sigma.
  CHECK(all_zero >= 311);
  CHECK(all_zero <= 470);
}

TEST_CASE("single-byte edits change hash outputs at the blind-guess rate") {
  const Field f7 = Field::prime(7);
  const HashSeed seed = seed_of(0xC3);
  RngStream rng(37);
  std::uint64_t unchanged = 0;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    UniverseElement u = element_from(rng);
    const felem before = hash_to_field(seed, u, f7);
    const auto position = static_cast<std::size_t>(rng.uniform_below(u.size()));
    u[position] ^= static_cast<std::uint8_t>(1 + rng.uniform_below(255));
    if (hash_to_field(seed, u, f7) == before) ++unchanged;
  }
  // Agreement only by chance: expectation 1428.6, sigma = 35; allow 4 sigma.
  CHECK(unchanged >= 1288);
  CHECK(unchanged <= 1570);
}

TEST_CASE("seed sources produce distinct seeds") {
  RngStream rng(41);
  CHECK(seed_from_rng(rng).bytes != seed_from_rng(rng).bytes);
  CHECK(seed_from_entropy().bytes != seed_from_entropy().bytes);
}

TEST_CASE("prf stream rejects out-of-range bounds") {
  PrfStream stream(seed_of(1), UniverseElement{9});
  CHECK_THROWS_AS(stream.uniform_below(0), std::invalid_argument);
  CHECK_THROWS_AS(stream.uniform_below((1u << 16) + 1), std::invalid_argument);
  CHECK(stream.uniform_below(1) == 0);
}
