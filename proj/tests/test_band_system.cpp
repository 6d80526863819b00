// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpset/band_system.hpp"
#include "support/oracles.hpp"

using namespace dpset;

namespace {

UniverseElement element_from(RngStream& rng) {
  const auto bytes = rng.next_bytes16();
  return UniverseElement(bytes.begin(), bytes.end());
}

HashSeed seed_from(RngStream& rng) {
  HashSeed s;
  s.bytes = rng.next_bytes16();
  return s;
}

felem row_dot(const SparseBandRow& row, const std::vector<felem>& x, const Field& f) {
  felem acc = 0;
  for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
    acc = f.add(acc, f.mul(row.coeffs[j], x[row.start + j]));
  }
  return acc;
}

testing::DenseSystem to_dense(const std::vector<SparseBandRow>& rows, std::uint32_t m) {
  testing::DenseSystem dense;
  for (const auto& row : rows) {
    std::vector<felem> full(m, 0);
    for (std::size_t j = 0; j < row.coeffs.size(); ++j) full[row.start + j] = row.coeffs[j];
    dense.rows.push_back(std::move(full));
    dense.rhs.push_back(row.rhs);
  }
  return dense;
}

std::vector<SparseBandRow> random_rows(std::uint32_t count, std::uint32_t m,
                                       std::uint32_t w, const Field& f,
                                       RngStream& rng) {
  std::vector<SparseBandRow> rows(count);
  for (auto& row : rows) {
    row.start = static_cast<std::uint32_t>(rng.uniform_below(m - w + 1));
    row.coeffs.resize(w);
    for (auto& c : row.coeffs) c = uniform_element(f, rng);
    row.rhs = uniform_element(f, rng);
  }
  return rows;
}

double bottom_rate(std::uint32_t k, std::uint32_t m, std::uint32_t w, const Field& f,
                   std::uint32_t trials, std::uint64_t seed) {
  std::uint32_t bottoms = 0;
  for (std::uint32_t t = 0; t < trials; ++t) {
    RngStream rng = RngStream::derived(seed, (static_cast<std::uint64_t>(w) << 32) | t);
    const HashSeed h1 = seed_from(rng);
    const HashSeed h2 = seed_from(rng);
    std::vector<SparseBandRow> rows;
    rows.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) {
      SparseBandRow row = row_band(element_from(rng), h1, h2, m, w, f);
      row.rhs = uniform_element(f, rng);
      rows.push_back(std::move(row));
    }
    if (!solve_band(std::move(rows), m, f, rng).solution) ++bottoms;
  }
  return static_cast<double>(bottoms) / trials;
}

}  // namespace

TEST_CASE("row_band is deterministic and respects its support contract") {
  const Field f4 = Field::binary_extension(2);
  RngStream rng(5);
  const HashSeed h1 = seed_from(rng);
  const HashSeed h2 = seed_from(rng);

  for (int i = 0; i < 200; ++i) {
    const UniverseElement u = element_from(rng);
    const SparseBandRow a = row_band(u, h1, h2, 50, 6, f4);
    const SparseBandRow b = row_band(u, h1, h2, 50, 6, f4);
    CHECK(a.start == b.start);
    CHECK(a.coeffs == b.coeffs);
    CHECK(a.coeffs.size() == 6);
    CHECK(a.start + a.coeffs.size() <= 50);
    CHECK(a.rhs == 0);
  }

  // m == w forces placement at the first column.
  for (int i = 0; i < 50; ++i) {
    CHECK(row_band(element_from(rng), h1, h2, 6, 6, f4).start == 0);
  }
}

TEST_CASE("distinct elements almost never share a row at realistic sizes") {
  // With m = 1000, w = 32, q = 4 there are (m - w + 1) * q^w > 2^66
  // possible rows, so 10^4 draws should all be distinct.
  const Field f4 = Field::binary_extension(2);
  RngStream rng(9);
  const HashSeed h1 = seed_from(rng);
  const HashSeed h2 = seed_from(rng);
  std::set<std::pair<std::uint32_t, std::vector<felem>>> rows_seen;
  for (int i = 0; i < 10000; ++i) {
    const SparseBandRow row = row_band(element_from(rng), h1, h2, 1000, 32, f4);
    rows_seen.insert({row.start, row.coeffs});
  }
  CHECK(rows_seen.size() == 10000);
}

TEST_CASE("one-equation system pins the pivot and satisfies the row") {
  const Field f3 = Field::prime(3);
  RngStream rng(13);
  for (int i = 0; i < 100; ++i) {
    SparseBandRow row;
    row.start = 0;
    row.coeffs = {1, 0};
    row.rhs = 2;
    auto outcome = solve_band({row}, 3, f3, rng);
    REQUIRE(outcome.solution.has_value());
    const auto& x = *outcome.solution;
    CHECK(x.size() == 3);
    CHECK(x[0] == 2);
    CHECK(row_dot(row, x, f3) == row.rhs);
  }
}

TEST_CASE("duplicate rows are rank deficient, consistent or not") {
  const Field f5 = Field::prime(5);
  RngStream rng(17);
  SparseBandRow row;
  row.start = 1;
  row.coeffs = {2, 3};
  row.rhs = 4;

  // Same rhs: consistent but dependent; still a failure.
  CHECK_FALSE(solve_band({row, row}, 4, f5, rng).solution.has_value());

  // Scaled copy with scaled rhs is just as dependent.
  SparseBandRow scaled = row;
  for (auto& c : scaled.coeffs) c = f5.mul(c, 2);
  scaled.rhs = f5.mul(scaled.rhs, 2);
  CHECK_FALSE(solve_band({row, scaled}, 4, f5, rng).solution.has_value());

  // A zero row with zero rhs fails too.
  SparseBandRow zero;
  zero.start = 0;
  zero.coeffs = {0, 0};
  zero.rhs = 0;
  CHECK_FALSE(solve_band({zero}, 4, f5, rng).solution.has_value());
}

TEST_CASE("solver agrees with dense elimination on solvability") {
  const Field f5 = Field::prime(5);
  RngStream rng(21);
  int bottoms = 0;
  for (int instance = 0; instance < 1000; ++instance) {
    auto rows = random_rows(5, 8, 3, f5, rng);
    const auto dense = to_dense(rows, 8);
    const bool oracle_solvable = testing::dense_solvable(dense, f5);
    auto outcome = solve_band(rows, 8, f5, rng);
    CHECK(outcome.solution.has_value() == oracle_solvable);
    if (outcome.solution) {
      for (const auto& row : rows) {
        CHECK(row_dot(row, *outcome.solution, f5) == row.rhs);
      }
    } else {
      ++bottoms;
    }
  }
  // Both branches must actually get exercised for this to mean anything.
  CHECK(bottoms > 10);
  CHECK(bottoms < 990);
}

TEST_CASE("free variable of a one-row system over F_3 is uniform") {
  const Field f3 = Field::prime(3);
  RngStream rng(25);
  std::vector<std::uint64_t> counts(3, 0);
  for (int i = 0; i < 100000; ++i) {
    SparseBandRow row;
    row.start = 0;
    row.coeffs = {1, 2};
    row.rhs = 1;
    auto outcome = solve_band({row}, 2, f3, rng);
    REQUIRE(outcome.solution.has_value());
    const auto& x = *outcome.solution;
    CHECK(f3.add(x[0], f3.mul(2, x[1])) == 1);
    ++counts[x[1]];
  }
  CHECK(testing::chi_square_uniform(counts) < testing::chi_square_99(2));
}

TEST_CASE("failure rate does not increase with band width") {
  const Field f3 = Field::prime(3);
  const std::uint32_t k = 256;
  const std::uint32_t m = 269;  // 5% slack
  double previous = 1.1;
  double first = -1.0;
  for (std::uint32_t w : {2u, 4u, 8u, 16u, 32u}) {
    const double rate = bottom_rate(k, m, w, f3, 400, 0xBADCAFE);
    if (first < 0.0) first = rate;
    CHECK(rate <= previous);
    previous = rate;
  }
  CHECK(first > 0.95);      // tiny bands almost surely collide
  CHECK(previous < first);  // wide bands measurably help
}

TEST_CASE("ties on the start column keep insertion order") {
  const Field f7 = Field::prime(7);
  // Two rows starting at column 0; the first installs the pivot, the second
  // is eliminated against it and lands on column 1.
  SparseBandRow first;
  first.start = 0;
  first.coeffs = {2, 1};
  first.rhs = 3;
  SparseBandRow second;
  second.start = 0;
  second.coeffs = {4, 5};
  second.rhs = 1;
  RngStream rng(29);
  auto outcome = solve_band({first, second}, 3, f7, rng);
  REQUIRE(outcome.solution.has_value());
  CHECK(outcome.eliminations == 1);
  CHECK(row_dot(first, *outcome.solution, f7) == first.rhs);
  CHECK(row_dot(second, *outcome.solution, f7) == second.rhs);
}

TEST_CASE("support may grow while rows are eliminated") {
  const Field f3 = Field::prime(3);
  // Rows arranged so subtraction spreads the second row across the pivot's
  // wider support.
  SparseBandRow wide;
  wide.start = 0;
  wide.coeffs = {1, 1, 1, 1};
  wide.rhs = 2;
  SparseBandRow narrow;
  narrow.start = 0;
  narrow.coeffs = {2, 2};
  narrow.rhs = 1;
  RngStream rng(31);
  auto rows = std::vector<SparseBandRow>{wide, narrow};
  auto outcome = solve_band(rows, 4, f3, rng);
  REQUIRE(outcome.solution.has_value());
  CHECK(row_dot(wide, *outcome.solution, f3) == wide.rhs);
  CHECK(row_dot(narrow, *outcome.solution, f3) == narrow.rhs);
}

TEST_CASE("default_band_width formula and clamps") {
  // Committed constants: w = ceil(log2(1/delta) + 8 log2(k_hat)).
  CHECK(default_band_width(1u << 12, 9.094947017729282e-13, 1u << 20) == 136);
  CHECK(default_band_width(1u << 16, 9.094947017729282e-13, 1u << 20) == 168);
  CHECK(default_band_width(2, 0.5, 1000) >= 2);          // floor holds
  CHECK(default_band_width(1, 0.5, 2) == 2);             // clamp floor bites
  CHECK(default_band_width(1u << 20, 1e-12, 24) == 24);  // clamp to m
  CHECK_THROWS_AS(default_band_width(0, 0.5, 10), std::invalid_argument);
  CHECK_THROWS_AS(default_band_width(4, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(default_band_width(4, 1.0, 10), std::invalid_argument);
}

TEST_CASE("input validation on solve_band") {
  const Field f3 = Field::prime(3);
  RngStream rng(37);
  SparseBandRow row;
  row.start = 2;
  row.coeffs = {1, 1};
  CHECK_THROWS_AS(solve_band({row}, 3, f3, rng), std::invalid_argument);
  CHECK_THROWS_AS(solve_band({row, row, row}, 2, f3, rng), std::invalid_argument);
}

TEST_CASE("solve time roughly doubles when the rows double") {
  const Field f4 = Field::binary_extension(2);
  const std::uint32_t w = 32;
  // Generous slack keeps every instance solvable, so only the O(mw) work
  // is measured.
  const auto timed_solve = [&](std::uint32_t k, std::uint64_t seed) {
    RngStream rng(seed);
    const std::uint32_t m = static_cast<std::uint32_t>(1.4 * k) + 1;
    auto rows = random_rows(k, m, w, f4, rng);
    const auto t0 = std::chrono::steady_clock::now();
    auto outcome = solve_band(std::move(rows), m, f4, rng);
    const auto t1 = std::chrono::steady_clock::now();
    REQUIRE(outcome.solution.has_value());
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
  };

  std::vector<double> ratios;
  for (std::uint64_t repeat = 0; repeat < 7; ++repeat) {
    const double small = timed_solve(1u << 14, 100 + repeat);
    const double large = timed_solve(1u << 15, 200 + repeat);
    ratios.push_back(large / small);
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios[ratios.size() / 2];
  CHECK(median >= 1.5);
  CHECK(median <= 2.5);
}
