// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpset/field.hpp"
#include "dpset/hashing.hpp"
#include "dpset/rng.hpp"

namespace dpset {

/// One linear constraint of a band system: a contiguous run of
/// coefficients starting at column `start` (0-based), zero everywhere
/// else. The coefficient vector may grow to the right while the row is
/// being eliminated.
struct SparseBandRow {
  std::uint32_t start = 0;
  std::vector<felem> coeffs;
  felem rhs = 0;
};

struct BandSolveOutcome {
  /// Solution of length m, or nullopt when the rows are not of full rank
  /// (the caller's failure event).
  std::optional<std::vector<felem>> solution;
  /// Row-subtraction count, for diagnostics.
  std::uint64_t eliminations = 0;
};

/// Band row of u: band start from h1, w coefficients from h2, rhs left
/// unset. Requires w <= m.
SparseBandRow row_band(std::span<const std::uint8_t> u, const HashSeed& h1_seed,
                       const HashSeed& h2_seed, std::uint32_t m, std::uint32_t w,
                       const Field& field);

/// Gaussian elimination specialized to band rows: sort rows by band start
/// (ties keep insertion order), eliminate forward against a per-column
/// pivot table, then back-substitute with every free column set to a fresh
/// uniform field element. Any row that reduces to all-zero coefficients
/// reports rank deficiency regardless of its rhs: the mechanism needs full
/// row rank, a merely consistent system is not enough.
///
/// Requires rows.size() <= m and every row's support within [0, m).
BandSolveOutcome solve_band(std::vector<SparseBandRow> rows, std::uint32_t m,
                            const Field& field, RngStream& rng);

/// Band width defaults: w = ceil(c1 * log2(1/delta) + c2 * log2(k_hat)) + c3,
/// clamped to [2, m]. Constants calibrated with the calibrate subcommand at
/// beta = 0.05 against the worst case of a large field (small exclusion
/// probability leaves nearly k rows, so the column slack stays near 5%):
/// measured encode failure at q = 256 decays about e^{-0.11 w}, reaching
/// ~1e-3 at w = 96 (k = 2^12) and 0/300 at w = 128 (k = 2^16). The log k
/// coefficient reflects the 1/beta factor multiplying log k at this slack.
constexpr double kBandWidthDeltaCoeff = 1.0;
constexpr double kBandWidthLogKCoeff = 8.0;
constexpr int kBandWidthOffset = 0;

std::uint32_t default_band_width(std::uint64_t k_hat, double delta, std::uint32_t m);

}  // namespace dpset
