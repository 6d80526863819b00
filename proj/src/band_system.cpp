// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#include "dpset/band_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dpset {

SparseBandRow row_band(std::span<const std::uint8_t> u, const HashSeed& h1_seed,
                       const HashSeed& h2_seed, std::uint32_t m, std::uint32_t w,
                       const Field& field) {
  SparseBandRow row;
  row.start = hash_band_start(h1_seed, u, m, w);
  row.coeffs = hash_band_values(h2_seed, u, w, field);
  return row;
}

BandSolveOutcome solve_band(std::vector<SparseBandRow> rows, std::uint32_t m,
                            const Field& field, RngStream& rng) {
  if (rows.size() > m) {
    throw std::invalid_argument("band system has more rows than columns");
  }
  for (const auto& row : rows) {
    if (row.coeffs.empty() || row.start + row.coeffs.size() > m) {
      throw std::invalid_argument("band row support outside [0, m)");
    }
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const SparseBandRow& a, const SparseBandRow& b) {
                     return a.start < b.start;
                   });

  constexpr std::int32_t kNoPivot = -1;
  std::vector<std::int32_t> pivot_at(m, kNoPivot);
  std::vector<SparseBandRow> pivots;
  pivots.reserve(rows.size());
  std::uint64_t eliminations = 0;

  for (auto& row : rows) {
    for (;;) {
      std::size_t lead = 0;
      while (lead < row.coeffs.size() && row.coeffs[lead] == 0) ++lead;
      if (lead == row.coeffs.size()) {
        // Zero coefficients, any rhs: the rows were linearly dependent.
        return {std::nullopt, eliminations};
      }
      if (lead > 0) {
        row.start += static_cast<std::uint32_t>(lead);
        row.coeffs.erase(row.coeffs.begin(),
                         row.coeffs.begin() + static_cast<std::ptrdiff_t>(lead));
      }

      const std::uint32_t col = row.start;
      if (pivot_at[col] == kNoPivot) {
        if (row.coeffs[0] != 1) {
          const felem lead_inv = field.inv(row.coeffs[0]);
          for (auto& c : row.coeffs) c = field.mul(c, lead_inv);
          row.rhs = field.mul(row.rhs, lead_inv);
        }
        pivot_at[col] = static_cast<std::int32_t>(pivots.size());
        pivots.push_back(std::move(row));
        break;
      }

      // Subtract factor * pivot row; both rows lead at `col` and the pivot
      // is normalized, so the leading coefficient cancels.
      const SparseBandRow& pivot = pivots[static_cast<std::size_t>(pivot_at[col])];
      const felem factor = row.coeffs[0];
      const std::size_t needed = pivot.start + pivot.coeffs.size() - row.start;
      if (row.coeffs.size() < needed) row.coeffs.resize(needed, 0);
      for (std::size_t j = 0; j < pivot.coeffs.size(); ++j) {
        row.coeffs[j] = field.sub(row.coeffs[j], field.mul(factor, pivot.coeffs[j]));
      }
      row.rhs = field.sub(row.rhs, field.mul(factor, pivot.rhs));
      ++eliminations;
    }
  }

  // Free columns first, all uniform; then pivots from the highest column
  // down, so every coefficient to a pivot's right is already resolved.
  std::vector<felem> x(m, 0);
  for (std::uint32_t col = 0; col < m; ++col) {
    if (pivot_at[col] == kNoPivot) x[col] = uniform_element(field, rng);
  }
  for (std::uint32_t col = m; col-- > 0;) {
    if (pivot_at[col] == kNoPivot) continue;
    const SparseBandRow& pivot = pivots[static_cast<std::size_t>(pivot_at[col])];
    felem acc = pivot.rhs;
    for (std::size_t j = 1; j < pivot.coeffs.size(); ++j) {
      acc = field.sub(acc, field.mul(pivot.coeffs[j], x[pivot.start + j]));
    }
    x[col] = acc;
  }
  return {std::move(x), eliminations};
}

std::uint32_t default_band_width(std::uint64_t k_hat, double delta, std::uint32_t m) {
  if (k_hat < 1) throw std::invalid_argument("k_hat must be at least 1");
  if (!(delta > 0.0) || delta >= 1.0) {
    throw std::invalid_argument("delta must be in (0, 1)");
  }
  const double raw = kBandWidthDeltaCoeff * std::log2(1.0 / delta) +
                     kBandWidthLogKCoeff * std::log2(static_cast<double>(k_hat));
  double w = std::ceil(raw) + kBandWidthOffset;
  if (w < 2) w = 2;
  if (w > static_cast<double>(m)) w = static_cast<double>(m);
  return static_cast<std::uint32_t>(w);
}

}  // namespace dpset
