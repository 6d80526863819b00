// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dpset/core.hpp"

namespace dpset::bench {

/// 99% Wilson score interval around an empirical rate.
struct Interval {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

Interval wilson99(std::uint64_t successes, std::uint64_t total);

/// Aggregate of one utility run: empirical rates over `trials` fresh
/// encodings, each queried at all k members plus k fresh non-members.
struct TrialStats {
  Mode mode = Mode::band;
  double epsilon_target = 0.0;
  double epsilon_achieved = 0.0;
  std::uint32_t q = 0;
  std::uint64_t k = 0;
  std::uint32_t m = 0;
  std::uint32_t w = 0;
  std::uint32_t trials = 0;

  Interval fpr;
  Interval fnr;
  Interval error;  // max-rate aggregate of the two sides

  double encode_ms_mean = 0.0;
  double encode_ms_std = 0.0;
  double decode_us_mean = 0.0;
  double decode_us_std = 0.0;
  std::uint32_t fallback_count = 0;
  std::uint64_t encoding_bytes = 0;

  double alpha_lower_bound = 0.0;  // best possible error at epsilon_achieved
  double side_sigma = 0.0;         // binomial standard error of one side

  // Harness self-checks; a false value means the run contradicts what the
  // mechanism guarantees and should be treated as a failure.
  bool error_above_lower_bound = true;  // error >= alpha_lower_bound - 3 sigma
  bool error_within_alpha = true;       // error <= alpha + 3 sigma
  bool size_above_space_bound = true;   // bytes >= space lower bound / 8

  bool self_checks_pass() const {
    return error_above_lower_bound && error_within_alpha && size_above_space_bound;
  }
};

struct UtilityOptions {
  std::uint32_t trials = 1000;
  std::uint64_t master_seed = 1;
  bool timing = true;
};

/// Run the utility experiment: per trial, draw a fresh k-element set
/// (random 16-byte strings, or distinct field elements in vandermonde
/// mode), encode it, query every member and k fresh non-members. Per-trial
/// randomness is derived from the master seed, so identical invocations
/// produce identical counts.
TrialStats run_utility(const Params& params, std::uint64_t k,
                       const UtilityOptions& options);

struct CalibrationRow {
  std::uint32_t w = 0;
  std::uint32_t trials = 0;
  std::uint32_t failures = 0;
  double failure_rate = 0.0;
};

/// Empirical encode-failure rate of band mode as a function of band width,
/// at m = ceil((1+beta) k). Feeds the default_band_width constants.
std::vector<CalibrationRow> calibrate_band_width(std::uint64_t k, double beta,
                                                 std::uint32_t q,
                                                 const std::vector<std::uint32_t>& w_grid,
                                                 std::uint32_t trials,
                                                 std::uint64_t master_seed);

/// Best achievable error probability at a privacy level: (1-delta)/(e^eps+1).
double utility_lower_bound(double epsilon, double delta);

/// Bits any mechanism with error alpha needs for sets of size k from a
/// universe of size n: max(0, (1-2a) k log2(1/a - 1) - 2 log2 k
/// - log2 log2(e n / k)).
double space_lower_bound_bits(std::uint64_t k, double alpha, double n);

/// Empirical check of the privacy guarantee on the decode-1 observable:
/// fix S and u not in S, estimate Pr[decode(Enc(S + u), u) = 1] and
/// Pr[decode(Enc(S), u) = 1] over fresh encodings, and compare their ratio
/// against e^epsilon_achieved. `pass` is false only when the ratio's lower
/// confidence bound exceeds the bound, i.e. the data statistically
/// contradicts the guarantee.
struct AuditReport {
  Interval with_u;     // numerator side
  Interval without_u;  // denominator side
  double ratio = 0.0;
  double ratio_lo = 0.0;
  double ratio_hi = 0.0;
  double e_epsilon = 0.0;
  std::uint64_t per_side = 0;
  bool pass = true;
};

AuditReport dp_audit(const Params& params, std::uint64_t k, std::uint64_t per_side,
                     std::uint64_t master_seed);

/// One point of the reference evaluation grid.
struct PresetPoint {
  double epsilon = 0.0;  // exact value; its display label rounds to 2 digits
  std::uint32_t expected_q = 0;
  std::uint64_t k = 0;
};

/// The default evaluation grid: epsilon = ln(q - 1) for
/// q in {3, 4, 8, 16, 32, 64, 128, 256} so achieved and target epsilon
/// coincide, crossed with k in {2^12, 2^16} (2^20 opt-in). Band mode,
/// beta = 0.05, delta = 2^-40, 1000 trials.
std::vector<PresetPoint> figure1_preset(bool include_k20 = false);

constexpr double kPresetBeta = 0.05;
constexpr double kPresetDelta = 9.094947017729282e-13;  // 2^-40
constexpr std::uint32_t kPresetTrials = 1000;

/// Reference lower-bound rows emitted by the bounds subcommand.
struct BoundsRow {
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha_lower = 0.0;
  double space_lower_bits = 0.0;
};

BoundsRow bounds_row(double epsilon, double delta, std::uint64_t k, double universe_size);

/// CSV output. Columns are fixed; runs with timing disabled write zeros in
/// the timing columns so equal-seed runs are byte-identical.
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const TrialStats& stats);

}  // namespace dpset::bench
