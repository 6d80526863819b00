// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#include "dpset/bench.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "dpset/serialize.hpp"

namespace dpset::bench {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile
constexpr double kUniverseBits128 = 340282366920938463463374607431768211456.0;  // 2^128

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

UniverseElement random_string16(RngStream& rng) {
  const auto bytes = rng.next_bytes16();
  return UniverseElement(bytes.begin(), bytes.end());
}

/// First `count` entries of a uniform permutation of [0, q).
std::vector<felem> distinct_field_elements(std::uint32_t q, std::uint64_t count,
                                           RngStream& rng) {
  std::vector<felem> pool(q);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t j = i + rng.uniform_below(q - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

struct RunningStat {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n == 0 ? 0.0 : sum / static_cast<double>(n); }
  double stddev() const {
    if (n == 0) return 0.0;
    const double m = mean();
    const double var = sum_sq / static_cast<double>(n) - m * m;
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

Interval wilson99(std::uint64_t successes, std::uint64_t total) {
  if (total == 0) return {0.0, 0.0, 1.0};
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ99 * kZ99;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      kZ99 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval iv;
  iv.point = p;
  iv.lo = std::max(0.0, center - half);
  iv.hi = std::min(1.0, center + half);
  return iv;
}

double utility_lower_bound(double epsilon, double delta) {
  if (epsilon < 0.0 || delta < 0.0 || delta > 1.0) {
    throw std::invalid_argument("epsilon must be >= 0 and delta in [0, 1]");
  }
  return (1.0 - delta) / (std::exp(epsilon) + 1.0);
}

double space_lower_bound_bits(std::uint64_t k, double alpha, double n) {
  if (k < 1 || !(alpha > 0.0) || alpha > 0.5 || n < static_cast<double>(k)) {
    throw std::invalid_argument("need k >= 1, alpha in (0, 1/2], n >= k");
  }
  const double kd = static_cast<double>(k);
  const double leading = (1.0 - 2.0 * alpha) * kd * std::log2(1.0 / alpha - 1.0);
  const double penalty =
      2.0 * std::log2(kd) + std::log2(std::log2(std::exp(1.0) * n / kd));
  return std::max(0.0, leading - penalty);
}

TrialStats run_utility(const Params& params, std::uint64_t k,
                       const UtilityOptions& options) {
  if (k < 1 || options.trials < 1) {
    throw std::invalid_argument("need k >= 1 and trials >= 1");
  }
  if (k > params.k_hat) throw std::invalid_argument("k exceeds k_hat");
  const bool vdm = params.mode == Mode::vandermonde;
  if (vdm && 2 * k > params.field->order()) {
    throw std::invalid_argument(
        "vandermonde utility run needs 2k <= q for non-member queries");
  }

  TrialStats stats;
  stats.mode = params.mode;
  stats.epsilon_target = params.epsilon_target;
  stats.epsilon_achieved = params.epsilon_achieved;
  stats.q = params.field ? params.field->order() : 0;
  stats.k = k;
  stats.m = params.m;
  stats.w = params.w;
  stats.trials = options.trials;

  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
  RunningStat encode_ms;
  RunningStat decode_us;

  const auto run_trial = [&](std::uint64_t trial_index, bool measured) {
    RngStream rng = RngStream::derived(options.master_seed, trial_index);
    std::vector<UniverseElement> members;
    std::vector<UniverseElement> non_members;
    members.reserve(k);
    non_members.reserve(k);
    if (vdm) {
      const auto picks = distinct_field_elements(params.field->order(), 2 * k, rng);
      for (std::uint64_t i = 0; i < k; ++i) {
        const auto b = canonical_field_bytes(picks[i]);
        members.emplace_back(b.begin(), b.end());
      }
      for (std::uint64_t i = k; i < 2 * k; ++i) {
        const auto b = canonical_field_bytes(picks[i]);
        non_members.emplace_back(b.begin(), b.end());
      }
    } else {
      // Random 128-bit strings; a collision among 2k of them is below
      // 2^-90 for every supported k, so no distinctness bookkeeping.
      for (std::uint64_t i = 0; i < k; ++i) members.push_back(random_string16(rng));
      for (std::uint64_t i = 0; i < k; ++i) non_members.push_back(random_string16(rng));
    }

    EncodeStats enc_stats;
    const auto t0 = options.timing ? Clock::now() : Clock::time_point{};
    const Encoding enc = encode(members, params, rng, &enc_stats);
    const auto t1 = options.timing ? Clock::now() : Clock::time_point{};

    std::uint64_t trial_fp = 0;
    std::uint64_t trial_fn = 0;
    const auto t2 = options.timing ? Clock::now() : Clock::time_point{};
    for (const auto& u : members) {
      if (!decode(enc, u)) ++trial_fn;
    }
    for (const auto& u : non_members) {
      if (decode(enc, u)) ++trial_fp;
    }
    const auto t3 = options.timing ? Clock::now() : Clock::time_point{};

    if (!measured) return;
    false_negatives += trial_fn;
    false_positives += trial_fp;
    if (enc_stats.fell_back) {
      ++stats.fallback_count;
    } else if (stats.encoding_bytes == 0) {
      stats.encoding_bytes = serialize(enc).size();
    }
    if (options.timing) {
      encode_ms.add(ms_between(t0, t1));
      decode_us.add(ms_between(t2, t3) * 1000.0 / (2.0 * static_cast<double>(k)));
    }
  };

  if (options.timing) {
    run_trial(0x7fffffff00000000ULL, false);  // warm-up, discarded
  }
  for (std::uint32_t t = 0; t < options.trials; ++t) run_trial(t, true);

  const std::uint64_t per_side = k * options.trials;
  stats.fpr = wilson99(false_positives, per_side);
  stats.fnr = wilson99(false_negatives, per_side);
  stats.error = stats.fnr.point >= stats.fpr.point ? stats.fnr : stats.fpr;
  stats.encode_ms_mean = encode_ms.mean();
  stats.encode_ms_std = encode_ms.stddev();
  stats.decode_us_mean = decode_us.mean();
  stats.decode_us_std = decode_us.stddev();

  stats.alpha_lower_bound = utility_lower_bound(params.epsilon_achieved, 0.0);
  stats.side_sigma =
      std::sqrt(params.alpha * (1.0 - params.alpha) / static_cast<double>(per_side));
  stats.error_above_lower_bound =
      stats.error.point >= stats.alpha_lower_bound - 3.0 * stats.side_sigma;
  stats.error_within_alpha =
      stats.error.point <= params.alpha + 3.0 * stats.side_sigma;
  if (stats.encoding_bytes > 0) {
    const double universe =
        vdm ? static_cast<double>(params.field->order()) : kUniverseBits128;
    const double bound_bits = space_lower_bound_bits(k, params.alpha, universe);
    stats.size_above_space_bound =
        static_cast<double>(stats.encoding_bytes) * 8.0 >= bound_bits;
  }
  return stats;
}

std::vector<CalibrationRow> calibrate_band_width(std::uint64_t k, double beta,
                                                 std::uint32_t q,
                                                 const std::vector<std::uint32_t>& w_grid,
                                                 std::uint32_t trials,
                                                 std::uint64_t master_seed) {
  if (w_grid.empty()) throw std::invalid_argument("band width grid is empty");
  if (k < 1 || trials < 1) throw std::invalid_argument("need k >= 1 and trials >= 1");

  Params params;
  params.mode = Mode::band;
  params.field = Field::of_order(q);
  params.alpha = 1.0 / q;
  params.p = params.alpha / (1.0 - params.alpha);
  params.epsilon_achieved = std::log((1.0 - params.alpha) / params.alpha);
  params.epsilon_target = params.epsilon_achieved;
  params.beta = beta;
  params.k_hat = static_cast<std::uint32_t>(k);
  params.m = static_cast<std::uint32_t>(std::ceil((1.0 + beta) * static_cast<double>(k)));

  std::vector<CalibrationRow> rows;
  rows.reserve(w_grid.size());
  for (const std::uint32_t w : w_grid) {
    if (w < 1 || w > params.m) {
      throw std::invalid_argument("band width outside [1, m]");
    }
    params.w = w;
    CalibrationRow row;
    row.w = w;
    row.trials = trials;
    for (std::uint32_t t = 0; t < trials; ++t) {
      RngStream rng =
          RngStream::derived(master_seed, (static_cast<std::uint64_t>(w) << 32) | t);
      std::vector<UniverseElement> set;
      set.reserve(k);
      for (std::uint64_t i = 0; i < k; ++i) set.push_back(random_string16(rng));
      EncodeStats enc_stats;
      encode(set, params, rng, &enc_stats);
      if (enc_stats.fell_back) ++row.failures;
    }
    row.failure_rate = static_cast<double>(row.failures) / trials;
    rows.push_back(row);
  }
  return rows;
}

AuditReport dp_audit(const Params& params, std::uint64_t k, std::uint64_t per_side,
                     std::uint64_t master_seed) {
  if (per_side < 1) throw std::invalid_argument("per_side must be at least 1");
  if (k + 1 > params.k_hat) {
    throw std::invalid_argument("audit needs k + 1 <= k_hat for the neighboring set");
  }

  RngStream setup = RngStream::derived(master_seed, 0xD9A0D17ULL);
  std::vector<UniverseElement> without_u;
  UniverseElement u;
  if (params.mode == Mode::vandermonde) {
    const auto picks = distinct_field_elements(params.field->order(), k + 1, setup);
    for (std::uint64_t i = 0; i < k; ++i) {
      const auto b = canonical_field_bytes(picks[i]);
      without_u.emplace_back(b.begin(), b.end());
    }
    const auto b = canonical_field_bytes(picks[k]);
    u.assign(b.begin(), b.end());
  } else {
    for (std::uint64_t i = 0; i < k; ++i) without_u.push_back(random_string16(setup));
    u = random_string16(setup);
  }
  std::vector<UniverseElement> with_u = without_u;
  with_u.push_back(u);

  std::uint64_t hits_with = 0;
  std::uint64_t hits_without = 0;
  for (std::uint64_t i = 0; i < per_side; ++i) {
    RngStream rng_with = RngStream::derived(master_seed, 2 * i + 2);
    if (decode(encode(with_u, params, rng_with), u)) ++hits_with;
    RngStream rng_without = RngStream::derived(master_seed, 2 * i + 3);
    if (decode(encode(without_u, params, rng_without), u)) ++hits_without;
  }

  AuditReport report;
  report.per_side = per_side;
  report.with_u = wilson99(hits_with, per_side);
  report.without_u = wilson99(hits_without, per_side);
  report.e_epsilon = std::exp(params.epsilon_achieved);
  const double tiny = 1e-300;
  report.ratio = report.with_u.point / std::max(report.without_u.point, tiny);
  report.ratio_lo = report.with_u.lo / std::max(report.without_u.hi, tiny);
  report.ratio_hi = report.with_u.hi / std::max(report.without_u.lo, tiny);
  report.pass = report.ratio_lo <= report.e_epsilon;
  return report;
}

std::vector<PresetPoint> figure1_preset(bool include_k20) {
  static constexpr std::uint32_t kOrders[] = {3, 4, 8, 16, 32, 64, 128, 256};
  std::vector<std::uint64_t> ks = {1ULL << 12, 1ULL << 16};
  if (include_k20) ks.push_back(1ULL << 20);

  std::vector<PresetPoint> grid;
  grid.reserve(ks.size() * std::size(kOrders));
  for (const auto k : ks) {
    for (const auto q : kOrders) {
      PresetPoint point;
      point.epsilon = std::log(static_cast<double>(q - 1));
      point.expected_q = q;
      point.k = k;
      grid.push_back(point);
    }
  }
  return grid;
}

BoundsRow bounds_row(double epsilon, double delta, std::uint64_t k,
                     double universe_size) {
  BoundsRow row;
  row.epsilon = epsilon;
  row.delta = delta;
  row.alpha_lower = utility_lower_bound(epsilon, delta);
  row.space_lower_bits = space_lower_bound_bits(k, row.alpha_lower, universe_size);
  return row;
}

void write_csv_header(std::ostream& out) {
  out << "mode,epsilon_target,epsilon_achieved,q,k,m,w,trials,"
         "fpr,fpr_lo,fpr_hi,fnr,fnr_lo,fnr_hi,error,fallbacks,"
         "encode_ms_mean,decode_us_mean,encoding_bytes,alpha_lower_bound\n";
}

void write_csv_row(std::ostream& out, const TrialStats& s) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer),
                "%s,%.9g,%.9g,%u,%" PRIu64 ",%u,%u,%u,"
                "%.8f,%.8f,%.8f,%.8f,%.8f,%.8f,%.8f,%u,"
                "%.6f,%.6f,%" PRIu64 ",%.8f\n",
                mode_name(s.mode), s.epsilon_target, s.epsilon_achieved, s.q, s.k,
                s.m, s.w, s.trials, s.fpr.point, s.fpr.lo, s.fpr.hi, s.fnr.point,
                s.fnr.lo, s.fnr.hi, s.error.point, s.fallback_count,
                s.encode_ms_mean, s.decode_us_mean, s.encoding_bytes,
                s.alpha_lower_bound);
  out << buffer;
}

}  // namespace dpset::bench
