// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#include "dpset/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace dpset {

namespace {

const Field& field_f2() {
  static const Field f2 = Field::binary_extension(1);
  return f2;
}

std::string bytes_key(const UniverseElement& u) {
  return std::string(reinterpret_cast<const char*>(u.data()), u.size());
}

bool seeds_match(const HashSeed& a, const HashSeed& b) { return a == b; }

}  // namespace

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::band: return "band";
    case Mode::vandermonde: return "vandermonde";
    case Mode::trivial: return "trivial";
  }
  return "?";
}

bool operator==(const Encoding& a, const Encoding& b) {
  if (a.params.mode != b.params.mode) return false;
  if (a.params.field.has_value() != b.params.field.has_value()) return false;
  if (a.params.field && !(*a.params.field == *b.params.field)) return false;
  if (a.params.m != b.params.m || a.params.w != b.params.w ||
      a.params.k_hat != b.params.k_hat) {
    return false;
  }
  if (!seeds_match(a.h_seed, b.h_seed) || !seeds_match(a.h1_seed, b.h1_seed) ||
      !seeds_match(a.h2_seed, b.h2_seed)) {
    return false;
  }
  return a.payload == b.payload;
}

Params derive_params(double epsilon_target, double delta, std::uint32_t k_hat,
                     double beta, Mode mode,
                     std::optional<std::uint64_t> universe_size) {
  if (!(epsilon_target > 0.0)) {
    throw std::invalid_argument("epsilon_target must be positive");
  }
  if (k_hat < 1) throw std::invalid_argument("k_hat must be at least 1");

  Params params;
  params.mode = mode;
  params.epsilon_target = epsilon_target;
  params.delta = delta;
  params.k_hat = k_hat;

  if (mode == Mode::trivial) {
    if (delta != 0.0) throw std::invalid_argument("trivial mode requires delta = 0");
    params.alpha = 0.5;
    params.p = 1.0;
    params.epsilon_achieved = 0.0;
    return params;
  }

  const double alpha_target = 1.0 / (std::exp(epsilon_target) + 1.0);
  params.field = select_field(alpha_target);
  const double q = params.field->order();
  params.alpha = 1.0 / q;
  params.p = params.alpha / (1.0 - params.alpha);
  params.epsilon_achieved = std::log((1.0 - params.alpha) / params.alpha);

  if (mode == Mode::band) {
    if (!(delta > 0.0) || delta >= 1.0) {
      throw std::invalid_argument("band mode requires delta in (0, 1)");
    }
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    params.beta = beta;
    params.m = static_cast<std::uint32_t>(
        std::ceil((1.0 + beta) * static_cast<double>(k_hat)));
    params.w = default_band_width(k_hat, delta, params.m);
  } else {
    if (delta != 0.0) {
      throw std::invalid_argument("vandermonde mode requires delta = 0");
    }
    if (k_hat > params.field->order()) {
      throw std::invalid_argument("vandermonde mode requires k_hat <= field order");
    }
    if (universe_size && *universe_size > params.field->order()) {
      throw std::invalid_argument(
          "vandermonde mode requires field order >= universe size");
    }
    params.m = k_hat;
  }
  return params;
}

std::optional<felem> universe_to_field(std::span<const std::uint8_t> u,
                                       const Field& field) {
  if (u.size() > 8) return std::nullopt;
  std::uint64_t value = 0;
  for (std::size_t i = u.size(); i-- > 0;) {
    value = (value << 8) | u[i];
  }
  if (value >= field.order()) return std::nullopt;
  return static_cast<felem>(value);
}

std::array<std::uint8_t, 4> canonical_field_bytes(felem v) {
  return {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
          static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)};
}

Encoding encode(const std::vector<UniverseElement>& s, const Params& params,
                RngStream& rng, EncodeStats* stats) {
  if (s.size() > params.k_hat) {
    throw std::invalid_argument("input set larger than k_hat");
  }

  // Precondition checks happen before any randomness is consumed.
  std::vector<felem> mapped;  // vandermonde only
  if (params.mode == Mode::vandermonde) {
    const Field& field = *params.field;
    std::vector<bool> seen(field.order(), false);
    mapped.reserve(s.size());
    for (const auto& element : s) {
      const auto v = universe_to_field(element, field);
      if (!v) {
        throw std::invalid_argument(
            "vandermonde element is not an integer in [0, q)");
      }
      if (seen[*v]) {
        throw std::invalid_argument("duplicate element " + std::to_string(*v));
      }
      seen[*v] = true;
      mapped.push_back(*v);
    }
  } else if (params.mode == Mode::band) {
    std::unordered_set<std::string> distinct;
    distinct.reserve(s.size() * 2);
    for (const auto& element : s) {
      if (!distinct.insert(bytes_key(element)).second) {
        throw std::invalid_argument("duplicate element in input set");
      }
    }
  }

  Encoding enc;
  enc.params = params;
  if (stats) *stats = EncodeStats{};

  if (params.mode == Mode::trivial) {
    enc.h_seed = seed_from_rng(rng);
    enc.payload = std::vector<felem>{};
    return enc;
  }

  enc.h_seed = seed_from_rng(rng);
  if (params.mode == Mode::band) {
    enc.h1_seed = seed_from_rng(rng);
    enc.h2_seed = seed_from_rng(rng);
  }

  // Independent exclusion: each element survives with probability 1 - p.
  std::vector<std::uint32_t> retained;
  retained.reserve(s.size());
  for (std::uint32_t i = 0; i < s.size(); ++i) {
    if (!rng.bernoulli(params.p)) retained.push_back(i);
  }
  if (stats) stats->retained = static_cast<std::uint32_t>(retained.size());

  const Field& field = *params.field;
  if (params.mode == Mode::band) {
    std::vector<SparseBandRow> rows;
    rows.reserve(retained.size());
    for (const auto i : retained) {
      SparseBandRow row =
          row_band(s[i], enc.h1_seed, enc.h2_seed, params.m, params.w, field);
      row.rhs = hash_to_field(enc.h_seed, s[i], field);
      rows.push_back(std::move(row));
    }
    BandSolveOutcome outcome = solve_band(std::move(rows), params.m, field, rng);
    if (stats) stats->eliminations = outcome.eliminations;
    if (!outcome.solution) {
      // The failure branch releases the input set itself and nothing else.
      if (stats) stats->fell_back = true;
      enc.h_seed = HashSeed{};
      enc.h1_seed = HashSeed{};
      enc.h2_seed = HashSeed{};
      std::vector<UniverseElement> fallback = s;
      std::sort(fallback.begin(), fallback.end());
      enc.payload = std::move(fallback);
      return enc;
    }
    enc.payload = std::move(*outcome.solution);
    return enc;
  }

  std::vector<VdmPoint> points;
  points.reserve(retained.size());
  for (const auto i : retained) {
    const felem v = mapped[i];
    const auto canonical = canonical_field_bytes(v);
    points.push_back(VdmPoint{v, hash_to_field(enc.h_seed, canonical, field)});
  }
  enc.payload = solve_vdm(points, params.m, field, rng);
  return enc;
}

bool decode(const Encoding& enc, std::span<const std::uint8_t> u,
            DecodeStats* stats) {
  if (enc.is_fallback()) {
    const auto& set = enc.fallback_set();
    return std::binary_search(set.begin(), set.end(),
                              UniverseElement(u.begin(), u.end()));
  }

  switch (enc.params.mode) {
    case Mode::trivial:
      return hash_to_field(enc.h_seed, u, field_f2()) == 0;

    case Mode::band: {
      const Field& field = *enc.params.field;
      const auto& x = enc.solution();
      const std::uint32_t start =
          hash_band_start(enc.h1_seed, u, enc.params.m, enc.params.w);
      const std::vector<felem> band =
          hash_band_values(enc.h2_seed, u, enc.params.w, field);
      felem y = 0;
      for (std::uint32_t j = 0; j < enc.params.w; ++j) {
        y = field.mul_add(y, band[j], x[start + j]);
      }
      if (stats) stats->coords_touched += enc.params.w;
      return y == hash_to_field(enc.h_seed, u, field);
    }

    case Mode::vandermonde: {
      const Field& field = *enc.params.field;
      const auto v = universe_to_field(u, field);
      if (!v) return false;  // outside the universe, never a member
      const auto& x = enc.solution();
      const felem y = poly_eval(x, *v, field);
      if (stats) stats->coords_touched += x.size();
      return y == hash_to_field(enc.h_seed, canonical_field_bytes(*v), field);
    }
  }
  return false;
}

double epsilon_of(double p, std::uint32_t q) {
  if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
  if (q < 2) throw std::invalid_argument("field order must be at least 2");
  const double removal_branch = std::log(1.0 / p);
  const double free_variable_branch = std::log(p + (1.0 - p) * q);
  return std::max(removal_branch, free_variable_branch);
}

std::uint32_t m_optimized(std::uint32_t k, double p, double gamma, double beta,
                          Mode mode) {
  if (mode == Mode::vandermonde) {
    throw std::invalid_argument("column reduction would add failure probability; "
                                "not available in vandermonde mode");
  }
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw std::invalid_argument("gamma must be in (0, 1]");
  }
  if (!(p >= 0.0) || p >= 1.0) throw std::invalid_argument("p must be in [0, 1)");
  const double m =
      std::ceil((1.0 + beta) * (1.0 + gamma) * (1.0 - p) * static_cast<double>(k));
  return static_cast<std::uint32_t>(m);
}

}  // namespace dpset
