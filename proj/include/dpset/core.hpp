// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dpset/band_system.hpp"
#include "dpset/field.hpp"
#include "dpset/hashing.hpp"
#include "dpset/rng.hpp"
#include "dpset/vandermonde.hpp"

namespace dpset {

enum class Mode : std::uint8_t { band = 0, vandermonde = 1, trivial = 2 };

const char* mode_name(Mode mode);

/// Everything derived from (epsilon, delta, k_hat, beta, mode). The privacy
/// actually delivered is epsilon_achieved = ln((1 - alpha) / alpha) with
/// alpha = 1/q: the field order is rounded up to the next prime power, so
/// the achieved error is at most the target error and epsilon_achieved is
/// at least epsilon_target. Both are recorded.
struct Params {
  Mode mode = Mode::band;
  double epsilon_target = 0.0;
  double delta = 0.0;
  double alpha = 0.0;            // achieved error probability, 1/q
  double p = 0.0;                // exclusion probability, alpha / (1 - alpha)
  double epsilon_achieved = 0.0;
  double beta = 0.0;             // column slack factor (band mode)
  std::optional<Field> field;    // absent in trivial mode
  std::uint32_t m = 0;           // columns; 0 in trivial mode
  std::uint32_t w = 0;           // band width; 0 outside band mode
  std::uint32_t k_hat = 0;       // maximum input set size
};

/// The released object. Exactly one payload variant is present:
///   - solution: the m-element vector x, the normal case;
///   - fallback: the raw input set, released verbatim when the band solver
///     hits a rank-deficient system.
///
/// WARNING: a fallback payload is the unprotected input set. Its
/// probability is the delta of the (epsilon, delta) guarantee; consumers
/// who cannot tolerate the exposure must not use band mode.
struct Encoding {
  Params params;
  HashSeed h_seed;
  HashSeed h1_seed;  // band mode only; zero otherwise
  HashSeed h2_seed;  // band mode only; zero otherwise
  std::variant<std::vector<felem>, std::vector<UniverseElement>> payload;

  bool is_fallback() const { return payload.index() == 1; }
  const std::vector<felem>& solution() const { return std::get<0>(payload); }
  const std::vector<UniverseElement>& fallback_set() const {
    return std::get<1>(payload);
  }
};

/// Wire-level equality: mode, field, dimensions, seeds and payload. The
/// provenance inputs (epsilon_target, delta, beta) are not compared; they
/// are not part of the serialized object.
bool operator==(const Encoding& a, const Encoding& b);

/// One decode observation; the unit the error-rate bookkeeping counts.
struct TrialOutcome {
  UniverseElement queried;
  bool truth = false;
  bool answer = false;

  bool correct() const { return truth == answer; }
};

struct EncodeStats {
  std::uint32_t retained = 0;  // |S'| after subsampling
  bool fell_back = false;
  std::uint64_t eliminations = 0;
};

struct DecodeStats {
  std::uint64_t coords_touched = 0;  // solution coordinates read
};

/// Derive all mechanism parameters for a privacy target.
///
/// epsilon_target > 0 and k_hat >= 1 always; band mode needs
/// 0 < delta < 1 and beta > 0; vandermonde and trivial modes need
/// delta == 0. Vandermonde mode additionally needs k_hat <= q, and
/// q >= universe_size when the universe bound is supplied (its universe is
/// the field itself).
Params derive_params(double epsilon_target, double delta, std::uint32_t k_hat,
                     double beta, Mode mode,
                     std::optional<std::uint64_t> universe_size = std::nullopt);

/// Encode a set. Elements must be distinct and number at most k_hat (both
/// rejected before any randomness is consumed). Each element is dropped
/// with probability p, the survivors become linear constraints, and the
/// solved vector is the payload. Band mode falls back to releasing the
/// input set itself when the solver reports rank deficiency; vandermonde
/// mode never fails; trivial mode ignores the input entirely.
///
/// In vandermonde mode every element must be the little-endian encoding of
/// an integer in [0, q) using at most 8 bytes; elements equal as integers
/// are duplicates.
Encoding encode(const std::vector<UniverseElement>& s, const Params& params,
                RngStream& rng, EncodeStats* stats = nullptr);

/// Membership answer for u. Total: never fails, for any input bytes.
bool decode(const Encoding& enc, std::span<const std::uint8_t> u,
            DecodeStats* stats = nullptr);

/// Privacy delivered by exclusion probability p over field order q: the
/// larger of the removal branch ln(1/p) and the free-variable branch
/// ln(p + (1-p) q). At p = alpha/(1-alpha), q = 1/alpha the branches agree
/// at ln((1-alpha)/alpha).
double epsilon_of(double p, std::uint32_t q);

/// Column count reduced toward the expected survivor count:
/// ceil((1+beta)(1+gamma)(1-p)k). Costs an additive e^{-O(k)} increase to
/// delta, so it is rejected in vandermonde mode. Advisory: callers keep
/// their default m when this is not smaller.
std::uint32_t m_optimized(std::uint32_t k, double p, double gamma, double beta,
                          Mode mode = Mode::band);

/// Little-endian integer view of a universe element, if it is at most
/// 8 bytes and its value is below q.
std::optional<felem> universe_to_field(std::span<const std::uint8_t> u,
                                       const Field& field);

/// Canonical byte encoding of a vandermonde-mode element (fixed-width
/// little-endian), so hashing does not depend on the caller's byte width.
std::array<std::uint8_t, 4> canonical_field_bytes(felem v);

}  // namespace dpset
