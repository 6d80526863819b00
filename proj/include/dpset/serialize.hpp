// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpset/core.hpp"

namespace dpset {

/// Parse failure; names the offending wire field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Fixed bytes before the payload. Layout, all integers little-endian:
///   magic "DPST" (4) | version u8 | mode u8 | field kind u8 | q u32 |
///   m u32 | w u32 | k_hat u32 | h_seed 16 | h1_seed 16 | h2_seed 16 |
///   payload tag u8
/// Unused integer fields are written as 0 and unused seeds zero-filled.
inline constexpr std::size_t kHeaderBytes = 4 + 1 + 1 + 1 + 4 + 4 + 4 + 4 + 48 + 1;

inline constexpr std::uint8_t kFormatVersion = 1;

/// Bytes of the bit-packed solution payload: ceil(m * bits_per_element / 8).
std::size_t solution_payload_bytes(const Params& params);

/// Solution payloads pack m elements at ceil(log2 q) bits each, LSB-first
/// within bytes, zero-padded to a byte boundary. Fallback payloads are a
/// count u32 followed by length-u16-prefixed raw elements.
std::vector<std::uint8_t> serialize(const Encoding& enc);

/// Inverse of serialize; bit-exact round trip. Rejects malformed input
/// with a ParseError instead of crashing or guessing. The provenance
/// fields of Params (epsilon_target, delta, beta) are not on the wire:
/// epsilon_target is restored as epsilon_achieved, delta as 0, beta from
/// m / k_hat.
Encoding deserialize(std::span<const std::uint8_t> bytes);

}  // namespace dpset
