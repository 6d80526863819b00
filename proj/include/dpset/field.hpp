// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dpset/rng.hpp"

namespace dpset {

/// Field element value. Always in [0, q); range is enforced at module
/// boundaries, not per operation.
using felem = std::uint32_t;

enum class FieldKind : std::uint8_t { prime = 0, binary_extension = 1 };

/// Arithmetic over a small finite field: a prime field F_q or a binary
/// extension GF(2^r) with 1 <= r <= 16. Binary extensions use log/antilog
/// tables over one canonical primitive polynomial per degree, fixed in a
/// versioned table so results are identical across runs and platforms.
///
/// A Field is immutable after construction and cheap to copy (tables are
/// shared); all operations are pure and safe for concurrent use.
class Field {
 public:
  static Field prime(std::uint32_t q);
  static Field binary_extension(std::uint32_t r);
  /// Dispatch on order: powers of two become GF(2^r), everything else must
  /// be prime. Used when rebuilding a field from its serialized order.
  static Field of_order(std::uint32_t q);

  FieldKind kind() const { return kind_; }
  std::uint32_t order() const { return q_; }
  /// Extension degree r; 0 for prime fields.
  std::uint32_t degree() const { return r_; }
  /// Index of the reduction polynomial in the canonical table (== r).
  std::uint32_t reduction_polynomial_id() const { return r_; }
  /// Bits needed to store one element: ceil(log2 q).
  std::uint32_t bits_per_element() const { return bits_; }

  felem add(felem a, felem b) const {
    if (kind_ == FieldKind::binary_extension) return a ^ b;
    const std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }

  felem sub(felem a, felem b) const {
    if (kind_ == FieldKind::binary_extension) return a ^ b;
    return a >= b ? a - b : a + q_ - b;
  }

  felem neg(felem a) const {
    if (kind_ == FieldKind::binary_extension) return a;
    return a == 0 ? 0 : q_ - a;
  }

  felem mul(felem a, felem b) const {
    if (kind_ == FieldKind::binary_extension) {
      if (a == 0 || b == 0) return 0;
      const auto& t = *tables_;
      return t.exp[t.log[a] + t.log[b]];
    }
    return static_cast<felem>((static_cast<std::uint64_t>(a) * b) % q_);
  }

  /// Multiplicative inverse. inv(0) is a contract violation and throws
  /// std::domain_error; it never returns a wrong value.
  felem inv(felem a) const;

  felem pow(felem a, std::uint64_t e) const;

  /// a + b*c in one call; the inner loop of elimination and decoding.
  felem mul_add(felem a, felem b, felem c) const { return add(a, mul(b, c)); }

  bool operator==(const Field& other) const {
    return kind_ == other.kind_ && q_ == other.q_;
  }

  /// The canonical reduction polynomial for GF(2^r), bit i = coefficient of
  /// x^i (so 0b10011 is x^4 + x + 1).
  static std::uint32_t reduction_polynomial(std::uint32_t r);

  /// Largest supported field order.
  static constexpr std::uint32_t kMaxOrder = 1u << 16;

 private:
  struct Tables {
    std::vector<std::uint16_t> log;  // index: element, valid for nonzero
    std::vector<std::uint16_t> exp;  // doubled so log[a]+log[b] needs no mod
  };

  Field(FieldKind kind, std::uint32_t q, std::uint32_t r,
        std::shared_ptr<const Tables> tables);

  FieldKind kind_;
  std::uint32_t q_;
  std::uint32_t r_;
  std::uint32_t bits_;
  std::shared_ptr<const Tables> tables_;  // binary extensions only
};

/// Smallest field whose order q satisfies 1/q <= alpha_target, searching
/// primes and powers of two; ties go to the binary extension because its
/// elements bit-pack exactly. Requires 0 < alpha_target <= 1/2.
Field select_field(double alpha_target);

/// Uniform element of [0, q), bias-free.
felem uniform_element(const Field& field, RngStream& rng);

bool is_prime(std::uint32_t n);

}  // namespace dpset
