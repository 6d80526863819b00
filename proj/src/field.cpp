// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#include "dpset/field.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace dpset {

namespace {

// One canonical primitive polynomial per degree r = 1..16 (bit i is the
// coefficient of x^i). x generates the multiplicative group for each of
// these, which the table build below verifies. Changing an entry is a wire
// format break and requires a serialization version bump.
constexpr std::uint32_t kReductionPolynomials[17] = {
    0,
    0x3,      // r=1:  x + 1
    0x7,      // r=2:  x^2 + x + 1
    0xB,      // r=3:  x^3 + x + 1
    0x13,     // r=4:  x^4 + x + 1
    0x25,     // r=5:  x^5 + x^2 + 1
    0x43,     // r=6:  x^6 + x + 1
    0x89,     // r=7:  x^7 + x^3 + 1
    0x11D,    // r=8:  x^8 + x^4 + x^3 + x^2 + 1
    0x211,    // r=9:  x^9 + x^4 + 1
    0x409,    // r=10: x^10 + x^3 + 1
    0x805,    // r=11: x^11 + x^2 + 1
    0x1053,   // r=12: x^12 + x^6 + x^4 + x + 1
    0x201B,   // r=13: x^13 + x^4 + x^3 + x + 1
    0x4443,   // r=14: x^14 + x^10 + x^6 + x + 1
    0x8003,   // r=15: x^15 + x + 1
    0x1100B,  // r=16: x^16 + x^12 + x^3 + x + 1
};

std::uint32_t checked_degree(std::uint32_t r) {
  if (r < 1 || r > 16) {
    throw std::invalid_argument("binary extension degree must be in [1, 16], got " +
                                std::to_string(r));
  }
  return r;
}

std::uint32_t bit_width_of(std::uint32_t q) {
  std::uint32_t bits = 0;
  for (std::uint32_t v = q - 1; v != 0; v >>= 1) ++bits;
  return bits == 0 ? 1 : bits;
}

}  // namespace

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint32_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t Field::reduction_polynomial(std::uint32_t r) {
  return kReductionPolynomials[checked_degree(r)];
}

Field::Field(FieldKind kind, std::uint32_t q, std::uint32_t r,
             std::shared_ptr<const Tables> tables)
    : kind_(kind), q_(q), r_(r), bits_(bit_width_of(q)), tables_(std::move(tables)) {}

Field Field::prime(std::uint32_t q) {
  if (q > kMaxOrder) {
    throw std::invalid_argument("field order exceeds 2^16: " + std::to_string(q));
  }
  if (!is_prime(q)) {
    throw std::invalid_argument("not a prime field order: " + std::to_string(q));
  }
  return Field(FieldKind::prime, q, 0, nullptr);
}

Field Field::binary_extension(std::uint32_t r) {
  checked_degree(r);
  const std::uint32_t q = 1u << r;
  const std::uint32_t poly = kReductionPolynomials[r];

  // Tables for a given degree are built once and shared between all Field
  // instances of that degree.
  static std::mutex cache_mutex;
  static std::unordered_map<std::uint32_t, std::shared_ptr<const Tables>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(r);
    if (it != cache.end()) {
      return Field(FieldKind::binary_extension, q, r, it->second);
    }
  }

  auto tables = std::make_shared<Tables>();
  tables->log.assign(q, 0);
  tables->exp.assign(2 * (q - 1), 0);
  std::vector<bool> seen(q, false);
  std::uint32_t cur = 1;
  for (std::uint32_t i = 0; i < q - 1; ++i) {
    if (cur == 0 || cur >= q || seen[cur]) {
      // Only reachable if the table entry were not primitive/irreducible;
      // guards the polynomial table itself.
      throw std::logic_error("reduction polynomial for degree " + std::to_string(r) +
                             " is not primitive");
    }
    seen[cur] = true;
    tables->exp[i] = static_cast<std::uint16_t>(cur);
    tables->log[cur] = static_cast<std::uint16_t>(i);
    cur <<= 1;
    if (cur & q) cur ^= poly;
  }
  if (cur != 1) {
    throw std::logic_error("reduction polynomial for degree " + std::to_string(r) +
                           " is not primitive");
  }
  for (std::uint32_t i = 0; i < q - 1; ++i) {
    tables->exp[q - 1 + i] = tables->exp[i];
  }

  std::shared_ptr<const Tables> shared = std::move(tables);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(r, shared);
  }
  return Field(FieldKind::binary_extension, q, r, shared);
}

Field Field::of_order(std::uint32_t q) {
  if (q >= 2 && (q & (q - 1)) == 0) {
    std::uint32_t r = 0;
    for (std::uint32_t v = q; v > 1; v >>= 1) ++r;
    return binary_extension(r);
  }
  return prime(q);
}

felem Field::inv(felem a) const {
  if (a == 0) throw std::domain_error("inverse of zero field element");
  if (kind_ == FieldKind::binary_extension) {
    const auto& t = *tables_;
    return t.exp[(q_ - 1) - t.log[a]];
  }
  // Extended Euclid on (a, q); q is prime so gcd is 1.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q_, new_r = a;
  while (new_r != 0) {
    const std::int64_t quotient = r / new_r;
    t = std::exchange(new_t, t - quotient * new_t);
    r = std::exchange(new_r, r - quotient * new_r);
  }
  if (t < 0) t += q_;
  return static_cast<felem>(t);
}

felem Field::pow(felem a, std::uint64_t e) const {
  felem result = 1;
  felem base = a;
  while (e != 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Field select_field(double alpha_target) {
  if (!(alpha_target > 0.0) || alpha_target > 0.5) {
    throw std::invalid_argument("alpha_target must be in (0, 1/2]");
  }
  // q >= 1/alpha, compared as q * alpha >= 1 with a hair of slack so that
  // targets like 1/(e^eps + 1) computed in floating point land on the
  // intended order instead of its neighbor.
  const auto admits = [alpha_target](std::uint32_t q) {
    return static_cast<double>(q) * alpha_target >= 1.0 - 1e-9;
  };
  for (std::uint32_t q = 2; q <= Field::kMaxOrder; ++q) {
    if (!admits(q)) continue;
    const bool power_of_two = (q & (q - 1)) == 0;
    if (power_of_two) return Field::of_order(q);  // tie at equal q: bit-packs exactly
    if (is_prime(q)) return Field::prime(q);
  }
  throw std::invalid_argument("alpha_target requires a field larger than 2^16");
}

felem uniform_element(const Field& field, RngStream& rng) {
  return static_cast<felem>(rng.uniform_below(field.order()));
}

}  // namespace dpset
