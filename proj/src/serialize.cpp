// Copyright (c) the dpset authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0 for details.

#include "dpset/serialize.hpp"

#include <cmath>
#include <cstring>

namespace dpset {

namespace {

constexpr std::uint8_t kMagic[4] = {'D', 'P', 'S', 'T'};
constexpr std::uint8_t kTagSolution = 0;
constexpr std::uint8_t kTagFallback = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8(const char* field) {
    need(1, field);
    return bytes_[pos_++];
  }

  std::uint16_t u16(const char* field) {
    need(2, field);
    const std::uint16_t v = static_cast<std::uint16_t>(
        bytes_[pos_] | (static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32(const char* field) {
    need(4, field);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 4;
    return v;
  }

  std::span<const std::uint8_t> raw(std::size_t n, const char* field) {
    need(n, field);
    auto view = bytes_.subspan(pos_, n);
    pos_ += n;
    return view;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* field) {
    if (bytes_.size() - pos_ < n) {
      throw ParseError(field, "truncated at offset " + std::to_string(pos_));
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

HashSeed read_seed(Reader& reader, const char* field) {
  HashSeed seed;
  auto view = reader.raw(seed.bytes.size(), field);
  std::memcpy(seed.bytes.data(), view.data(), seed.bytes.size());
  return seed;
}

void pack_elements(std::vector<std::uint8_t>& out, const std::vector<felem>& values,
                   std::uint32_t bits) {
  std::uint64_t acc = 0;
  std::uint32_t acc_bits = 0;
  for (const felem v : values) {
    acc |= static_cast<std::uint64_t>(v) << acc_bits;
    acc_bits += bits;
    while (acc_bits >= 8) {
      out.push_back(static_cast<std::uint8_t>(acc));
      acc >>= 8;
      acc_bits -= 8;
    }
  }
  if (acc_bits > 0) out.push_back(static_cast<std::uint8_t>(acc));
}

std::vector<felem> unpack_elements(std::span<const std::uint8_t> bytes,
                                   std::uint32_t count, std::uint32_t bits,
                                   std::uint32_t q) {
  std::vector<felem> values(count);
  std::uint64_t acc = 0;
  std::uint32_t acc_bits = 0;
  std::size_t pos = 0;
  const std::uint32_t mask = bits == 32 ? ~0u : (1u << bits) - 1;
  for (auto& v : values) {
    while (acc_bits < bits) {
      acc |= static_cast<std::uint64_t>(bytes[pos++]) << acc_bits;
      acc_bits += 8;
    }
    v = static_cast<felem>(acc & mask);
    if (v >= q) throw ParseError("payload", "packed element out of field range");
    acc >>= bits;
    acc_bits -= bits;
  }
  if (acc != 0) throw ParseError("payload", "nonzero padding bits");
  return values;
}

}  // namespace

std::size_t solution_payload_bytes(const Params& params) {
  if (params.mode == Mode::trivial) return 0;
  const std::uint64_t bits =
      static_cast<std::uint64_t>(params.m) * params.field->bits_per_element();
  return static_cast<std::size_t>((bits + 7) / 8);
}

std::vector<std::uint8_t> serialize(const Encoding& enc) {
  const Params& p = enc.params;
  if (p.mode != Mode::trivial && !p.field) {
    throw std::invalid_argument("encoding is missing its field");
  }
  if (enc.is_fallback() && p.mode != Mode::band) {
    throw std::invalid_argument("fallback payload outside band mode");
  }
  if (!enc.is_fallback() && enc.solution().size() != p.m) {
    throw std::invalid_argument("solution length does not match m");
  }

  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + (enc.is_fallback() ? 0 : solution_payload_bytes(p)));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kFormatVersion);
  out.push_back(static_cast<std::uint8_t>(p.mode));
  out.push_back(p.field ? static_cast<std::uint8_t>(p.field->kind()) : 0);
  put_u32(out, p.field ? p.field->order() : 0);
  put_u32(out, p.m);
  put_u32(out, p.w);
  put_u32(out, p.k_hat);
  out.insert(out.end(), enc.h_seed.bytes.begin(), enc.h_seed.bytes.end());
  out.insert(out.end(), enc.h1_seed.bytes.begin(), enc.h1_seed.bytes.end());
  out.insert(out.end(), enc.h2_seed.bytes.begin(), enc.h2_seed.bytes.end());

  if (enc.is_fallback()) {
    out.push_back(kTagFallback);
    const auto& set = enc.fallback_set();
    put_u32(out, static_cast<std::uint32_t>(set.size()));
    for (const auto& element : set) {
      if (element.size() > 0xFFFF) {
        throw std::invalid_argument("fallback element longer than 65535 bytes");
      }
      put_u16(out, static_cast<std::uint16_t>(element.size()));
      out.insert(out.end(), element.begin(), element.end());
    }
  } else {
    out.push_back(kTagSolution);
    if (p.field) pack_elements(out, enc.solution(), p.field->bits_per_element());
  }
  return out;
}

Encoding deserialize(std::span<const std::uint8_t> bytes) {
  Reader reader(bytes);

  const auto magic = reader.raw(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw ParseError("magic", "not a DPST object");
  }
  const std::uint8_t version = reader.u8("version");
  if (version != kFormatVersion) {
    throw ParseError("version", "unsupported version " + std::to_string(version));
  }
  const std::uint8_t mode_byte = reader.u8("mode");
  if (mode_byte > 2) throw ParseError("mode", "unknown mode " + std::to_string(mode_byte));
  const Mode mode = static_cast<Mode>(mode_byte);
  const std::uint8_t kind_byte = reader.u8("field_kind");
  if (kind_byte > 1) {
    throw ParseError("field_kind", "unknown kind " + std::to_string(kind_byte));
  }
  const std::uint32_t q = reader.u32("q");
  const std::uint32_t m = reader.u32("m");
  const std::uint32_t w = reader.u32("w");
  const std::uint32_t k_hat = reader.u32("k_hat");

  Params params;
  params.mode = mode;
  params.m = m;
  params.w = w;
  params.k_hat = k_hat;

  if (mode == Mode::trivial) {
    if (q != 0) throw ParseError("q", "must be 0 in trivial mode");
    if (m != 0) throw ParseError("m", "must be 0 in trivial mode");
    if (w != 0) throw ParseError("w", "must be 0 in trivial mode");
    params.alpha = 0.5;
    params.p = 1.0;
  } else {
    Field field = [&] {
      try {
        return Field::of_order(q);
      } catch (const std::invalid_argument& e) {
        throw ParseError("q", e.what());
      }
    }();
    if (field.kind() != static_cast<FieldKind>(kind_byte)) {
      throw ParseError("field_kind", "does not match field order");
    }
    params.field = field;
    params.alpha = 1.0 / field.order();
    params.p = params.alpha / (1.0 - params.alpha);
    params.epsilon_achieved = std::log((1.0 - params.alpha) / params.alpha);
    params.epsilon_target = params.epsilon_achieved;
    if (k_hat < 1) throw ParseError("k_hat", "must be at least 1");
    if (mode == Mode::band) {
      if (m < 1) throw ParseError("m", "must be at least 1");
      if (w < 1 || w > m) throw ParseError("w", "band width out of range");
      params.beta = static_cast<double>(m) / k_hat - 1.0;
    } else {
      if (m != k_hat) throw ParseError("m", "must equal k_hat in vandermonde mode");
      if (w != 0) throw ParseError("w", "must be 0 in vandermonde mode");
      if (k_hat > q) throw ParseError("k_hat", "exceeds field order");
    }
  }

  Encoding enc;
  enc.params = std::move(params);
  enc.h_seed = read_seed(reader, "h_seed");
  enc.h1_seed = read_seed(reader, "h1_seed");
  enc.h2_seed = read_seed(reader, "h2_seed");
  if (mode != Mode::band) {
    if (!enc.h1_seed.is_zero()) throw ParseError("h1_seed", "must be zero-filled");
    if (!enc.h2_seed.is_zero()) throw ParseError("h2_seed", "must be zero-filled");
  }

  const std::uint8_t tag = reader.u8("payload_tag");
  if (tag == kTagSolution) {
    if (mode == Mode::trivial) {
      if (reader.remaining() != 0) throw ParseError("length", "trailing bytes");
      enc.payload = std::vector<felem>{};
      return enc;
    }
    const std::uint32_t bits = enc.params.field->bits_per_element();
    const std::size_t payload_len = solution_payload_bytes(enc.params);
    const auto packed = reader.raw(payload_len, "payload");
    if (reader.remaining() != 0) throw ParseError("length", "trailing bytes");
    enc.payload =
        unpack_elements(packed, enc.params.m, bits, enc.params.field->order());
    return enc;
  }
  if (tag == kTagFallback) {
    if (mode != Mode::band) {
      throw ParseError("payload_tag", "fallback is only possible in band mode");
    }
    const std::uint32_t count = reader.u32("payload");
    std::vector<UniverseElement> set;
    set.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::uint16_t len = reader.u16("payload");
      const auto view = reader.raw(len, "payload");
      set.emplace_back(view.begin(), view.end());
    }
    if (reader.remaining() != 0) throw ParseError("length", "trailing bytes");
    enc.payload = std::move(set);
    return enc;
  }
  throw ParseError("payload_tag", "unknown tag " + std::to_string(tag));
}

}  // namespace dpset
