#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "epik/engel.hpp"
#include "epik/keys.hpp"
#include "epik/laurent.hpp"
#include "epik/params.hpp"

namespace epik::codec {

// --- bit-level plumbing (MSB-first within each field) ---

class BitWriter {
 public:
  void write(uint64_t value, uint32_t bits) {
    for (int i = static_cast<int>(bits) - 1; i >= 0; --i) {
      push_bit((value >> i) & 1);
    }
  }

  void write_bytes(const uint8_t* data, size_t n) {
    for (size_t i = 0; i < n; ++i) write(data[i], 8);
  }

  size_t bit_count() const { return bits_; }

  // zero-pads the final partial byte
  std::vector<uint8_t> take() { return std::move(bytes_); }
  const std::vector<uint8_t>& bytes() const { return bytes_; }

 private:
  void push_bit(uint64_t b) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if (b) bytes_.back() |= static_cast<uint8_t>(1u << (7 - bits_ % 8));
    ++bits_;
  }

  std::vector<uint8_t> bytes_;
  size_t bits_ = 0;
};

class BitReader {
 public:
  BitReader(const uint8_t* data, size_t byte_len) : data_(data), bit_len_(byte_len * 8) {}

  uint64_t read(uint32_t bits) {
    uint64_t v = 0;
    for (uint32_t i = 0; i < bits; ++i) {
      if (pos_ >= bit_len_) throw std::invalid_argument("codec: truncated input");
      uint8_t byte = data_[pos_ / 8];
      v = (v << 1) | ((byte >> (7 - pos_ % 8)) & 1);
      ++pos_;
    }
    return v;
  }

  size_t position() const { return pos_; }
  size_t remaining() const { return bit_len_ - pos_; }

 private:
  const uint8_t* data_;
  size_t bit_len_;
  size_t pos_ = 0;
};

namespace detail {

// little helpers over byte streams

inline void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t len) : data_(data), len_(len) {}

  uint8_t u8() { need(1); return data_[pos_++]; }

  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  const uint8_t* raw(size_t n) {
    need(n);
    const uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  size_t position() const { return pos_; }
  size_t remaining() const { return len_ - pos_; }

 private:
  void need(size_t n) const {
    if (pos_ + n > len_) throw std::invalid_argument("codec: truncated input");
  }
  const uint8_t* data_;
  size_t len_;
  size_t pos_ = 0;
};

// Number of bits in p^R, i.e. ceil(R * log2 p) for non-power-of-two p.
inline uint32_t mantissa_bits(uint32_t prime, uint32_t digits) {
  std::vector<uint32_t> limbs{1};  // base 2^32
  for (uint32_t i = 0; i < digits; ++i) {
    uint64_t carry = 0;
    for (uint32_t& limb : limbs) {
      uint64_t t = static_cast<uint64_t>(limb) * prime + carry;
      limb = static_cast<uint32_t>(t);
      carry = t >> 32;
    }
    if (carry) limbs.push_back(static_cast<uint32_t>(carry));
  }
  uint32_t top = limbs.back();
  uint32_t bits = static_cast<uint32_t>(limbs.size() - 1) * 32;
  while (top) { ++bits; top >>= 1; }
  return bits;
}

// Packs base-p digits d_0..d_{R-1} as the binary form of sum d_i p^i,
// MSB-first in exactly mantissa_bits(prime, R) bits.
inline void pack_mantissa(BitWriter& w, const std::vector<uint32_t>& digits_lo_to_hi,
                          uint32_t prime, uint32_t R) {
  std::vector<uint32_t> limbs{0};
  for (size_t i = digits_lo_to_hi.size(); i-- > 0;) {
    uint64_t carry = digits_lo_to_hi[i];
    for (uint32_t& limb : limbs) {
      uint64_t t = static_cast<uint64_t>(limb) * prime + carry;
      limb = static_cast<uint32_t>(t);
      carry = t >> 32;
    }
    while (carry) {
      limbs.push_back(static_cast<uint32_t>(carry));
      carry >>= 32;
    }
  }
  uint32_t bits = mantissa_bits(prime, R);
  for (int i = static_cast<int>(bits) - 1; i >= 0; --i) {
    uint32_t limb = static_cast<uint32_t>(i) / 32;
    uint32_t bit = limb < limbs.size() ? (limbs[limb] >> (i % 32)) & 1 : 0;
    w.write(bit, 1);
  }
}

inline std::vector<uint32_t> unpack_mantissa(BitReader& r, uint32_t prime, uint32_t R) {
  uint32_t bits = mantissa_bits(prime, R);
  std::vector<uint32_t> limbs((bits + 31) / 32, 0);
  for (int i = static_cast<int>(bits) - 1; i >= 0; --i) {
    if (r.read(1)) limbs[static_cast<uint32_t>(i) / 32] |= 1u << (i % 32);
  }
  std::vector<uint32_t> digits(R, 0);
  for (uint32_t i = 0; i < R; ++i) {
    // divmod by p across limbs, high to low
    uint64_t rem = 0;
    for (size_t j = limbs.size(); j-- > 0;) {
      uint64_t cur = (rem << 32) | limbs[j];
      limbs[j] = static_cast<uint32_t>(cur / prime);
      rem = cur % prime;
    }
    digits[i] = static_cast<uint32_t>(rem);
  }
  return digits;
}

constexpr int16_t kZeroCoeffSentinel = INT16_MAX;

}  // namespace detail

// --- canonical series form ---
// [prime u16][t_order i32][W u8][R u8][ncoeff u8] then per coefficient a
// 2-byte signed valuation (INT16_MAX marks an exact zero) and the mantissa
// packed into ceil(R log2 p) bits, byte-aligned per coefficient.  The zero
// series stores ncoeff = 0 and is exactly 9 bytes.
inline std::vector<uint8_t> encode_series(const LaurentSeries& f) {
  uint32_t W = f.policy().window;
  uint32_t R = f.policy().digits;
  if (W > 255 || R > 255) throw std::invalid_argument("encode_series: policy too large for wire form");
  std::vector<uint8_t> out;
  detail::put_u16(out, static_cast<uint16_t>(f.prime()));
  detail::put_u32(out, static_cast<uint32_t>(f.is_zero() ? 0 : f.t_order()));
  out.push_back(static_cast<uint8_t>(W));
  out.push_back(static_cast<uint8_t>(R));
  out.push_back(static_cast<uint8_t>(f.is_zero() ? 0 : W));
  if (f.is_zero()) return out;
  for (const PadicScalar& c : f.coefficients()) {
    BitWriter w;
    if (c.is_zero()) {
      detail::put_u16(out, static_cast<uint16_t>(detail::kZeroCoeffSentinel));
      detail::pack_mantissa(w, {}, f.prime(), R);
    } else {
      int32_t v = c.valuation();
      if (v <= INT16_MIN || v >= detail::kZeroCoeffSentinel) {
        throw std::invalid_argument("encode_series: valuation out of wire range");
      }
      detail::put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
      std::vector<uint32_t> d = c.digits();
      d.resize(R, 0);
      detail::pack_mantissa(w, d, f.prime(), R);
    }
    std::vector<uint8_t> bits = w.take();
    out.insert(out.end(), bits.begin(), bits.end());
  }
  return out;
}

inline LaurentSeries decode_series(detail::ByteReader& in, const PrecisionPolicy& policy) {
  uint32_t prime = in.u16();
  int32_t t_order = static_cast<int32_t>(in.u32());
  uint32_t W = in.u8();
  uint32_t R = in.u8();
  uint32_t ncoeff = in.u8();
  if (W != policy.window || R != policy.digits) {
    throw std::invalid_argument("decode_series: policy mismatch");
  }
  if (ncoeff == 0) return LaurentSeries::zero(prime, policy);
  if (ncoeff != W) throw std::invalid_argument("decode_series: bad coefficient count");
  uint32_t mant_bytes = (detail::mantissa_bits(prime, R) + 7) / 8;
  std::vector<PadicScalar> coeffs;
  coeffs.reserve(W);
  for (uint32_t i = 0; i < W; ++i) {
    int16_t v = static_cast<int16_t>(in.u16());
    const uint8_t* raw = in.raw(mant_bytes);
    BitReader bits(raw, mant_bytes);
    std::vector<uint32_t> digits = detail::unpack_mantissa(bits, prime, R);
    if (v == detail::kZeroCoeffSentinel) {
      coeffs.push_back(PadicScalar::zero(prime, static_cast<int32_t>(R)));
    } else {
      coeffs.push_back(PadicScalar::from_digits(prime, v, std::move(digits)));
    }
  }
  return LaurentSeries::from_coefficients(prime, policy, t_order, std::move(coeffs));
}

inline LaurentSeries decode_series(const std::vector<uint8_t>& bytes,
                                   const PrecisionPolicy& policy) {
  detail::ByteReader in(bytes.data(), bytes.size());
  LaurentSeries f = decode_series(in, policy);
  if (in.remaining() != 0) throw std::invalid_argument("decode_series: trailing bytes");
  return f;
}

// --- published Engel digits ---

// d coefficients, lambda bits each: coefficient j of the unit contributes its
// residue mod p (one base-p digit, the lambda-bit prime making lambda bits
// per digit).  Lossy by design; the scale rides in the key's side table.
inline void encode_digit_bits(BitWriter& w, const EngelDigit& digit, uint32_t d,
                              uint32_t lambda) {
  for (uint32_t j = 0; j < d; ++j) {
    PadicScalar c = digit.unit().coeff(static_cast<int32_t>(j));
    w.write(c.is_zero() ? 0 : c.residue(), lambda);
  }
}

inline std::vector<uint8_t> encode_digit(const EngelDigit& digit, uint32_t d, uint32_t lambda) {
  if (d < 4 || d > 16 || lambda < 8 || lambda > 16) {
    throw std::invalid_argument("encode_digit: knob out of range");
  }
  BitWriter w;
  encode_digit_bits(w, digit, d, lambda);
  return w.take();
}

// Re-embeds packed residues at working precision; empty when the block holds
// no digit (all residues zero).
inline std::optional<EngelDigit> decode_digit_bits(BitReader& r, uint32_t scale, uint32_t d,
                                                   uint32_t lambda, uint32_t prime,
                                                   const PrecisionPolicy& policy) {
  std::vector<PadicScalar> coeffs;
  coeffs.reserve(d);
  bool all_zero = true;
  for (uint32_t j = 0; j < d; ++j) {
    uint64_t res = r.read(lambda);
    if (res >= prime) throw std::invalid_argument("decode_digit: residue out of range");
    if (res != 0) all_zero = false;
    coeffs.push_back(PadicScalar::from_integer(static_cast<int64_t>(res), prime,
                                               policy.digits));
  }
  if (all_zero) return std::nullopt;
  LaurentSeries unit = LaurentSeries::from_coefficients(prime, policy, 0, std::move(coeffs));
  return EngelDigit(scale, std::move(unit));
}

// The truncated form a digit takes on the wire (identical to an
// encode/decode round trip).
inline EngelDigit truncate_digit(const EngelDigit& digit, const ParamSet& params) {
  BitWriter w;
  encode_digit_bits(w, digit, params.d, params.lambda);
  std::vector<uint8_t> bytes = w.take();
  BitReader r(bytes.data(), bytes.size());
  auto out = decode_digit_bits(r, digit.scale(), params.d, params.lambda, params.prime,
                               params.policy);
  if (!out) throw std::domain_error("truncate_digit: digit vanishes at preset precision");
  return *out;
}

// --- lossless digit lists (CLI utility surface) ---
// [prime u16][count u16] then per digit [scale u16][encode_series(unit)].
inline std::vector<uint8_t> encode_digits(const std::vector<EngelDigit>& digits,
                                          uint32_t prime) {
  std::vector<uint8_t> out;
  detail::put_u16(out, static_cast<uint16_t>(prime));
  detail::put_u16(out, static_cast<uint16_t>(digits.size()));
  for (const EngelDigit& d : digits) {
    detail::put_u16(out, static_cast<uint16_t>(d.scale()));
    std::vector<uint8_t> unit = encode_series(d.unit());
    out.insert(out.end(), unit.begin(), unit.end());
  }
  return out;
}

inline std::vector<EngelDigit> decode_digits(const std::vector<uint8_t>& bytes,
                                             const PrecisionPolicy& policy) {
  detail::ByteReader in(bytes.data(), bytes.size());
  uint32_t prime = in.u16();
  uint32_t count = in.u16();
  std::vector<EngelDigit> out;
  out.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t scale = in.u16();
    LaurentSeries unit = decode_series(in, policy);
    if (unit.prime() != prime) throw std::invalid_argument("decode_digits: prime mismatch");
    out.emplace_back(scale, std::move(unit));
  }
  if (in.remaining() != 0) throw std::invalid_argument("decode_digits: trailing bytes");
  return out;
}

// --- wire header ---

inline constexpr uint8_t kMagic[4] = {'E', 'P', 'I', 'K'};
inline constexpr uint8_t kVersion = 1;
inline constexpr size_t kHeaderBytes = 17;

inline void write_header(std::vector<uint8_t>& out, const ParamSet& params) {
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  out.push_back(params.id);
  detail::put_u32(out, params.prime);
  out.push_back(static_cast<uint8_t>(params.lambda));
  out.push_back(static_cast<uint8_t>(params.d));
  out.push_back(static_cast<uint8_t>(params.M));
  detail::put_u32(out, params.ell_e_log);
}

inline const ParamSet& read_header(detail::ByteReader& in) {
  const uint8_t* magic = in.raw(4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::invalid_argument("codec: bad magic");
  if (in.u8() != kVersion) throw std::invalid_argument("codec: unsupported version");
  uint8_t id = in.u8();
  const ParamSet* params = preset_by_id(id);
  if (!params) throw std::invalid_argument("codec: unknown preset id");
  uint32_t prime = in.u32();
  uint32_t lambda = in.u8();
  uint32_t d = in.u8();
  uint32_t M = in.u8();
  uint32_t ell = in.u32();
  if (prime != params->prime || lambda != params->lambda || d != params->d ||
      M != params->M || ell != params->ell_e_log) {
    throw std::invalid_argument("codec: header inconsistent with registered preset");
  }
  return *params;
}

// --- public keys ---

// |pk body| = M d lambda + ell_e_log bits.
inline uint64_t pk_size_bits(const ParamSet& params) {
  return static_cast<uint64_t>(params.M) * params.d * params.lambda + params.ell_e_log;
}

// Body layout: M digit blocks of d*lambda bits (absent digits zero-padded),
// then the ell_e_log-bit capacity field holding [count u8][scales M x u16]
// [canonical j series][zero padding].  The header is excluded from the size
// formula.
inline std::vector<uint8_t> encode_pk(const PublicKey& pk) {
  const ParamSet* params = preset_by_id(pk.preset_id);
  if (!params) throw std::invalid_argument("encode_pk: unknown preset");
  if (pk.digits.size() > params->M) throw std::invalid_argument("encode_pk: too many digits");

  BitWriter body;
  for (const EngelDigit& d : pk.digits) encode_digit_bits(body, d, params->d, params->lambda);
  for (size_t i = pk.digits.size(); i < params->M; ++i) {
    body.write(0, params->d * params->lambda);
  }

  std::vector<uint8_t> field;
  field.push_back(static_cast<uint8_t>(pk.digits.size()));
  for (const EngelDigit& d : pk.digits) detail::put_u16(field, static_cast<uint16_t>(d.scale()));
  for (size_t i = pk.digits.size(); i < params->M; ++i) detail::put_u16(field, 0);
  std::vector<uint8_t> jbytes = encode_series(pk.j_n);
  field.insert(field.end(), jbytes.begin(), jbytes.end());
  if (field.size() * 8 > params->ell_e_log) {
    throw std::invalid_argument("encode_pk: capacity field overflow");
  }
  field.resize(params->ell_e_log / 8 + (params->ell_e_log % 8 ? 1 : 0), 0);
  uint32_t field_bits = params->ell_e_log;
  for (size_t i = 0; i < field.size() && field_bits > 0; ++i) {
    uint32_t take = std::min<uint32_t>(8, field_bits);
    body.write(field[i] >> (8 - take), take);
    field_bits -= take;
  }

  if (body.bit_count() != pk_size_bits(*params)) {
    throw std::logic_error("encode_pk: body size mismatch");
  }
  std::vector<uint8_t> out;
  write_header(out, *params);
  std::vector<uint8_t> b = body.take();
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline PublicKey decode_pk(const std::vector<uint8_t>& bytes) {
  detail::ByteReader header_in(bytes.data(), bytes.size());
  const ParamSet& params = read_header(header_in);
  size_t body_off = header_in.position();
  uint64_t body_bits = pk_size_bits(params);
  if ((bytes.size() - body_off) * 8 < body_bits) {
    throw std::invalid_argument("decode_pk: truncated body");
  }
  BitReader body(bytes.data() + body_off, bytes.size() - body_off);

  // digit section first; scales arrive in the capacity field, so stage raw blocks
  std::vector<std::vector<uint8_t>> blocks;
  blocks.reserve(params.M);
  for (uint32_t i = 0; i < params.M; ++i) {
    BitWriter block;
    for (uint32_t b = 0; b < params.d * params.lambda; ++b) block.write(body.read(1), 1);
    blocks.push_back(block.take());
  }

  std::vector<uint8_t> field((params.ell_e_log + 7) / 8, 0);
  for (uint32_t i = 0; i < params.ell_e_log; ++i) {
    if (body.read(1)) field[i / 8] |= static_cast<uint8_t>(1u << (7 - i % 8));
  }
  detail::ByteReader fin(field.data(), field.size());
  uint32_t count = fin.u8();
  if (count > params.M) throw std::invalid_argument("decode_pk: digit count exceeds depth");
  std::vector<uint16_t> scales(params.M);
  for (uint32_t i = 0; i < params.M; ++i) scales[i] = fin.u16();
  LaurentSeries j_n = decode_series(fin, params.policy);
  while (fin.remaining() > 0) {
    if (fin.u8() != 0) throw std::invalid_argument("decode_pk: nonzero padding");
  }

  std::vector<EngelDigit> digits;
  digits.reserve(count);
  for (uint32_t i = 0; i < params.M; ++i) {
    BitReader block(blocks[i].data(), blocks[i].size());
    auto digit = decode_digit_bits(block, scales[i], params.d, params.lambda, params.prime,
                                   params.policy);
    if (i < count) {
      if (!digit) throw std::invalid_argument("decode_pk: empty digit block");
      digits.push_back(std::move(*digit));
    } else if (digit || scales[i] != 0) {
      throw std::invalid_argument("decode_pk: nonzero digit padding");
    }
  }
  return PublicKey{params.id, std::move(digits), std::move(j_n)};
}

// --- secret keys ---

inline std::vector<uint8_t> encode_sk(const SecretKey& sk) {
  const ParamSet* params = preset_by_id(sk.preset_id);
  if (!params) throw std::invalid_argument("encode_sk: unknown preset");
  if (sk.n < 1 || sk.n > params->n_max) throw std::invalid_argument("encode_sk: n out of range");
  std::vector<uint8_t> out;
  write_header(out, *params);
  out.push_back(static_cast<uint8_t>(sk.n));
  return out;
}

inline SecretKey decode_sk(const std::vector<uint8_t>& bytes) {
  detail::ByteReader in(bytes.data(), bytes.size());
  const ParamSet& params = read_header(in);
  uint32_t n = in.u8();
  if (in.remaining() != 0) throw std::invalid_argument("decode_sk: trailing bytes");
  if (n < 1 || n > params.n_max) throw std::invalid_argument("decode_sk: n out of range");
  return SecretKey{params.id, n};
}

// --- ciphertexts ---

inline std::vector<uint8_t> encode_ct(const Ciphertext& ct) {
  const ParamSet* params = preset_by_id(ct.preset_id);
  if (!params) throw std::invalid_argument("encode_ct: unknown preset");
  std::vector<uint8_t> out;
  write_header(out, *params);
  std::vector<uint8_t> a = encode_series(ct.A_r);
  std::vector<uint8_t> b = encode_series(ct.B_r);
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  detail::put_u32(out, static_cast<uint32_t>(ct.payload.size()));
  out.insert(out.end(), ct.payload.begin(), ct.payload.end());
  return out;
}

inline Ciphertext decode_ct(const std::vector<uint8_t>& bytes) {
  detail::ByteReader in(bytes.data(), bytes.size());
  const ParamSet& params = read_header(in);
  LaurentSeries A = decode_series(in, params.policy);
  LaurentSeries B = decode_series(in, params.policy);
  uint32_t len = in.u32();
  if (in.remaining() != len) throw std::invalid_argument("decode_ct: payload length mismatch");
  const uint8_t* raw = in.raw(len);
  return Ciphertext{params.id, std::move(A), std::move(B),
                    std::vector<uint8_t>(raw, raw + len)};
}

// --- hex helpers ---

inline std::string to_hex(const std::vector<uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

inline std::vector<uint8_t> from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex: odd length");
  std::vector<uint8_t> out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("hex: bad character");
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace epik::codec
