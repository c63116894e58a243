#include "epik/codec.hpp"

#include <gtest/gtest.h>

#include <random>

#include "epik/kem.hpp"

namespace epik {
namespace {

LaurentSeries random_series(std::mt19937_64& gen, uint32_t prime, PrecisionPolicy policy) {
  std::uniform_int_distribution<uint32_t> digit(0, prime - 1);
  std::vector<PadicScalar> coeffs;
  for (uint32_t i = 0; i < policy.window; ++i) {
    if (gen() % 5 == 0) {
      coeffs.push_back(PadicScalar::zero(prime, static_cast<int32_t>(policy.digits)));
      continue;
    }
    std::vector<uint32_t> d(policy.digits);
    d[0] = 1 + digit(gen) % (prime - 1);
    for (uint32_t j = 1; j < policy.digits; ++j) d[j] = digit(gen);
    int32_t v = static_cast<int32_t>(gen() % 7) - 3;
    coeffs.push_back(PadicScalar::from_digits(prime, v, std::move(d)));
  }
  return LaurentSeries::from_coefficients(prime, policy,
                                          static_cast<int32_t>(gen() % 5) - 2,
                                          std::move(coeffs));
}

TEST(Sha256, NistVectors) {
  auto empty = sha256(nullptr, 0);
  EXPECT_EQ(codec::to_hex(std::vector<uint8_t>(empty.begin(), empty.end())),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const char* abc = "abc";
  auto h = sha256(reinterpret_cast<const uint8_t*>(abc), 3);
  EXPECT_EQ(codec::to_hex(std::vector<uint8_t>(h.begin(), h.end())),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(EncodeSeries, ZeroSeriesIsNineBytes) {
  const ParamSet& params = preset("iot");
  LaurentSeries z = LaurentSeries::zero(params.prime, params.policy);
  std::vector<uint8_t> bytes = codec::encode_series(z);
  EXPECT_EQ(bytes.size(), 9u);
  EXPECT_TRUE(codec::decode_series(bytes, params.policy).is_zero());
}

TEST(EncodeSeries, RoundTripRandomSeries) {
  std::mt19937_64 gen(0xC0DEC1);
  for (const char* name : {"iot", "sec128", "high"}) {
    const ParamSet& params = preset(name);
    for (int i = 0; i < 333; ++i) {
      LaurentSeries f = random_series(gen, params.prime, params.policy).canonicalized();
      std::vector<uint8_t> bytes = codec::encode_series(f);
      LaurentSeries g = codec::decode_series(bytes, params.policy);
      EXPECT_TRUE(g == f);
      EXPECT_EQ(codec::encode_series(g), bytes);
    }
  }
}

TEST(EncodeSeries, CanonicalAcrossComputationPaths) {
  const ParamSet& params = preset("sec128");
  uint32_t p = params.prime;
  uint32_t R = params.policy.digits;
  // (1+pt)(1-pt) vs directly built 1 - p^2 t^2
  std::vector<PadicScalar> c1{PadicScalar::one(p, R), PadicScalar::from_integer(p, p, R)};
  std::vector<PadicScalar> c2{PadicScalar::one(p, R), PadicScalar::from_integer(-static_cast<int64_t>(p), p, R)};
  LaurentSeries f = LaurentSeries::from_coefficients(p, params.policy, 0, std::move(c1));
  LaurentSeries g = LaurentSeries::from_coefficients(p, params.policy, 0, std::move(c2));
  std::vector<PadicScalar> c3{PadicScalar::one(p, R), PadicScalar::zero(p),
                              PadicScalar::from_integer(-static_cast<int64_t>(p) * p, p, R)};
  LaurentSeries direct = LaurentSeries::from_coefficients(p, params.policy, 0, std::move(c3));
  EXPECT_EQ(codec::encode_series((f * g).canonicalized()),
            codec::encode_series(direct.canonicalized()));
}

TEST(EncodeSeries, PolicyMismatchRejected) {
  const ParamSet& iot = preset("iot");
  const ParamSet& sec = preset("sec128");
  std::vector<uint8_t> bytes = codec::encode_series(LaurentSeries::one(iot.prime, iot.policy));
  EXPECT_THROW(codec::decode_series(bytes, sec.policy), std::invalid_argument);
}

TEST(EncodeDigit, UnitDigitPattern) {
  const ParamSet& params = preset("iot");
  EngelDigit d(0, LaurentSeries::one(params.prime, params.policy));
  std::vector<uint8_t> bits = codec::encode_digit(d, params.d, params.lambda);
  EXPECT_EQ(bits.size(), 4u);  // d * lambda = 32 bits
  EXPECT_EQ(codec::to_hex(bits), "01000000");
}

TEST(EncodeDigit, RoundTripOnTruncatedForm) {
  std::mt19937_64 gen(0xC0DEC2);
  const ParamSet& params = preset("iot");
  std::uniform_int_distribution<uint32_t> digit(0, params.prime - 1);
  for (int i = 0; i < 200; ++i) {
    std::vector<PadicScalar> coeffs;
    for (uint32_t j = 0; j < params.policy.window; ++j) {
      coeffs.push_back(PadicScalar::from_integer(j == 0 ? 1 + digit(gen) % (params.prime - 1)
                                                        : digit(gen),
                                                 params.prime, params.policy.digits));
    }
    EngelDigit d(gen() % 5,
                 LaurentSeries::from_coefficients(params.prime, params.policy, 0,
                                                  std::move(coeffs)));
    EngelDigit t = codec::truncate_digit(d, params);
    std::vector<uint8_t> bits = codec::encode_digit(d, params.d, params.lambda);
    EXPECT_EQ(codec::encode_digit(t, params.d, params.lambda), bits);
    EXPECT_TRUE(codec::truncate_digit(t, params).same_value(t));
  }
}

TEST(EncodeDigit, KnobRangeEnforced) {
  const ParamSet& params = preset("iot");
  EngelDigit d(0, LaurentSeries::one(params.prime, params.policy));
  EXPECT_THROW(codec::encode_digit(d, 2, 8), std::invalid_argument);
  EXPECT_THROW(codec::encode_digit(d, 4, 20), std::invalid_argument);
}

TEST(PkSizeBits, PresetGoldenValues) {
  EXPECT_EQ(codec::pk_size_bits(preset("iot")), 1152u);
  EXPECT_EQ(codec::pk_size_bits(preset("sec128")), 16896u);
  EXPECT_EQ(codec::pk_size_bits(preset("high")), 36864u);
}

TEST(PkSizeBits, FormulaAndMonotonicity) {
  ParamSet p = preset("iot");
  p.M = 8;
  EXPECT_EQ(codec::pk_size_bits(p), 8u * 4 * 8 + 1024);  // 1280
  const ParamSet& iot = preset("iot");
  const ParamSet& sec = preset("sec128");
  const ParamSet& high = preset("high");
  EXPECT_LT(codec::pk_size_bits(iot), codec::pk_size_bits(sec));
  EXPECT_LT(codec::pk_size_bits(sec), codec::pk_size_bits(high));
}

TEST(EncodePk, BodyIsExactlyFormulaBits) {
  for (const char* name : {"iot", "sec128", "high"}) {
    const ParamSet& params = preset(name);
    SeededRandom rng(7);
    auto [pk, sk] = keygen(params, rng);
    std::vector<uint8_t> bytes = codec::encode_pk(pk);
    uint64_t body_bits = (bytes.size() - codec::kHeaderBytes) * 8;
    EXPECT_EQ(body_bits, codec::pk_size_bits(params)) << name;
  }
}

TEST(EncodePk, RoundTrip) {
  const ParamSet& params = preset("iot");
  SeededRandom rng(11);
  auto [pk, sk] = keygen(params, rng);
  std::vector<uint8_t> bytes = codec::encode_pk(pk);
  PublicKey back = codec::decode_pk(bytes);
  EXPECT_EQ(back.preset_id, pk.preset_id);
  ASSERT_EQ(back.digits.size(), pk.digits.size());
  for (size_t i = 0; i < pk.digits.size(); ++i) {
    EXPECT_TRUE(back.digits[i].same_value(pk.digits[i]));
  }
  EXPECT_EQ(codec::encode_series(back.j_n), codec::encode_series(pk.j_n));
  EXPECT_EQ(codec::encode_pk(back), bytes);
}

TEST(EncodePk, MalformedInputsRejected) {
  const ParamSet& params = preset("iot");
  SeededRandom rng(13);
  auto [pk, sk] = keygen(params, rng);
  std::vector<uint8_t> bytes = codec::encode_pk(pk);

  std::vector<uint8_t> bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(codec::decode_pk(bad_magic), std::invalid_argument);

  std::vector<uint8_t> bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_THROW(codec::decode_pk(bad_version), std::invalid_argument);

  std::vector<uint8_t> bad_preset = bytes;
  bad_preset[5] = 200;
  EXPECT_THROW(codec::decode_pk(bad_preset), std::invalid_argument);

  std::vector<uint8_t> truncated(bytes.begin(), bytes.end() - 8);
  EXPECT_THROW(codec::decode_pk(truncated), std::invalid_argument);
}

TEST(EncodeCt, RoundTripAndErrors) {
  const ParamSet& params = preset("iot");
  SeededRandom rng(17);
  auto [pk, sk] = keygen(params, rng);
  auto [ct, key] = encap(pk, rng);
  ct.payload = {1, 2, 3, 4, 5};
  std::vector<uint8_t> bytes = codec::encode_ct(ct);
  Ciphertext back = codec::decode_ct(bytes);
  EXPECT_TRUE(back.A_r == ct.A_r);
  EXPECT_TRUE(back.B_r == ct.B_r);
  EXPECT_EQ(back.payload, ct.payload);
  EXPECT_EQ(codec::encode_ct(back), bytes);

  // zero-length payload allowed
  ct.payload.clear();
  EXPECT_TRUE(codec::decode_ct(codec::encode_ct(ct)).payload.empty());

  std::vector<uint8_t> truncated(bytes.begin(), bytes.end() - 3);
  EXPECT_THROW(codec::decode_ct(truncated), std::invalid_argument);
}

TEST(EncodeSk, RoundTrip) {
  SecretKey sk{preset("sec128").id, 2};
  std::vector<uint8_t> bytes = codec::encode_sk(sk);
  SecretKey back = codec::decode_sk(bytes);
  EXPECT_EQ(back.preset_id, sk.preset_id);
  EXPECT_EQ(back.n, sk.n);
  std::vector<uint8_t> bad = bytes;
  bad.back() = 9;
  EXPECT_THROW(codec::decode_sk(bad), std::invalid_argument);
}

TEST(EncodeDigits, LosslessListRoundTrip) {
  std::mt19937_64 gen(0xC0DEC3);
  const ParamSet& params = preset("iot");
  std::uniform_int_distribution<uint32_t> digit(0, params.prime - 1);
  std::vector<EngelDigit> digits;
  for (int i = 0; i < 5; ++i) {
    std::vector<PadicScalar> coeffs;
    for (uint32_t j = 0; j < params.policy.window; ++j) {
      std::vector<uint32_t> d(params.policy.digits);
      d[0] = 1 + digit(gen) % (params.prime - 1);
      for (uint32_t q = 1; q < params.policy.digits; ++q) d[q] = digit(gen);
      coeffs.push_back(PadicScalar::from_digits(params.prime, j == 0 ? 0 : 1, std::move(d)));
    }
    digits.emplace_back(i, LaurentSeries::from_coefficients(params.prime, params.policy, 0,
                                                            std::move(coeffs)));
  }
  std::vector<uint8_t> bytes = codec::encode_digits(digits, params.prime);
  std::vector<EngelDigit> back = codec::decode_digits(bytes, params.policy);
  ASSERT_EQ(back.size(), digits.size());
  for (size_t i = 0; i < digits.size(); ++i) {
    EXPECT_EQ(back[i].scale(), digits[i].scale());
    EXPECT_TRUE(back[i].unit() == digits[i].unit());
  }
}

TEST(Hex, RoundTripAndErrors) {
  std::vector<uint8_t> data{0x00, 0x1f, 0xab, 0xff};
  EXPECT_EQ(codec::to_hex(data), "001fabff");
  EXPECT_EQ(codec::from_hex("001fabff"), data);
  EXPECT_THROW(codec::from_hex("0g"), std::invalid_argument);
  EXPECT_THROW(codec::from_hex("abc"), std::invalid_argument);
}

}  // namespace
}  // namespace epik
