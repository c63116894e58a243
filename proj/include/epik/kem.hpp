#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "epik/codec.hpp"
#include "epik/curve.hpp"
#include "epik/engel.hpp"
#include "epik/keys.hpp"
#include "epik/params.hpp"
#include "epik/random.hpp"
#include "epik/sha256.hpp"

namespace epik {

// K = SHA-256 of the canonical j-series serialization.
inline SharedKey derive_key(const LaurentSeries& j) {
  return sha256(codec::encode_series(j));
}

namespace detail {

// The chain walk is a pure function of the curve, so single steps are
// memoized under the curve's canonical serialization.  This keeps repeated
// encap/decap cheap without changing any result.
struct ChainStepCache {
  std::mutex mu;
  std::map<std::string, CurveParams> steps;
  std::map<std::string, std::vector<EngelDigit>> digits;
  std::map<std::string, std::vector<uint8_t>> j_bytes;
};

inline ChainStepCache& chain_step_cache() {
  static ChainStepCache cache;
  return cache;
}

inline std::string curve_cache_key(const CurveParams& E) {
  std::vector<uint8_t> a = codec::encode_series(E.A);
  std::vector<uint8_t> b = codec::encode_series(E.B);
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a.begin(), a.end());
  key.push_back('|');
  key.append(b.begin(), b.end());
  return key;
}

// canonical serialization of j(E), memoized with the chain steps
inline std::vector<uint8_t> j_bytes_cached(const CurveParams& E) {
  std::string key = curve_cache_key(E);
  ChainStepCache& cache = chain_step_cache();
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.j_bytes.find(key);
    if (it != cache.j_bytes.end()) return it->second;
  }
  std::vector<uint8_t> bytes = codec::encode_series(j_invariant(E));
  std::lock_guard<std::mutex> lock(cache.mu);
  return cache.j_bytes.emplace(std::move(key), std::move(bytes)).first->second;
}

inline CurveParams chain_cached(const CurveParams& E0, uint32_t steps) {
  if (steps < 1) throw std::invalid_argument("chain: steps must be >= 1");
  ChainStepCache& cache = chain_step_cache();
  CurveParams E = E0;
  for (uint32_t k = 0; k < steps; ++k) {
    std::string key = curve_cache_key(E);
    {
      std::lock_guard<std::mutex> lock(cache.mu);
      auto it = cache.steps.find(key);
      if (it != cache.steps.end()) {
        E = it->second;
        continue;
      }
    }
    CurveParams next = chain(E, 1);
    std::lock_guard<std::mutex> lock(cache.mu);
    E = cache.steps.emplace(std::move(key), std::move(next)).first->second;
  }
  return E;
}

// The published torsion data of a curve: the deterministic 2-torsion
// x-series, Engel-encoded to depth M and truncated to the preset's wire
// precision.  Memoized alongside the chain steps.
inline std::vector<EngelDigit> published_digits(const ParamSet& params,
                                                const CurveParams& E) {
  std::string key = std::to_string(params.id) + ':' + curve_cache_key(E);
  ChainStepCache& cache = chain_step_cache();
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.digits.find(key);
    if (it != cache.digits.end()) return it->second;
  }
  auto root = smallest_simple_fiber_root(E);
  if (!root) throw std::domain_error("keygen: no simple fiber root mod p");
  TorsionPoint P = two_torsion_lift(E, *root);
  EngelExpansion e = engel_encode(P.x, params.M);
  std::vector<EngelDigit> out;
  out.reserve(e.digits.size());
  for (const EngelDigit& d : e.digits) out.push_back(codec::truncate_digit(d, params));
  std::lock_guard<std::mutex> lock(cache.mu);
  return cache.digits.emplace(std::move(key), std::move(out)).first->second;
}

inline PublicKey public_key_for(const ParamSet& params, const CurveParams& E) {
  return PublicKey{params.id, published_digits(params, E), j_invariant(E)};
}

inline bool same_digits(const std::vector<EngelDigit>& a, const std::vector<EngelDigit>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].same_value(b[i])) return false;
  }
  return true;
}

// Recovers the chain curve a public key publishes.  Chains are deterministic
// from the base curve, so the published digits and j-invariant identify the
// depth; returns (curve, depth).  Throws for keys that match no depth.
inline std::pair<CurveParams, uint32_t> match_public_curve(const PublicKey& pk) {
  const ParamSet* params = preset_by_id(pk.preset_id);
  if (!params) throw std::invalid_argument("kem: unknown preset");
  std::vector<uint8_t> pk_j = codec::encode_series(pk.j_n);
  CurveParams base = base_curve(params->prime, params->policy);
  for (uint32_t k = 1; k <= params->n_max; ++k) {
    CurveParams E = chain_cached(base, k);
    if (j_bytes_cached(E) != pk_j) continue;
    if (!same_digits(published_digits(*params, E), pk.digits)) {
      throw std::invalid_argument("kem: public key digits inconsistent with its curve");
    }
    return {std::move(E), k};
  }
  throw std::invalid_argument("kem: public key matches no chain curve");
}

// SHA-256(K || counter) blocks, enough for len bytes.
inline std::vector<uint8_t> keystream(const SharedKey& key, size_t len) {
  std::vector<uint8_t> out;
  out.reserve(len);
  uint64_t counter = 0;
  while (out.size() < len) {
    Sha256 h;
    h.update(key.data(), key.size());
    uint8_t ctr[8];
    for (int i = 0; i < 8; ++i) ctr[i] = static_cast<uint8_t>(counter >> (8 * i));
    h.update(ctr, 8);
    std::array<uint8_t, 32> block = h.finalize();
    size_t take = std::min<size_t>(block.size(), len - out.size());
    out.insert(out.end(), block.begin(), block.begin() + static_cast<long>(take));
    ++counter;
  }
  return out;
}

}  // namespace detail

// Samples n in [1, n_max], walks n deterministic 2-isogeny steps from the
// base curve, and publishes the codomain's Engel-encoded torsion data and
// j-invariant.
inline std::pair<PublicKey, SecretKey> keygen(const ParamSet& params, RandomSource& rng) {
  uint32_t n = rng.uniform(1, params.n_max);
  CurveParams base = base_curve(params.prime, params.policy);
  CurveParams E_n = detail::chain_cached(base, n);
  return {detail::public_key_for(params, E_n), SecretKey{params.id, n}};
}

// Samples r, publishes E^(r), and derives K from j(E^(n+r)) by extending the
// chain from the public key's curve (the encapsulator never learns n).
inline std::pair<Ciphertext, SharedKey> encap(const PublicKey& pk, RandomSource& rng) {
  const ParamSet* params = preset_by_id(pk.preset_id);
  if (!params) throw std::invalid_argument("encap: unknown preset");
  uint32_t r = rng.uniform(1, params->n_max);
  CurveParams base = base_curve(params->prime, params->policy);
  CurveParams E_r = detail::chain_cached(base, r);
  auto [E_n, n_depth] = detail::match_public_curve(pk);
  (void)n_depth;
  CurveParams E_nr = detail::chain_cached(E_n, r);
  SharedKey key = sha256(detail::j_bytes_cached(E_nr));
  Ciphertext ct{params->id, E_r.A, E_r.B, {}};
  return {std::move(ct), key};
}

// Recomputes E^(n+r) by walking n steps from the received E^(r).
inline SharedKey decap(const SecretKey& sk, const Ciphertext& ct) {
  const ParamSet* params = preset_by_id(sk.preset_id);
  if (!params) throw std::invalid_argument("decap: unknown preset");
  if (ct.preset_id != sk.preset_id) throw std::invalid_argument("decap: preset mismatch");
  if (sk.n < 1 || sk.n > params->n_max) throw std::invalid_argument("decap: bad secret");
  CurveParams E_r(params->prime, ct.A_r, ct.B_r);
  CurveParams E_nr = detail::chain_cached(E_r, sk.n);
  return sha256(detail::j_bytes_cached(E_nr));
}

// PKE demo mode: the ciphertext carries the message XORed with a counter-mode
// keystream expanded from K.
inline Ciphertext pke_encrypt(const PublicKey& pk, const std::vector<uint8_t>& message,
                              RandomSource& rng) {
  auto [ct, key] = encap(pk, rng);
  std::vector<uint8_t> stream = detail::keystream(key, message.size());
  ct.payload.resize(message.size());
  for (size_t i = 0; i < message.size(); ++i) ct.payload[i] = message[i] ^ stream[i];
  return ct;
}

inline std::vector<uint8_t> pke_decrypt(const SecretKey& sk, const Ciphertext& ct) {
  SharedKey key = decap(sk, ct);
  std::vector<uint8_t> stream = detail::keystream(key, ct.payload.size());
  std::vector<uint8_t> out(ct.payload.size());
  for (size_t i = 0; i < ct.payload.size(); ++i) out[i] = ct.payload[i] ^ stream[i];
  return out;
}

// The keyspace is exhaustively searchable: recomputes the public data for
// every candidate n and returns the match.
inline uint32_t brute_force_recover_n(const PublicKey& pk) {
  return detail::match_public_curve(pk).second;
}

}  // namespace epik
