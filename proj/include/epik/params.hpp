#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epik/curve.hpp"
#include "epik/laurent.hpp"

namespace epik {

// One registered parameter set.  The four knobs are the prime bit-length
// lambda, the coefficient count d per published Engel digit, the Engel depth
// M, and the public-key capacity field ell_e_log (bits).  The prime is the
// largest lambda-bit prime congruent to 2 mod 3, which keeps the reduced
// fibers supersingular.
struct ParamSet {
  std::string name;
  uint8_t id;
  uint32_t lambda;
  uint32_t d;
  uint32_t M;
  uint32_t ell_e_log;
  uint32_t n_max;
  uint32_t prime;
  PrecisionPolicy policy;
};

inline uint32_t largest_prime_2_mod_3(uint32_t bits) {
  if (bits < 3 || bits > 31) throw std::invalid_argument("no usable prime at this bit length");
  for (uint32_t n = (1u << bits) - 1; n >= (1u << (bits - 1)); --n) {
    if (n % 3 == 2 && is_prime(n)) return n;
  }
  throw std::invalid_argument("no prime = 2 mod 3 at this bit length");
}

namespace detail {

inline uint32_t bit_length(uint32_t v) {
  uint32_t b = 0;
  while (v) { ++b; v >>= 1; }
  return b;
}

inline ParamSet make_param_set(std::string name, uint8_t id, uint32_t lambda, uint32_t d,
                               uint32_t M, uint32_t ell_e_log, uint32_t window,
                               uint32_t digits) {
  if (lambda < 8 || lambda > 16) throw std::invalid_argument("params: lambda out of range");
  if (d < 4 || d > 16) throw std::invalid_argument("params: d out of range");
  if (M < 4 || M > 32) throw std::invalid_argument("params: M out of range");
  if (ell_e_log < 1024 || ell_e_log > 32768) {
    throw std::invalid_argument("params: ell_e_log out of range");
  }
  uint32_t prime = largest_prime_2_mod_3(lambda);
  if (bit_length(prime) != lambda) throw std::logic_error("params: prime width mismatch");
  PrecisionPolicy policy(window, digits);
  if (policy.window < d || policy.digits < d) {
    throw std::invalid_argument("params: policy must cover d");
  }
  return ParamSet{std::move(name), id, lambda, d, M, ell_e_log, 2, prime, policy};
}

}  // namespace detail

inline const std::vector<ParamSet>& presets() {
  static const std::vector<ParamSet> sets = {
      detail::make_param_set("iot", 1, 8, 4, 4, 1024, 4, 16),
      detail::make_param_set("sec128", 2, 8, 8, 8, 16384, 8, 32),
      detail::make_param_set("high", 3, 16, 16, 16, 32768, 16, 32),
  };
  return sets;
}

inline const ParamSet& preset(std::string_view name) {
  for (const ParamSet& s : presets()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown preset: " + std::string(name));
}

inline const ParamSet* preset_by_id(uint8_t id) {
  for (const ParamSet& s : presets()) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

}  // namespace epik
