#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "epik/laurent.hpp"

namespace epik {

// One Engel digit a(t) = p^(-scale) * unit(t).  The unit series is integral
// (every coefficient has p-valuation >= 0) and attains valuation 0 somewhere
// in its window, so the digit's value has Gauss valuation exactly -scale.
class EngelDigit {
 public:
  EngelDigit(uint32_t scale, LaurentSeries unit) : scale_(scale), unit_(std::move(unit)) {
    if (unit_.is_zero()) throw std::domain_error("engel digit: zero unit");
    if (unit_.gauss_valuation() != 0) {
      throw std::domain_error("engel digit: unit must attain valuation 0");
    }
    for (const PadicScalar& c : unit_.coefficients()) {
      if (!c.is_zero() && c.valuation() < 0) {
        throw std::domain_error("engel digit: unit must be integral");
      }
    }
  }

  uint32_t scale() const { return scale_; }
  const LaurentSeries& unit() const { return unit_; }

  LaurentSeries value() const { return unit_.scaled_by_p(-static_cast<int32_t>(scale_)); }

  bool same_value(const EngelDigit& o) const {
    return scale_ == o.scale_ && unit_.same_value(o.unit_);
  }

 private:
  uint32_t scale_;
  LaurentSeries unit_;
};

struct EngelExpansion {
  std::vector<EngelDigit> digits;
  // Gauss valuation of the k-th reconstruction residual f - S_k, one entry
  // per digit (strictly increasing); the entry is omitted when the residual
  // hits exact zero.
  std::vector<int32_t> residual_valuations;
  bool terminated = false;
};

// Coefficient-wise leading-part extraction: applies the p-adic integer part
// to every coefficient of g and scales the result integral.  The dropped
// remainder g - value has Gauss valuation >= 1.
inline EngelDigit leading_part(const LaurentSeries& g) {
  if (g.is_zero()) throw std::domain_error("leading_part: zero input");
  int32_t gv = g.gauss_valuation();
  uint32_t s = gv < 0 ? static_cast<uint32_t>(-gv) : 0;
  std::vector<PadicScalar> parts;
  parts.reserve(g.coefficients().size());
  for (const PadicScalar& c : g.coefficients()) parts.push_back(c.integer_part());
  LaurentSeries value = LaurentSeries::from_coefficients(g.prime(), g.policy(),
                                                         g.t_order(), std::move(parts));
  if (value.is_zero()) {
    throw std::domain_error("leading_part: no digits at or below p^0");
  }
  return EngelDigit(s, value.scaled_by_p(static_cast<int32_t>(s)));
}

// Greedy Engel encoder via the residual recursion
//   x_1 = f,  a_k = leading_part(inv(x_k)),  x_{k+1} = a_k * x_k - 1.
// Every step raises the reconstruction residual's Gauss valuation by at
// least 1; residual_valuations records gauss(f - S_k) from the running
// partial sums.  Stops on an exact-zero recursion residual, on residual
// valuation beyond the digit precision, or at max_depth.
inline EngelExpansion engel_encode(const LaurentSeries& f, uint32_t max_depth) {
  EngelExpansion e;
  if (f.is_zero()) {
    e.terminated = true;
    return e;
  }
  if (f.gauss_valuation() < 0) {
    throw std::domain_error("engel_encode: input must have non-negative Gauss valuation");
  }
  const int32_t R = static_cast<int32_t>(f.policy().digits);
  LaurentSeries one = LaurentSeries::one(f.prime(), f.policy());
  LaurentSeries x = f;
  LaurentSeries partial = one;    // inv(a_1 ... a_k)
  LaurentSeries residual = f;     // f - S_k
  for (uint32_t k = 0; k < max_depth; ++k) {
    EngelDigit digit = leading_part(x.inv());
    LaurentSeries value = digit.value();
    x = value * x - one;
    partial = partial * value.inv();
    residual = residual - partial;
    e.digits.push_back(std::move(digit));
    if (x.is_zero() || residual.is_zero()) {
      e.terminated = true;
      break;
    }
    int32_t g = residual.gauss_valuation();
    e.residual_valuations.push_back(g);
    if (g > R) break;
  }
  return e;
}

inline LaurentSeries engel_decode(const std::vector<EngelDigit>& digits,
                                  uint32_t prime, PrecisionPolicy policy) {
  LaurentSeries sum = LaurentSeries::zero(prime, policy);
  LaurentSeries partial = LaurentSeries::one(prime, policy);
  for (const EngelDigit& d : digits) {
    if (d.unit().prime() != prime || d.unit().policy() != policy) {
      throw std::invalid_argument("engel_decode: digit parameter mismatch");
    }
    partial = partial * d.value().inv();
    sum = sum + partial;
  }
  return sum;
}

inline LaurentSeries engel_decode(const EngelExpansion& e, uint32_t prime,
                                  PrecisionPolicy policy) {
  return engel_decode(e.digits, prime, policy);
}

namespace detail {

struct EngelParams {
  uint32_t prime;
  PrecisionPolicy policy;
};

inline std::optional<EngelParams> engel_params(const EngelExpansion& e) {
  if (e.digits.empty()) return std::nullopt;
  const LaurentSeries& u = e.digits.front().unit();
  return EngelParams{u.prime(), u.policy()};
}

inline void check_same_engel_params(const EngelExpansion& a, const EngelExpansion& b) {
  auto pa = engel_params(a), pb = engel_params(b);
  if (pa && pb && (pa->prime != pb->prime || pa->policy != pb->policy)) {
    throw std::invalid_argument("engel: expansion parameter mismatch");
  }
}

}  // namespace detail

// Field operations in Engel space: decode, operate, greedily re-encode.
inline EngelExpansion engel_add(const EngelExpansion& a, const EngelExpansion& b,
                                uint32_t max_depth) {
  detail::check_same_engel_params(a, b);
  auto params = detail::engel_params(a) ? detail::engel_params(a) : detail::engel_params(b);
  if (!params) return EngelExpansion{{}, {}, true};
  LaurentSeries sum = engel_decode(a, params->prime, params->policy) +
                      engel_decode(b, params->prime, params->policy);
  return engel_encode(sum, max_depth);
}

inline EngelExpansion engel_mul(const EngelExpansion& a, const EngelExpansion& b,
                                uint32_t max_depth) {
  detail::check_same_engel_params(a, b);
  auto pa = detail::engel_params(a), pb = detail::engel_params(b);
  if (!pa || !pb) return EngelExpansion{{}, {}, true};
  LaurentSeries prod = engel_decode(a, pa->prime, pa->policy) *
                       engel_decode(b, pb->prime, pb->policy);
  return engel_encode(prod, max_depth);
}

inline EngelExpansion engel_inv(const EngelExpansion& e, uint32_t max_depth) {
  auto params = detail::engel_params(e);
  if (!params) throw std::domain_error("engel_inv: inversion of the zero expansion");
  LaurentSeries f = engel_decode(e, params->prime, params->policy);
  if (f.is_zero()) throw std::domain_error("engel_inv: expansion decodes to zero");
  return engel_encode(f.inv(), max_depth);
}

// Smallest r <= max_period such that digits[i] == digits[i+r] over the whole
// observed stream; digit equality compares scale and unit on the window.
inline std::optional<uint32_t> digit_period_check(const EngelExpansion& e,
                                                  uint32_t max_period) {
  size_t n = e.digits.size();
  if (max_period == 0 || n < 2 * static_cast<size_t>(max_period)) {
    throw std::domain_error("digit_period_check: insufficient digits");
  }
  for (uint32_t r = 1; r <= max_period; ++r) {
    bool periodic = true;
    for (size_t i = 0; i + r < n; ++i) {
      if (!e.digits[i].same_value(e.digits[i + r])) {
        periodic = false;
        break;
      }
    }
    if (periodic) return r;
  }
  return std::nullopt;
}

}  // namespace epik
