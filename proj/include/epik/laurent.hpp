#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "epik/padic.hpp"

namespace epik {

// Working precision of a truncated Laurent series: `window` stored
// t-coefficients, `digits` base-p digits per coefficient.
struct PrecisionPolicy {
  PrecisionPolicy(uint32_t window_, uint32_t digits_) : window(window_), digits(digits_) {
    if (window < 2) throw std::invalid_argument("policy: window must be >= 2");
    if (digits < 4) throw std::invalid_argument("policy: digit count must be >= 4");
  }
  uint32_t window;
  uint32_t digits;
  bool operator==(const PrecisionPolicy& o) const {
    return window == o.window && digits == o.digits;
  }
  bool operator!=(const PrecisionPolicy& o) const { return !(*this == o); }
};

// Truncated element of Q_p((t)): a window of `policy.window` p-adic
// coefficients anchored at the true t-order.  Everything outside the window
// is treated as zero; results are re-anchored after each operation and
// trailing coefficients beyond the window are dropped.
class LaurentSeries {
 public:
  static LaurentSeries zero(uint32_t prime, PrecisionPolicy policy) {
    return LaurentSeries(prime, policy);
  }

  static LaurentSeries one(uint32_t prime, PrecisionPolicy policy) {
    return constant(PadicScalar::one(prime, policy.digits), policy);
  }

  static LaurentSeries constant(const PadicScalar& c, PrecisionPolicy policy) {
    return monomial(c, 0, policy);
  }

  static LaurentSeries monomial(const PadicScalar& c, int32_t t_exp, PrecisionPolicy policy) {
    std::vector<PadicScalar> coeffs;
    coeffs.reserve(policy.window);
    coeffs.push_back(c);
    return from_coefficients(c.prime(), policy, t_exp, std::move(coeffs));
  }

  // Normalizes: strips leading exact zeros, re-anchors, pads the tail.
  static LaurentSeries from_coefficients(uint32_t prime, PrecisionPolicy policy,
                                         int32_t t_order, std::vector<PadicScalar> coeffs) {
    for (const PadicScalar& c : coeffs) {
      if (c.prime() != prime) throw std::invalid_argument("series: coefficient prime mismatch");
    }
    size_t lead = 0;
    while (lead < coeffs.size() && coeffs[lead].is_zero()) ++lead;
    if (lead == coeffs.size()) return zero(prime, policy);
    if (lead > 0) coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(lead));
    if (coeffs.size() > policy.window) coeffs.resize(policy.window, PadicScalar::zero(prime));
    while (coeffs.size() < policy.window) {
      coeffs.push_back(PadicScalar::zero(prime, static_cast<int32_t>(policy.digits)));
    }
    return LaurentSeries(prime, policy, t_order + static_cast<int32_t>(lead), std::move(coeffs));
  }

  bool is_zero() const { return zero_; }
  uint32_t prime() const { return prime_; }
  const PrecisionPolicy& policy() const { return policy_; }

  int32_t t_order() const {
    if (zero_) throw std::domain_error("series: t-order of the zero series");
    return t_order_;
  }

  const std::vector<PadicScalar>& coefficients() const { return coeffs_; }

  PadicScalar coeff(int32_t t_exp) const {
    if (zero_ || t_exp < t_order_ ||
        t_exp >= t_order_ + static_cast<int32_t>(policy_.window)) {
      return PadicScalar::zero(prime_, static_cast<int32_t>(policy_.digits));
    }
    return coeffs_[static_cast<size_t>(t_exp - t_order_)];
  }

  // Minimum coefficient p-valuation over the stored window; kInfinity for zero.
  int32_t gauss_valuation() const {
    int32_t g = PadicScalar::kInfinity;
    for (const PadicScalar& c : coeffs_) {
      if (!c.is_zero() && c.valuation() < g) g = c.valuation();
    }
    return g;
  }

  LaurentSeries operator-() const {
    if (zero_) return *this;
    std::vector<PadicScalar> out;
    out.reserve(coeffs_.size());
    for (const PadicScalar& c : coeffs_) out.push_back(-c);
    return LaurentSeries(prime_, policy_, t_order_, std::move(out));
  }

  LaurentSeries operator+(const LaurentSeries& o) const {
    check_compatible(o);
    if (zero_) return o;
    if (o.zero_) return *this;
    int32_t lo = std::min(t_order_, o.t_order_);
    std::vector<PadicScalar> out;
    out.reserve(policy_.window);
    for (uint32_t i = 0; i < policy_.window; ++i) {
      int32_t e = lo + static_cast<int32_t>(i);
      out.push_back(coeff(e) + o.coeff(e));
    }
    return from_coefficients(prime_, policy_, lo, std::move(out));
  }

  LaurentSeries operator-(const LaurentSeries& o) const { return *this + (-o); }

  LaurentSeries operator*(const LaurentSeries& o) const {
    check_compatible(o);
    if (zero_ || o.zero_) return zero(prime_, policy_);
    uint32_t W = policy_.window;
    std::vector<PadicScalar> out(W, PadicScalar::zero(prime_));
    for (uint32_t i = 0; i < W; ++i) {
      if (coeffs_[i].is_zero()) continue;
      for (uint32_t j = 0; i + j < W; ++j) {
        if (o.coeffs_[j].is_zero()) continue;
        out[i + j] = out[i + j] + coeffs_[i] * o.coeffs_[j];
      }
    }
    return from_coefficients(prime_, policy_, t_order_ + o.t_order_, std::move(out));
  }

  LaurentSeries inv() const {
    if (zero_) throw std::domain_error("series: inversion of the zero series");
    // leading coefficient is a non-zero scalar after normalization
    uint32_t W = policy_.window;
    std::vector<PadicScalar> h;
    h.reserve(W);
    PadicScalar lead_inv = coeffs_[0].inv();
    h.push_back(lead_inv);
    for (uint32_t n = 1; n < W; ++n) {
      PadicScalar s = PadicScalar::zero(prime_);
      for (uint32_t i = 1; i <= n; ++i) {
        if (coeffs_[i].is_zero() || h[n - i].is_zero()) continue;
        s = s + coeffs_[i] * h[n - i];
      }
      h.push_back(-(lead_inv * s));
    }
    return from_coefficients(prime_, policy_, -t_order_, std::move(h));
  }

  // Multiply by p^s.
  LaurentSeries scaled_by_p(int32_t s) const {
    if (zero_ || s == 0) return *this;
    std::vector<PadicScalar> out;
    out.reserve(coeffs_.size());
    for (const PadicScalar& c : coeffs_) out.push_back(c.shifted(s));
    return LaurentSeries(prime_, policy_, t_order_, std::move(out));
  }

  LaurentSeries times_scalar(const PadicScalar& a) const {
    if (zero_ || a.is_zero()) return zero(prime_, policy_);
    std::vector<PadicScalar> out;
    out.reserve(coeffs_.size());
    for (const PadicScalar& c : coeffs_) out.push_back(a * c);
    return from_coefficients(prime_, policy_, t_order_, std::move(out));
  }

  // Multiply by t^k.
  LaurentSeries shifted_t(int32_t k) const {
    if (zero_) return *this;
    return LaurentSeries(prime_, policy_, t_order_ + k, coeffs_);
  }

  // Canonical fixed-precision form: every stored coefficient carries exactly
  // policy.digits digits (zero coefficients a matching bound).
  LaurentSeries canonicalized() const {
    if (zero_) return *this;
    std::vector<PadicScalar> out;
    out.reserve(coeffs_.size());
    for (const PadicScalar& c : coeffs_) {
      if (c.is_zero()) {
        out.push_back(PadicScalar::zero(prime_, static_cast<int32_t>(policy_.digits)));
      } else {
        out.push_back(c.padded_to(policy_.digits));
      }
    }
    return from_coefficients(prime_, policy_, t_order_, std::move(out));
  }

  // Reduce every coefficient to at most `digits` significant digits.
  LaurentSeries truncated(uint32_t digits) const {
    if (zero_) return *this;
    std::vector<PadicScalar> out;
    out.reserve(coeffs_.size());
    for (const PadicScalar& c : coeffs_) out.push_back(c.truncated(digits));
    return from_coefficients(prime_, policy_, t_order_, std::move(out));
  }

  bool same_value(const LaurentSeries& o) const { return (*this - o).is_zero(); }

  // Difference vanishes to at least `min_valuation` (coefficient-wise Gauss sense).
  bool agrees_with(const LaurentSeries& o, int32_t min_valuation) const {
    LaurentSeries d = *this - o;
    return d.is_zero() || d.gauss_valuation() >= min_valuation;
  }

  // Structural equality.
  bool operator==(const LaurentSeries& o) const {
    if (prime_ != o.prime_ || policy_ != o.policy_ || zero_ != o.zero_) return false;
    if (zero_) return true;
    return t_order_ == o.t_order_ && coeffs_ == o.coeffs_;
  }
  bool operator!=(const LaurentSeries& o) const { return !(*this == o); }

  friend std::ostream& operator<<(std::ostream& out, const LaurentSeries& f) {
    if (f.zero_) return out << "0";
    out << "t^" << f.t_order_ << "*(";
    for (size_t i = 0; i < f.coeffs_.size(); ++i) {
      if (i) out << " + t^" << i << "*";
      out << f.coeffs_[i];
    }
    return out << ")";
  }

 private:
  LaurentSeries(uint32_t prime, PrecisionPolicy policy)
      : prime_(prime), policy_(policy), zero_(true), t_order_(0) {}

  LaurentSeries(uint32_t prime, PrecisionPolicy policy, int32_t t_order,
                std::vector<PadicScalar> coeffs)
      : prime_(prime), policy_(policy), zero_(false), t_order_(t_order),
        coeffs_(std::move(coeffs)) {}

  void check_compatible(const LaurentSeries& o) const {
    if (prime_ != o.prime_) throw std::invalid_argument("series: prime mismatch");
    if (policy_ != o.policy_) throw std::invalid_argument("series: policy mismatch");
  }

  uint32_t prime_;
  PrecisionPolicy policy_;
  bool zero_;
  int32_t t_order_;
  std::vector<PadicScalar> coeffs_;
};

// Hensel/Newton lift of a simple residue root of F over Q_p((t)).  `poly`
// holds F's coefficients from degree 0 upward.  Runs X <- X - F(X)/F'(X) with
// the working digit count ramped geometrically (the iterates are exact
// values, so early iterations need few digits); stops once the correction's
// Gauss valuation exceeds the policy digit count, with a hard cap of 64
// iterations.  Records each correction's Gauss valuation in
// `correction_valuations` when given.
inline LaurentSeries newton_root(const std::vector<LaurentSeries>& poly, int64_t seed,
                                 std::vector<int32_t>* correction_valuations = nullptr) {
  if (poly.size() < 2) throw std::invalid_argument("newton: polynomial must be non-constant");
  uint32_t prime = poly[0].prime();
  PrecisionPolicy policy = poly[0].policy();
  for (const LaurentSeries& c : poly) {
    if (c.prime() != prime || c.policy() != policy) {
      throw std::invalid_argument("newton: mixed polynomial coefficients");
    }
  }

  // simple-root hypotheses mod p at t = 0
  int64_t s = ((seed % prime) + prime) % prime;
  uint64_t f0 = 0, fp0 = 0, spow = 1;
  for (size_t i = 0; i < poly.size(); ++i) {
    uint64_t ci = poly[i].coeff(0).residue();
    f0 = (f0 + ci * spow) % prime;
    if (i + 1 < poly.size()) {
      uint64_t cn = poly[i + 1].coeff(0).residue();
      fp0 = (fp0 + (i + 1) * cn % prime * spow) % prime;
    }
    spow = spow * static_cast<uint64_t>(s) % prime;
  }
  if (f0 != 0) throw std::domain_error("newton: seed is not a root mod p");
  if (fp0 == 0) throw std::domain_error("newton: seed is not a simple root mod p");

  std::vector<LaurentSeries> deriv;
  deriv.reserve(poly.size() - 1);
  for (size_t i = 1; i < poly.size(); ++i) {
    deriv.push_back(poly[i].times_scalar(
        PadicScalar::from_integer(static_cast<int64_t>(i), prime, policy.digits)));
  }

  auto eval = [&](const std::vector<LaurentSeries>& cs, const LaurentSeries& X) {
    LaurentSeries acc = LaurentSeries::zero(prime, policy);
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * X + *it;
    return acc;
  };

  const int32_t R = static_cast<int32_t>(policy.digits);
  LaurentSeries X = LaurentSeries::constant(
      PadicScalar::from_integer(s, prime, policy.digits), policy);
  uint32_t working = std::min<uint32_t>(8, policy.digits);
  for (int iter = 0; iter < 64; ++iter) {
    LaurentSeries Xw = X.truncated(working);
    LaurentSeries FX = eval(poly, Xw);
    if (FX.is_zero() || FX.gauss_valuation() > R) {
      if (working >= policy.digits) return X;
      working = policy.digits;
      continue;
    }
    LaurentSeries delta = FX * eval(deriv, Xw).inv();
    if (delta.is_zero()) {
      if (working >= policy.digits) return X;
      working = policy.digits;
      continue;
    }
    if (correction_valuations) correction_valuations->push_back(delta.gauss_valuation());
    if (delta.gauss_valuation() > R) {
      if (working >= policy.digits) return X;
      working = policy.digits;
      continue;
    }
    // zero-extension keeps the iterate an exact value at full precision
    X = (X - delta).canonicalized();
    working = std::min(policy.digits, working * 2);
  }
  throw std::runtime_error("newton: no convergence within the iteration cap");
}

}  // namespace epik
