#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace epik {

// Fixed-precision element of Q_p.
//
// A nonzero value is stored as p^valuation * (d_0 + d_1 p + d_2 p^2 + ...)
// with d_0 != 0 and digits().size() significant base-p digits.  Exact zero is
// a distinct marker carrying an absolute-precision bound: "0 mod p^bound"
// (bound == kInfinity for a true zero).  Arithmetic never claims more digits
// than the inputs justify: multiplication keeps min(R_a, R_b) relative
// digits, addition keeps everything below the smaller absolute bound and
// renormalizes when leading digits cancel.
class PadicScalar {
 public:
  static constexpr int32_t kInfinity = std::numeric_limits<int32_t>::max();

  static PadicScalar zero(uint32_t prime, int32_t bound = kInfinity) {
    check_prime(prime);
    return PadicScalar(prime, bound);
  }

  static PadicScalar one(uint32_t prime, uint32_t precision) {
    return from_integer(1, prime, precision);
  }

  static PadicScalar from_integer(int64_t value, uint32_t prime, uint32_t precision) {
    return from_rational(value, 1, prime, precision);
  }

  // value = numerator / denominator, to `precision` significant digits.
  static PadicScalar from_rational(int64_t numerator, int64_t denominator,
                                   uint32_t prime, uint32_t precision) {
    check_prime(prime);
    if (precision == 0) throw std::invalid_argument("padic: precision must be positive");
    if (denominator == 0) throw std::domain_error("padic: zero denominator");
    if (numerator == 0) return zero(prime);

    bool negative = (numerator < 0) != (denominator < 0);
    uint64_t num = unsigned_abs(numerator);
    uint64_t den = unsigned_abs(denominator);
    int32_t val = 0;
    while (num % prime == 0) { num /= prime; ++val; }
    while (den % prime == 0) { den /= prime; --val; }

    std::vector<uint32_t> nd = digits_of(num, prime, precision);
    std::vector<uint32_t> result;
    if (den == 1) {
      result = std::move(nd);
    } else {
      result = digits_divide(nd, digits_of(den, prime, precision), prime);
    }
    if (negative) digits_negate_inplace(result, prime);
    return make_normalized(prime, val, std::move(result));
  }

  // Assumes digits are base-p; strips leading zeros.
  static PadicScalar from_digits(uint32_t prime, int32_t valuation,
                                 std::vector<uint32_t> digits) {
    check_prime(prime);
    for (uint32_t d : digits) {
      if (d >= prime) throw std::invalid_argument("padic: digit out of range");
    }
    return make_normalized(prime, valuation, std::move(digits));
  }

  bool is_zero() const { return zero_; }
  uint32_t prime() const { return prime_; }

  // v_p; kInfinity for exact zero.
  int32_t valuation() const { return zero_ ? kInfinity : val_; }

  // Value is known modulo p^abs_precision().
  int32_t abs_precision() const {
    if (zero_) return val_;
    return saturating_add(val_, static_cast<int32_t>(digits_.size()));
  }

  uint32_t rel_precision() const { return zero_ ? 0 : static_cast<uint32_t>(digits_.size()); }

  const std::vector<uint32_t>& digits() const { return digits_; }

  // Digit of p^exponent; 0 outside the stored window.
  uint32_t digit_at(int32_t exponent) const {
    if (zero_ || exponent < val_) return 0;
    size_t idx = static_cast<size_t>(exponent - val_);
    return idx < digits_.size() ? digits_[idx] : 0;
  }

  // Value mod p as an integer in [0, p); requires valuation >= 0.
  uint32_t residue() const {
    if (zero_) return 0;
    if (val_ < 0) throw std::domain_error("padic: residue of negative-valuation value");
    return val_ > 0 ? 0 : digits_[0];
  }

  PadicScalar operator-() const {
    if (zero_) return *this;
    std::vector<uint32_t> d = digits_;
    digits_negate_inplace(d, prime_);
    return PadicScalar(prime_, val_, std::move(d));
  }

  PadicScalar operator+(const PadicScalar& o) const {
    check_same_prime(o);
    int32_t bound = std::min(abs_precision(), o.abs_precision());
    if (zero_ && o.zero_) return zero(prime_, bound);
    int32_t lo;
    if (zero_) lo = o.val_;
    else if (o.zero_) lo = val_;
    else lo = std::min(val_, o.val_);
    if (bound != kInfinity && bound <= lo) return zero(prime_, bound);

    size_t width;
    if (bound == kInfinity) {
      int32_t hi = std::max(zero_ ? lo : abs_precision(), o.zero_ ? lo : o.abs_precision());
      width = static_cast<size_t>(hi - lo);
    } else {
      width = static_cast<size_t>(bound - lo);
    }
    std::vector<uint64_t> acc(width, 0);
    accumulate(acc, lo, *this);
    accumulate(acc, lo, o);
    std::vector<uint32_t> out(width);
    uint64_t carry = 0;
    for (size_t i = 0; i < width; ++i) {
      uint64_t t = acc[i] + carry;
      out[i] = static_cast<uint32_t>(t % prime_);
      carry = t / prime_;
    }
    PadicScalar r = make_normalized(prime_, lo, std::move(out));
    if (r.zero_) return zero(prime_, bound);
    return r;
  }

  PadicScalar operator-(const PadicScalar& o) const { return *this + (-o); }

  PadicScalar operator*(const PadicScalar& o) const {
    check_same_prime(o);
    if (zero_ || o.zero_) {
      // v(ab) >= bound(zero side) + valuation(other side)
      int64_t b = static_cast<int64_t>(val_) + static_cast<int64_t>(o.val_);
      return zero(prime_, clamp_bound(b));
    }
    size_t R = std::min(digits_.size(), o.digits_.size());
    std::vector<uint64_t> acc(R, 0);
    for (size_t i = 0; i < R; ++i) {
      if (digits_[i] == 0) continue;
      uint64_t a = digits_[i];
      for (size_t j = 0; j + i < R; ++j) acc[i + j] += a * o.digits_[j];
    }
    std::vector<uint32_t> out(R);
    uint64_t carry = 0;
    for (size_t i = 0; i < R; ++i) {
      uint64_t t = acc[i] + carry;
      out[i] = static_cast<uint32_t>(t % prime_);
      carry = t / prime_;
    }
    // product of two units keeps a nonzero leading digit
    return PadicScalar(prime_, saturating_add(val_, o.val_), std::move(out));
  }

  PadicScalar inv() const {
    if (zero_) throw std::domain_error("padic: inversion of zero");
    std::vector<uint32_t> one_digits(digits_.size(), 0);
    one_digits[0] = 1;
    std::vector<uint32_t> d = digits_divide(one_digits, digits_, prime_);
    return PadicScalar(prime_, -val_, std::move(d));
  }

  // Sub-sum of the digit expansion over exponents <= 0 (exact); the dropped
  // tail has valuation >= 1.
  PadicScalar integer_part() const {
    if (zero_) return *this;
    if (val_ >= 1) return zero(prime_);
    int32_t hi = std::min<int32_t>(0, abs_precision() - 1);
    size_t keep = static_cast<size_t>(hi - val_) + 1;
    std::vector<uint32_t> d(digits_.size(), 0);
    std::copy(digits_.begin(), digits_.begin() + static_cast<long>(std::min(keep, digits_.size())), d.begin());
    return make_normalized(prime_, val_, std::move(d));
  }

  // Multiply by p^k.
  PadicScalar shifted(int32_t k) const {
    PadicScalar r = *this;
    r.val_ = saturating_add(r.val_, k);
    return r;
  }

  // Exactly `precision` stored digits: zero-extends or truncates.  Used for
  // canonical fixed-precision surfaces; the padded digits are treated as
  // exact zeros.
  PadicScalar padded_to(uint32_t precision) const {
    if (zero_) return zero(prime_, static_cast<int32_t>(precision));
    std::vector<uint32_t> d = digits_;
    d.resize(precision, 0);
    return make_normalized(prime_, val_, std::move(d));
  }

  // Keeps at most `precision` digits (no extension).
  PadicScalar truncated(uint32_t precision) const {
    if (zero_ || digits_.size() <= precision) return *this;
    std::vector<uint32_t> d(digits_.begin(), digits_.begin() + precision);
    return make_normalized(prime_, val_, std::move(d));
  }

  // Equal as far as the shared precision can tell.
  bool same_value(const PadicScalar& o) const { return (*this - o).is_zero(); }

  // Structural equality (representation, including precision bookkeeping).
  bool operator==(const PadicScalar& o) const {
    if (prime_ != o.prime_ || zero_ != o.zero_) return false;
    if (zero_) return val_ == o.val_;
    return val_ == o.val_ && digits_ == o.digits_;
  }
  bool operator!=(const PadicScalar& o) const { return !(*this == o); }

  friend std::ostream& operator<<(std::ostream& out, const PadicScalar& x) {
    if (x.zero_) {
      out << "O(p^" << (x.val_ == kInfinity ? std::string("inf") : std::to_string(x.val_)) << ")";
      return out;
    }
    out << "p^" << x.val_ << "*[";
    for (size_t i = 0; i < x.digits_.size(); ++i) {
      if (i) out << ",";
      out << x.digits_[i];
    }
    out << "]";
    return out;
  }

 private:
  PadicScalar(uint32_t prime, int32_t bound)
      : prime_(prime), zero_(true), val_(bound) {}

  PadicScalar(uint32_t prime, int32_t val, std::vector<uint32_t> d)
      : prime_(prime), zero_(false), val_(val), digits_(std::move(d)) {}

  static PadicScalar make_normalized(uint32_t prime, int32_t val, std::vector<uint32_t> d) {
    size_t lead = 0;
    while (lead < d.size() && d[lead] == 0) ++lead;
    if (lead == d.size()) {
      return zero(prime, saturating_add(val, static_cast<int32_t>(d.size())));
    }
    if (lead > 0) d.erase(d.begin(), d.begin() + static_cast<long>(lead));
    return PadicScalar(prime, saturating_add(val, static_cast<int32_t>(lead)), std::move(d));
  }

  static void check_prime(uint32_t prime) {
    if (prime <= 3) throw std::invalid_argument("padic: prime must exceed 3");
  }

  void check_same_prime(const PadicScalar& o) const {
    if (prime_ != o.prime_) throw std::invalid_argument("padic: prime mismatch");
  }

  static uint64_t unsigned_abs(int64_t v) {
    return v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
  }

  static int32_t saturating_add(int32_t a, int32_t b) {
    if (a == kInfinity || b == kInfinity) return kInfinity;
    return clamp_bound(static_cast<int64_t>(a) + b);
  }

  static int32_t clamp_bound(int64_t v) {
    if (v >= kInfinity) return kInfinity;
    if (v <= std::numeric_limits<int32_t>::min()) return std::numeric_limits<int32_t>::min();
    return static_cast<int32_t>(v);
  }

  static std::vector<uint32_t> digits_of(uint64_t n, uint32_t prime, uint32_t precision) {
    std::vector<uint32_t> d(precision, 0);
    for (uint32_t i = 0; i < precision && n != 0; ++i) {
      d[i] = static_cast<uint32_t>(n % prime);
      n /= prime;
    }
    return d;
  }

  // p-adic long division a/b with b a unit (b[0] != 0); result has a.size() digits.
  static std::vector<uint32_t> digits_divide(const std::vector<uint32_t>& a,
                                             const std::vector<uint32_t>& b,
                                             uint32_t prime) {
    size_t R = a.size();
    uint32_t b0inv = mod_inverse(b[0], prime);
    std::vector<int64_t> rem(a.begin(), a.end());
    std::vector<uint32_t> q(R, 0);
    for (size_t i = 0; i < R; ++i) {
      int64_t residue = rem[i] % static_cast<int64_t>(prime);
      if (residue < 0) residue += prime;
      if (i + 1 < R) rem[i + 1] += (rem[i] - residue) / static_cast<int64_t>(prime);
      rem[i] = residue;
      uint32_t qi = static_cast<uint32_t>((static_cast<uint64_t>(residue) * b0inv) % prime);
      q[i] = qi;
      if (qi != 0) {
        for (size_t j = 0; i + j < R && j < b.size(); ++j) {
          rem[i + j] -= static_cast<int64_t>(qi) * b[j];
        }
      }
      // rem[i] is now divisible by p; carry it upward
      if (i + 1 < R) rem[i + 1] += rem[i] / static_cast<int64_t>(prime);
    }
    return q;
  }

  static uint32_t mod_inverse(uint32_t a, uint32_t p) {
    int64_t t = 0, newt = 1, r = p, newr = a % p;
    while (newr != 0) {
      int64_t quot = r / newr;
      int64_t tmp = t - quot * newt; t = newt; newt = tmp;
      tmp = r - quot * newr; r = newr; newr = tmp;
    }
    if (t < 0) t += p;
    return static_cast<uint32_t>(t);
  }

  static void digits_negate_inplace(std::vector<uint32_t>& d, uint32_t prime) {
    size_t lead = 0;
    while (lead < d.size() && d[lead] == 0) ++lead;
    if (lead == d.size()) return;
    d[lead] = prime - d[lead];
    for (size_t i = lead + 1; i < d.size(); ++i) d[i] = prime - 1 - d[i];
  }

  void accumulate(std::vector<uint64_t>& acc, int32_t lo, const PadicScalar& x) const {
    if (x.zero_) return;
    size_t off = static_cast<size_t>(x.val_ - lo);
    for (size_t i = 0; i < x.digits_.size() && off + i < acc.size(); ++i) {
      acc[off + i] += x.digits_[i];
    }
  }

  uint32_t prime_;
  bool zero_;
  int32_t val_;  // valuation, or absolute bound for the zero marker
  std::vector<uint32_t> digits_;
};

}  // namespace epik
