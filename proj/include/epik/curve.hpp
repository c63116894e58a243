#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "epik/laurent.hpp"

namespace epik {

inline bool is_prime(uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (uint32_t d = 3; static_cast<uint64_t>(d) * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

// Short Weierstrass curve y^2 = x^3 + A(t) x + B(t) over Q_p((t)).
struct CurveParams {
  CurveParams(uint32_t prime_, LaurentSeries A_, LaurentSeries B_)
      : prime(prime_), A(std::move(A_)), B(std::move(B_)) {
    if (A.prime() != prime || B.prime() != prime || A.policy() != B.policy()) {
      throw std::invalid_argument("curve: coefficient parameter mismatch");
    }
    if (curve_discriminant().is_zero()) {
      throw std::domain_error("curve: zero discriminant at working precision");
    }
  }

  const PrecisionPolicy& policy() const { return A.policy(); }

  // -16 (4 A^3 + 27 B^2)
  LaurentSeries curve_discriminant() const {
    uint32_t R = policy().digits;
    LaurentSeries a3 = A * A * A;
    LaurentSeries term = a3.times_scalar(PadicScalar::from_integer(4, prime, R)) +
                         (B * B).times_scalar(PadicScalar::from_integer(27, prime, R));
    return term.times_scalar(PadicScalar::from_integer(-16, prime, R));
  }

  bool operator==(const CurveParams& o) const {
    return prime == o.prime && A == o.A && B == o.B;
  }
  bool operator!=(const CurveParams& o) const { return !(*this == o); }

  uint32_t prime;
  LaurentSeries A;
  LaurentSeries B;
};

// 2-torsion point (x(t), 0); x is a root of the curve cubic.
struct TorsionPoint {
  LaurentSeries x;
};

struct AffinePoint {
  LaurentSeries x;
  LaurentSeries y;
};

// One Velu 2-isogeny: kernel x-coordinate alpha, constant c = 3 alpha^2 + A,
// codomain (A - 5c, B - 7 c alpha).
struct IsogenyStep {
  LaurentSeries alpha;
  LaurentSeries c;
  CurveParams codomain;
};

// y^2 = x^3 + 1 + p t.
inline CurveParams base_curve(uint32_t prime, PrecisionPolicy policy) {
  if (prime <= 3 || !is_prime(prime)) {
    throw std::domain_error("base_curve: prime must be a prime > 3");
  }
  LaurentSeries A = LaurentSeries::zero(prime, policy);
  std::vector<PadicScalar> b{PadicScalar::one(prime, policy.digits),
                             PadicScalar::from_integer(prime, prime, policy.digits)};
  LaurentSeries B = LaurentSeries::from_coefficients(prime, policy, 0, std::move(b));
  return CurveParams(prime, std::move(A), B.canonicalized());
}

inline bool on_curve(const CurveParams& E, const AffinePoint& P, int32_t tolerance) {
  LaurentSeries rhs = P.x * P.x * P.x + E.A * P.x + E.B;
  return (P.y * P.y).agrees_with(rhs, tolerance);
}

// Hensel-lifts a simple residue root of the curve cubic to a 2-torsion
// x-coordinate; the output is canonical at the working precision.
inline TorsionPoint two_torsion_lift(const CurveParams& E, int64_t seed) {
  std::vector<LaurentSeries> poly{
      E.B, E.A, LaurentSeries::zero(E.prime, E.policy()),
      LaurentSeries::one(E.prime, E.policy())};
  return TorsionPoint{newton_root(poly, seed).canonicalized()};
}

// Residues of the t = 0 fiber: (A(0) mod p, B(0) mod p).
inline std::pair<uint32_t, uint32_t> reduce_fiber(const CurveParams& E) {
  return {E.A.is_zero() ? 0u : E.A.coeff(0).residue(),
          E.B.is_zero() ? 0u : E.B.coeff(0).residue()};
}

// Smallest residue that is a simple root of the fiber cubic X^3 + a X + b mod p.
inline std::optional<uint32_t> smallest_simple_fiber_root(const CurveParams& E) {
  auto [a, b] = reduce_fiber(E);
  uint64_t p = E.prime;
  for (uint64_t r = 0; r < p; ++r) {
    uint64_t fr = (r * r % p * r + static_cast<uint64_t>(a) * r + b) % p;
    if (fr != 0) continue;
    uint64_t dfr = (3 * r % p * r + a) % p;
    if (dfr != 0) return static_cast<uint32_t>(r);
  }
  return std::nullopt;
}

inline IsogenyStep velu_step(const CurveParams& E, const TorsionPoint& P) {
  uint32_t R = E.policy().digits;
  LaurentSeries c =
      ((P.x * P.x).times_scalar(PadicScalar::from_integer(3, E.prime, R)) + E.A)
          .canonicalized();
  LaurentSeries A2 =
      (E.A - c.times_scalar(PadicScalar::from_integer(5, E.prime, R))).canonicalized();
  LaurentSeries B2 =
      (E.B - (c * P.x).times_scalar(PadicScalar::from_integer(7, E.prime, R)))
          .canonicalized();
  try {
    CurveParams codomain(E.prime, std::move(A2), std::move(B2));
    return IsogenyStep{P.x, std::move(c), std::move(codomain)};
  } catch (const std::domain_error&) {
    throw std::domain_error("velu_step: degenerate codomain");
  }
}

// phi(x, y) = (x + c/(x - alpha), y (1 - c/(x - alpha)^2)).
inline AffinePoint velu_eval(const IsogenyStep& step, const AffinePoint& Q) {
  LaurentSeries dx = Q.x - step.alpha;
  if (dx.is_zero()) throw std::domain_error("velu_eval: kernel point");
  LaurentSeries idx = dx.inv();
  LaurentSeries cidx = step.c * idx;
  uint32_t prime = step.alpha.prime();
  LaurentSeries one = LaurentSeries::one(prime, step.alpha.policy());
  return AffinePoint{Q.x + cidx, Q.y * (one - cidx * idx)};
}

// Deterministic 2-isogeny walk: at each step Hensel-lift the smallest simple
// fiber root and apply velu_step.  A pure fold, so
// chain(E, a + b) == chain(chain(E, a), b) coefficient for coefficient.
inline CurveParams chain(const CurveParams& E0, uint32_t steps) {
  if (steps < 1) throw std::invalid_argument("chain: steps must be >= 1");
  CurveParams E = E0;
  for (uint32_t k = 0; k < steps; ++k) {
    std::optional<uint32_t> root = smallest_simple_fiber_root(E);
    if (!root) throw std::domain_error("chain: no simple fiber root mod p");
    TorsionPoint P = two_torsion_lift(E, *root);
    E = velu_step(E, P).codomain;
  }
  return E;
}

// j = 1728 * 4A^3 / (4A^3 + 27B^2)
inline LaurentSeries j_invariant(const CurveParams& E) {
  uint32_t R = E.policy().digits;
  LaurentSeries a3 = E.A * E.A * E.A;
  LaurentSeries four_a3 = a3.times_scalar(PadicScalar::from_integer(4, E.prime, R));
  LaurentSeries den =
      four_a3 + (E.B * E.B).times_scalar(PadicScalar::from_integer(27, E.prime, R));
  if (den.is_zero()) throw std::domain_error("j_invariant: zero denominator at precision");
  if (four_a3.is_zero()) return LaurentSeries::zero(E.prime, E.policy());
  return (four_a3.times_scalar(PadicScalar::from_integer(1728, E.prime, R)) * den.inv())
      .canonicalized();
}

// #E(F_p) by exhaustive enumeration (includes the point at infinity).
inline uint64_t count_points_fp(uint32_t a, uint32_t b, uint32_t prime) {
  if (prime > (1u << 14) || !is_prime(prime)) {
    throw std::invalid_argument("count_points_fp: prime out of brute-force range");
  }
  uint64_t p = prime;
  uint64_t disc = (4 * static_cast<uint64_t>(a) % p * a % p * a + 27 * static_cast<uint64_t>(b) % p * b) % p;
  if (disc == 0) throw std::domain_error("count_points_fp: singular curve");
  std::vector<uint8_t> is_square(prime, 0);
  for (uint64_t y = 0; y < p; ++y) is_square[y * y % p] = 1;
  uint64_t count = 1;
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t rhs = (x * x % p * x + static_cast<uint64_t>(a) * x + b) % p;
    if (rhs == 0) count += 1;
    else if (is_square[rhs]) count += 2;
  }
  return count;
}

}  // namespace epik
