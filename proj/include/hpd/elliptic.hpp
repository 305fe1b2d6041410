#pragma once

// Generalized complete elliptic integrals
//
//   K_a(r) = (pi/2) F(a, 1-a; 1; r^2),   E_a(r) = (pi/2) F(a-1, 1-a; 1; r^2)
//
// and their r-derivatives. For r^2 <= 1/2 the defining series is summed
// directly; above that the zero-balanced logarithmic expansions around
// r = 1 are used, in powers of r'^2 with ln(r'^2) taken from the modulus'
// stored logarithm. Both expansions are exact and each converges at least
// like 2^-n, so every value costs a few dozen terms.
//
// Accuracy targets (binary64): relative error <= 1e-11 for K_a on
// r^2 <= 0.95 and <= 1e-8 up to r^2 = 1 - 1e-14; E_a <= 1e-10 on [0, 1].
// These are engineering targets; in practice both are within a few ulp.

#include "hpd/special.hpp"

namespace hpd {

// A modulus r in [0, 1] together with r' = sqrt(1 - r^2). The logarithms of
// both are stored as well, so a modulus whose r (or r') underflows to 0 or
// rounds to 1 keeps its exact position; see `saturated()`.
class Modulus {
 public:
  // Throws DomainError unless 0 <= r <= 1. r' = sqrt((1 - r)(1 + r)).
  explicit Modulus(double r);

  static Modulus from_complement(double r_comp);
  // r = exp(log_r), log_r <= 0.
  static Modulus from_log(double log_r);
  static Modulus from_log_complement(double log_r_comp);

  double r() const { return r_; }
  double r_comp() const { return r_comp_; }
  double log_r() const { return log_r_; }
  double log_r_comp() const { return log_r_comp_; }

  // The modulus r' (swaps the roles of r and r').
  Modulus complement() const { return Modulus(r_comp_, r_, log_r_comp_, log_r_); }

  // True when r or r' is not representable as a normal double but is still
  // carried exactly by its logarithm.
  bool saturated() const;

 private:
  Modulus(double r, double rc, double lr, double lrc)
      : r_(r), r_comp_(rc), log_r_(lr), log_r_comp_(lrc) {}

  double r_;
  double r_comp_;
  double log_r_;
  double log_r_comp_;
};

struct EllipticPair {
  double K_val;
  double E_val;
};

// Default series tolerance for all elliptic evaluations.
inline constexpr double kEllipticTol = 1e-16;

// K_a(r) for 0 <= r < 1. Throws PoleError at r = 1.
EvalResult ellint_K(const SignatureParam& a, const Modulus& m, double tol = kEllipticTol);

// E_a(r) for 0 <= r <= 1; E_a(1) = sin(pi a) / (2(1 - a)) exactly.
EvalResult ellint_E(const SignatureParam& a, const Modulus& m, double tol = kEllipticTol);

EllipticPair ellint_KE(const SignatureParam& a, const Modulus& m);

// K_a, E_a and the three combinations below, each also divided by r^2, from a
// single pass over the series.
struct EllipticCombos {
  double K;
  double E;
  double k_minus_e;              // K_a - E_a
  double e_minus_rc2_k;          // E_a - r'^2 K_a
  double gap;                    // (1 + (2a-1)/(2(1-a)) r^2) K_a - E_a
  double k_minus_e_over_r2;
  double e_minus_rc2_k_over_r2;
  double gap_over_r2;
};

// Requires 0 <= r < 1 (the r = 0 quotients are the limits r -> 0).
EllipticCombos elliptic_combos(const SignatureParam& a, const Modulus& m);

// Cancellation-free combinations that vanish like r^2 as r -> 0. For small r
// they come from their own power series rather than from subtraction.
double k_minus_e(const SignatureParam& a, const Modulus& m);        // K_a - E_a
double e_minus_rc2_k(const SignatureParam& a, const Modulus& m);    // E_a - r'^2 K_a
// (1 + (2a-1)/(2(1-a)) r^2) K_a - E_a
double shifted_gap(const SignatureParam& a, const Modulus& m);

// dK_a/dr = 2(1-a)(E_a - r'^2 K_a) / (r r'^2), for 0 < r < 1.
double dK_dr(const SignatureParam& a, const Modulus& m);

// dE_a/dr = 2(a-1)(K_a - E_a) / r, for 0 < r < 1.
double dE_dr(const SignatureParam& a, const Modulus& m);

}  // namespace hpd
