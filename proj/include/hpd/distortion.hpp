#pragma once

// The conformal-modulus layer built on K_a:
//
//   mu_a(r)      = pi/(2 sin(pi a)) * K_a(r') / K_a(r)
//   phi_K^a(r)   = mu_a^{-1}(mu_a(r) / K)
//   m_a(r)       = 2/(pi sin(pi a)) * r'^2 K_a(r') K_a(r)
//
// and the generalized modular equation mu_a(s) = p mu_a(r).

#include "hpd/elliptic.hpp"
#include "hpd/special.hpp"

namespace hpd {

class DistortionCoeff {
 public:
  // Throws DomainError unless K is finite and positive.
  explicit DistortionCoeff(double K);

  double value() const { return k_; }
  DistortionCoeff reciprocal() const { return DistortionCoeff(1.0 / k_); }

 private:
  double k_;
};

struct SolverOptions {
  // Stop once |mu_a(r) - y| <= tol * max(1, y).
  double tol = 1e-12;
  int max_iter = 100;
};

struct InverseResult {
  Modulus modulus;
  double residual;  // |mu_a(r) - y|
  int iterations;
};

struct ModularSolution {
  Modulus s;
  double residual;
  int iterations;
};

inline constexpr double kModularTol = 1e-9;

// pi / (2 sin(pi a)), the value of mu_a at r = 1/sqrt(2).
double mu_symmetric_value(const SignatureParam& a);

// All of the following require 0 < r < 1 (finite log r and log r') and throw
// DomainError otherwise.
double mu(const SignatureParam& a, const Modulus& m);
double dmu_dr(const SignatureParam& a, const Modulus& m);
double m_fn(const SignatureParam& a, const Modulus& m);
double dm_dr(const SignatureParam& a, const Modulus& m);

// Safeguarded Newton in log r with bisection fallback. Values y below the
// symmetric point are handled through mu_a(r) mu_a(r') = (pi/(2 sin pi a))^2,
// so the returned modulus is accurate in whichever of r, r' is small.
InverseResult mu_inv_solve(const SignatureParam& a, double y, const SolverOptions& opts = {});
Modulus mu_inv(const SignatureParam& a, double y, const SolverOptions& opts = {});

// phi_K^a(r), extended by phi(0) = 0 and phi(1) = 1. The result keeps log r
// and log r' exactly even when r underflows or rounds to 1 (see
// Modulus::saturated()); only when mu_a(r)/K itself overflows or underflows
// is the result clamped to the endpoint.
Modulus phi(const SignatureParam& a, const DistortionCoeff& K, const Modulus& m,
            const SolverOptions& opts = {});

// d phi_K^a(r) / dK = 4 s s'^2 K_a(s)^2 / pi^2 * mu_a(r) / K^2, s = phi_K^a(r).
double dphi_dK(const SignatureParam& a, const DistortionCoeff& K, const Modulus& m);
// The same derivative written with mu_a(s)/K in place of mu_a(r)/K^2.
double dphi_dK_image_form(const SignatureParam& a, const DistortionCoeff& K, const Modulus& m);

// Solves F(a,1-a;1;1-s^2)/F(a,1-a;1;s^2) = p F(a,1-a;1;1-r^2)/F(a,1-a;1;r^2)
// for s, i.e. s = phi_{1/p}^a(r). Throws ConvergenceError if the residual of
// the equation exceeds `tol`.
ModularSolution solve_modular(const SignatureParam& a, double degree_p, const Modulus& m,
                              double tol = kModularTol, const SolverOptions& opts = {});

}  // namespace hpd
