#pragma once

// Scalar special functions: gamma, digamma, the Ramanujan constant R(a) and
// the Gauss hypergeometric series 2F1.
//
// Everything here is restricted to real arguments in binary64. The complex
// definitions of Gamma and 2F1 are never needed by the rest of the library.

#include <cstddef>

namespace hpd {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// The signature parameter a of the family F(a, 1-a; 1; .), restricted to the
// half-open interval (0, 1/2].
class SignatureParam {
 public:
  // Throws DomainError unless 0 < a <= 1/2.
  explicit SignatureParam(double a);

  double value() const { return a_; }
  double sin_pi_a() const { return sin_pi_a_; }
  // R(a), cached at construction.
  double ramanujan() const { return ramanujan_; }

 private:
  double a_;
  double sin_pi_a_;
  double ramanujan_;
};

struct EvalResult {
  double value = 0.0;
  // Truncation error estimate of the series that produced `value`.
  double abs_err_estimate = 0.0;
  std::size_t terms_used = 0;
  bool converged = false;
};

// Parameters of F(a, b; c; x). `validate` enforces c not in {0, -1, -2, ...}
// and |x| < 1, or x == 1 with c - a - b > 0.
struct HypergeomParams {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double x = 0.0;

  void validate() const;
};

struct HypergeomOptions {
  std::size_t max_terms = 1'000'000;
};

// Gamma(x) for x > 0.
double gamma(double x);

// psi(x) = Gamma'(x)/Gamma(x) for x > 0. Upward recurrence to x >= 12 and
// the Bernoulli asymptotic series; error within a few ulp of max(1, |psi|) on
// [0.05, 50].
double digamma(double x);

// R(a) = -2*gamma - psi(a) - psi(1 - a).
double ramanujan_R(const SignatureParam& a);

// Partial sums of the hypergeometric series, stopped once two consecutive
// terms satisfy |t_n| <= tol*|S_n| and the geometric tail bound is <= tol.
// At x == 1 (only legal when c - a - b > 0) Gauss's summation theorem is
// used instead of the slowly convergent series.
//
// Throws DomainError for invalid parameters or tol <= 0 and ConvergenceError
// when options.max_terms is exhausted.
EvalResult hyp2f1(const HypergeomParams& p, double tol,
                  const HypergeomOptions& options = {});

}  // namespace hpd
