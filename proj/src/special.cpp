#include "hpd/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hpd/errors.hpp"

namespace hpd {

namespace {

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

double recip_gamma(double v) {
  if (is_nonpositive_integer(v)) return 0.0;
  return 1.0 / std::tgamma(v);
}

}  // namespace

SignatureParam::SignatureParam(double a) : a_(a) {
  if (!(a > 0.0 && a <= 0.5)) {
    throw DomainError("signature parameter a must satisfy 0 < a <= 1/2, got " +
                      std::to_string(a));
  }
  sin_pi_a_ = std::sin(kPi * a);
  ramanujan_ = -2.0 * kEulerGamma - digamma(a) - digamma(1.0 - a);
}

double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("gamma requires a finite x > 0");
  }
  return std::tgamma(x);
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("digamma requires a finite x > 0");
  }
  double shift = 0.0;
  while (x < 12.0) {
    shift += 1.0 / x;
    x += 1.0;
  }
  const double w = 1.0 / (x * x);
  // -sum B_{2k} / (2k x^{2k}), k = 1..7, Horner in w.
  const double tail =
      w * (1.0 / 12 -
           w * (1.0 / 120 -
                w * (1.0 / 252 -
                     w * (1.0 / 240 -
                          w * (1.0 / 132 - w * (691.0 / 32760 - w * (1.0 / 12)))))));
  return std::log(x) - 0.5 / x - tail - shift;
}

double ramanujan_R(const SignatureParam& a) { return a.ramanujan(); }

void HypergeomParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(x)) {
    throw DomainError("hyp2f1 parameters must be finite");
  }
  if (is_nonpositive_integer(c)) {
    throw DomainError("hyp2f1 requires c not in {0, -1, -2, ...}");
  }
  const double ax = std::fabs(x);
  if (ax < 1.0) return;
  if (x == 1.0 && c - a - b > 0.0) return;
  throw DomainError("hyp2f1 series requires |x| < 1, or x = 1 with c - a - b > 0");
}

EvalResult hyp2f1(const HypergeomParams& p, double tol, const HypergeomOptions& options) {
  p.validate();
  if (!(tol > 0.0)) throw DomainError("hyp2f1 tolerance must be positive");

  if (p.x == 1.0) {
    // Gauss: F(a,b;c;1) = G(c) G(c-a-b) / (G(c-a) G(c-b)).
    const double v = std::tgamma(p.c) * std::tgamma(p.c - p.a - p.b) *
                     recip_gamma(p.c - p.a) * recip_gamma(p.c - p.b);
    return {v, 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(v), 0, true};
  }

  double sum = 1.0;
  double term = 1.0;
  int small_in_a_row = 0;
  for (std::size_t n = 0; n < options.max_terms; ++n) {
    const double k = static_cast<double>(n);
    term *= (p.a + k) * (p.b + k) / ((p.c + k) * (k + 1.0)) * p.x;
    sum += term;

    small_in_a_row = std::fabs(term) <= tol * std::fabs(sum) ? small_in_a_row + 1 : 0;
    if (small_in_a_row < 2) continue;

    // Ratios of consecutive terms tend to |x| and, past the point where all
    // factors have settled in sign, stay below max(next ratio, |x|).
    const double k1 = k + 1.0;
    const double next_ratio =
        std::fabs((p.a + k1) * (p.b + k1) / ((p.c + k1) * (k1 + 1.0)) * p.x);
    const double q = std::max(next_ratio, std::fabs(p.x));
    if (q >= 1.0) continue;
    const double tail = std::fabs(term) * q / (1.0 - q);
    if (tail <= tol) return {sum, tail, n + 2, true};
  }
  throw ConvergenceError("hyp2f1 did not converge within " +
                         std::to_string(options.max_terms) + " terms");
}

}  // namespace hpd
