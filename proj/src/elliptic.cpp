#include "hpd/elliptic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hpd/errors.hpp"

namespace hpd {

namespace {

constexpr double kHalfPi = kPi / 2.0;
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kSwitch = 0.5;  // r^2 above this uses the expansions at r = 1
constexpr std::size_t kMaxTerms = 100'000;

// Everything the module hands out, computed together since the series share
// their coefficients.
struct Bundle {
  EvalResult K;
  EvalResult E;
  double k_minus_e_over_r2;
  double e_minus_rc2_k_over_r2;
  double gap_over_r2;
};

// Series for the three small-r combinations divided by (pi/2) x, x = r^2:
//   (K - E)/x      = sum_{n>=1} k_n n/(n+a-1) x^{n-1}
//   (E - r'^2 K)/x = a sum_{n>=1} k_{n-1} x^{n-1} / n
//   gap/x          = sum_{n>=0} k_n (2a^2-2a+1+n) / (2(1-a)(n+1)) x^n
// with k_n = (a)_n (1-a)_n / n!^2. All terms are positive.
void small_r_combinations(double a, double x, Bundle& out) {
  double k_prev = 1.0;  // k_{n-1}
  double x_pow = 1.0;   // x^{n-1}
  double s_ke = 0.0;
  double s_ek = 0.0;
  const double lead = 2.0 * a * a - 2.0 * a + 1.0;
  double s_gap = lead / (2.0 * (1.0 - a));
  for (std::size_t n = 1; n < kMaxTerms; ++n) {
    const double dn = static_cast<double>(n);
    const double k_n = k_prev * (a + dn - 1.0) * (dn - a) / (dn * dn);
    const double t_ke = k_n * dn / (dn + a - 1.0) * x_pow;
    const double t_ek = a * k_prev * x_pow / dn;
    const double t_gap = k_n * (lead + dn) / (2.0 * (1.0 - a) * (dn + 1.0)) * x_pow * x;
    s_ke += t_ke;
    s_ek += t_ek;
    s_gap += t_gap;
    if (t_ke <= 1e-17 * s_ke && t_ek <= 1e-17 * s_ek && t_gap <= 1e-17 * s_gap) break;
    k_prev = k_n;
    x_pow *= x;
  }
  out.k_minus_e_over_r2 = kHalfPi * s_ke;
  out.e_minus_rc2_k_over_r2 = kHalfPi * s_ek;
  out.gap_over_r2 = kHalfPi * s_gap;
}

// K_a near r = 1, in xc = r'^2 with log_xc = ln(r'^2):
//   K_a = (sin(pi a)/2) sum_n k_n xc^n (R_n - ln xc),
//   R_0 = R(a),  R_{n+1} = R_n + 2/(n+1) - 1/(a+n) - 1/(1-a+n).
EvalResult k_near_one(const SignatureParam& sa, double xc, double log_xc, double tol) {
  const double a = sa.value();
  double coef = 1.0;
  double rn = sa.ramanujan();
  double pw = 1.0;
  double sum = rn - log_xc;
  double last = sum;
  std::size_t n = 0;
  for (; n < kMaxTerms && xc > 0.0; ++n) {
    const double dn = static_cast<double>(n);
    rn += 2.0 / (dn + 1.0) - 1.0 / (a + dn) - 1.0 / (1.0 - a + dn);
    coef *= (a + dn) * (1.0 - a + dn) / ((dn + 1.0) * (dn + 1.0));
    pw *= xc;
    last = coef * pw * (rn - log_xc);
    sum += last;
    if (last <= tol * sum) break;
  }
  const double tail = xc < 1.0 ? last * xc / (1.0 - xc) : last;
  const double scale = 0.5 * sa.sin_pi_a();
  const double value = scale * sum;
  return {value, scale * tail, n + 1, scale * tail <= tol * value || tail == 0.0};
}

// E_a near r = 1 (the c - a - b = 1 case of the logarithmic expansion):
//   E_a = (sin(pi a)/2) [1/(1-a) - (1-a) xc sum_n c_n xc^n (ln xc + D_n)],
//   c_n = (a)_n (2-a)_n / (n! (n+1)!),  D_0 = 1/(1-a) - 1 - R(a),
//   D_{n+1} = D_n - 1/(n+1) - 1/(n+2) + 1/(a+n) + 1/(2-a+n).
EvalResult e_near_one(const SignatureParam& sa, double xc, double log_xc, double tol) {
  const double a = sa.value();
  const double scale = 0.5 * sa.sin_pi_a();
  const double head = 1.0 / (1.0 - a);
  if (xc == 0.0) {
    return {scale * head, 0.0, 1, true};
  }
  double coef = 1.0;
  double dn_val = head - 1.0 - sa.ramanujan();
  double pw = 1.0;
  double sum = log_xc + dn_val;  // every term is negative
  double last = sum;
  std::size_t n = 0;
  for (; n < kMaxTerms; ++n) {
    const double dn = static_cast<double>(n);
    dn_val += -1.0 / (dn + 1.0) - 1.0 / (dn + 2.0) + 1.0 / (a + dn) + 1.0 / (2.0 - a + dn);
    coef *= (a + dn) * (2.0 - a + dn) / ((dn + 1.0) * (dn + 2.0));
    pw *= xc;
    last = coef * pw * (log_xc + dn_val);
    sum += last;
    if (std::fabs(last) <= tol * std::fabs(sum)) break;
  }
  const double value = scale * (head - (1.0 - a) * xc * sum);
  const double tail = scale * (1.0 - a) * xc * std::fabs(last) * xc / (1.0 - xc);
  return {value, tail, n + 1, tail <= tol * value || tail == 0.0};
}

Bundle compute(const SignatureParam& sa, const Modulus& m, double tol) {
  const double a = sa.value();
  const double x = m.r() * m.r();
  Bundle b{};
  if (x <= kSwitch) {
    const EvalResult fk = hyp2f1({a, 1.0 - a, 1.0, x}, tol);
    const EvalResult fe = hyp2f1({a - 1.0, 1.0 - a, 1.0, x}, tol);
    b.K = {kHalfPi * fk.value, kHalfPi * fk.abs_err_estimate, fk.terms_used, fk.converged};
    b.E = {kHalfPi * fe.value, kHalfPi * fe.abs_err_estimate, fe.terms_used, fe.converged};
    small_r_combinations(a, x, b);
    return b;
  }

  const double xc = m.r_comp() * m.r_comp();
  const double log_xc = 2.0 * m.log_r_comp();
  if (std::isinf(log_xc)) {
    throw PoleError("K_a(r) is infinite at r = 1");
  }
  b.K = k_near_one(sa, xc, log_xc, tol);
  b.E = e_near_one(sa, xc, log_xc, tol);
  const double ke = b.K.value - b.E.value;
  b.k_minus_e_over_r2 = ke / x;
  b.e_minus_rc2_k_over_r2 = (b.E.value - xc * b.K.value) / x;
  b.gap_over_r2 = (ke + (2.0 * a - 1.0) / (2.0 * (1.0 - a)) * x * b.K.value) / x;
  return b;
}

void require_open(const Modulus& m, const char* what) {
  if (!(m.r() > 0.0) || !(m.r_comp() > 0.0)) {
    throw DomainError(std::string(what) + " requires 0 < r < 1");
  }
}

}  // namespace

Modulus::Modulus(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw DomainError("modulus r must lie in [0, 1], got " + std::to_string(r));
  }
  r_ = r;
  r_comp_ = std::sqrt((1.0 - r) * (1.0 + r));
  log_r_ = std::log(r);
  log_r_comp_ = 0.5 * (std::log1p(-r) + std::log1p(r));
}

Modulus Modulus::from_complement(double r_comp) { return Modulus(r_comp).complement(); }

Modulus Modulus::from_log(double log_r) {
  if (std::isnan(log_r) || log_r > 0.0) {
    throw DomainError("log of a modulus must be <= 0");
  }
  const double one_minus_r2 = -std::expm1(2.0 * log_r);
  // log1p keeps ln r' exact when r^2 is far below the rounding unit of 1.
  const double log_rc = 2.0 * log_r < -kLn2 ? 0.5 * std::log1p(-std::exp(2.0 * log_r))
                                             : 0.5 * std::log(one_minus_r2);
  return Modulus(std::exp(log_r), std::sqrt(one_minus_r2), log_r, log_rc);
}

Modulus Modulus::from_log_complement(double log_r_comp) {
  return from_log(log_r_comp).complement();
}

bool Modulus::saturated() const {
  const auto off = [](double v, double lv) {
    return (v < std::numeric_limits<double>::min() && std::isfinite(lv));
  };
  return off(r_, log_r_) || off(r_comp_, log_r_comp_) ||
         (r_ == 1.0 && std::isfinite(log_r_comp_) && r_comp_ == 0.0);
}

EvalResult ellint_K(const SignatureParam& a, const Modulus& m, double tol) {
  if (m.r_comp() == 0.0 && std::isinf(m.log_r_comp())) {
    throw PoleError("K_a(r) is infinite at r = 1");
  }
  return compute(a, m, tol).K;
}

EvalResult ellint_E(const SignatureParam& a, const Modulus& m, double tol) {
  if (m.r_comp() == 0.0 && std::isinf(m.log_r_comp())) {
    const double v = a.sin_pi_a() / (2.0 * (1.0 - a.value()));
    return {v, 0.0, 0, true};
  }
  return compute(a, m, tol).E;
}

EllipticPair ellint_KE(const SignatureParam& a, const Modulus& m) {
  const Bundle b = compute(a, m, kEllipticTol);
  return {b.K.value, b.E.value};
}

EllipticCombos elliptic_combos(const SignatureParam& a, const Modulus& m) {
  const Bundle b = compute(a, m, kEllipticTol);
  const double x = m.r() * m.r();
  return {b.K.value,
          b.E.value,
          x * b.k_minus_e_over_r2,
          x * b.e_minus_rc2_k_over_r2,
          x * b.gap_over_r2,
          b.k_minus_e_over_r2,
          b.e_minus_rc2_k_over_r2,
          b.gap_over_r2};
}

double k_minus_e(const SignatureParam& a, const Modulus& m) {
  return elliptic_combos(a, m).k_minus_e;
}

double e_minus_rc2_k(const SignatureParam& a, const Modulus& m) {
  return elliptic_combos(a, m).e_minus_rc2_k;
}

double shifted_gap(const SignatureParam& a, const Modulus& m) {
  return elliptic_combos(a, m).gap;
}

double dK_dr(const SignatureParam& a, const Modulus& m) {
  require_open(m, "dK_dr");
  const double rc2 = m.r_comp() * m.r_comp();
  return 2.0 * (1.0 - a.value()) * m.r() * elliptic_combos(a, m).e_minus_rc2_k_over_r2 / rc2;
}

double dE_dr(const SignatureParam& a, const Modulus& m) {
  require_open(m, "dE_dr");
  return 2.0 * (a.value() - 1.0) * m.r() * elliptic_combos(a, m).k_minus_e_over_r2;
}

}  // namespace hpd
