#include "hpd/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hpd/errors.hpp"

namespace hpd {

namespace {

constexpr double kPiSq = kPi * kPi;
const double kLogInvSqrt2 = -0.5 * std::log(2.0);

void require_interior(const Modulus& m, const char* what) {
  if (!std::isfinite(m.log_r()) || !std::isfinite(m.log_r_comp())) {
    throw DomainError(std::string(what) + " requires 0 < r < 1");
  }
}

double K_of(const SignatureParam& a, const Modulus& m) { return ellint_K(a, m).value; }

// Solves mu_a(exp(u)) = y for u <= ln(1/sqrt 2); requires y >= mu_symmetric_value(a).
InverseResult solve_small_side(const SignatureParam& a, double y, const SolverOptions& opts) {
  const double c = mu_symmetric_value(a);
  const auto residual = [&](double u) { return mu(a, Modulus::from_log(u)) - y; };
  // d mu / d(ln r) = -pi^2 / (4 r'^2 K_a(r)^2)
  const auto slope = [&](double u) {
    const Modulus m = Modulus::from_log(u);
    const double k = K_of(a, m);
    return -kPiSq / (4.0 * m.r_comp() * m.r_comp() * k * k);
  };

  // mu_a(r) + ln r decreases from R(a)/2 (at r = 0) to c + ln(1/sqrt 2), which
  // brackets ln r between (c + ln(1/sqrt 2)) - y and R(a)/2 - y.
  double hi = kLogInvSqrt2;
  double lo = std::min(hi, c + kLogInvSqrt2 - y) - 1.0;
  while (residual(lo) < 0.0) lo = 2.0 * lo - 1.0;

  double u = std::clamp(0.5 * a.ramanujan() - y, lo, hi);
  const double target = opts.tol * std::max(1.0, y);
  for (int it = 1; it <= opts.max_iter; ++it) {
    const double g = residual(u);
    if (std::fabs(g) <= target) {
      // One more Newton step costs little and takes the root to full precision.
      const double polished = u - g / slope(u);
      if (polished >= lo && polished <= hi) {
        const double g2 = residual(polished);
        if (std::fabs(g2) <= std::fabs(g)) return {Modulus::from_log(polished), std::fabs(g2), it};
      }
      return {Modulus::from_log(u), std::fabs(g), it};
    }
    if (g > 0.0) {
      lo = u;
    } else {
      hi = u;
    }
    double next = u - g / slope(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == u) return {Modulus::from_log(u), std::fabs(g), it};
    u = next;
  }
  throw ConvergenceError("mu_inv did not converge within " + std::to_string(opts.max_iter) +
                         " iterations (y = " + std::to_string(y) + ")");
}

}  // namespace

DistortionCoeff::DistortionCoeff(double K) : k_(K) {
  if (!(K > 0.0) || !std::isfinite(K)) {
    throw DomainError("distortion coefficient K must be finite and positive");
  }
}

double mu_symmetric_value(const SignatureParam& a) { return kPi / (2.0 * a.sin_pi_a()); }

double mu(const SignatureParam& a, const Modulus& m) {
  require_interior(m, "mu");
  return mu_symmetric_value(a) * K_of(a, m.complement()) / K_of(a, m);
}

double dmu_dr(const SignatureParam& a, const Modulus& m) {
  require_interior(m, "dmu_dr");
  const double k = K_of(a, m);
  return -kPiSq / (4.0 * m.r() * m.r_comp() * m.r_comp() * k * k);
}

double m_fn(const SignatureParam& a, const Modulus& m) {
  require_interior(m, "m_fn");
  const double rc2 = m.r_comp() * m.r_comp();
  return 2.0 / (kPi * a.sin_pi_a()) * rc2 * K_of(a, m.complement()) * K_of(a, m);
}

double dm_dr(const SignatureParam& a, const Modulus& m) {
  require_interior(m, "dm_dr");
  const double av = a.value();
  const double r = m.r();
  const double k = K_of(a, m);
  const EllipticPair comp = ellint_KE(a, m.complement());
  return 1.0 / r + 4.0 * k / (kPi * r * a.sin_pi_a()) *
                       ((1.0 - 2.0 * av) * r * r * comp.K_val - 2.0 * (1.0 - av) * comp.E_val);
}

InverseResult mu_inv_solve(const SignatureParam& a, double y, const SolverOptions& opts) {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw DomainError("mu_inv requires a finite y > 0");
  }
  if (!(opts.tol > 0.0) || opts.max_iter < 1) {
    throw DomainError("mu_inv requires tol > 0 and max_iter >= 1");
  }
  const double c = mu_symmetric_value(a);
  if (y >= c) return solve_small_side(a, y, opts);
  // mu_a(r) mu_a(r') = c^2: solve for r' instead.
  InverseResult res = solve_small_side(a, c * c / y, opts);
  res.modulus = res.modulus.complement();
  res.residual = std::fabs(mu(a, res.modulus) - y);
  return res;
}

Modulus mu_inv(const SignatureParam& a, double y, const SolverOptions& opts) {
  return mu_inv_solve(a, y, opts).modulus;
}

Modulus phi(const SignatureParam& a, const DistortionCoeff& K, const Modulus& m,
            const SolverOptions& opts) {
  if (m.r() == 0.0 && std::isinf(m.log_r())) return m;
  if (m.r_comp() == 0.0 && std::isinf(m.log_r_comp())) return m;
  if (K.value() == 1.0) return m;
  const double y = mu(a, m) / K.value();
  if (std::isinf(y)) return Modulus(0.0);
  if (y == 0.0) return Modulus(1.0);
  return mu_inv(a, y, opts);
}

double dphi_dK(const SignatureParam& a, const DistortionCoeff& K, const Modulus& m) {
  const Modulus s = phi(a, K, m);
  require_interior(s, "dphi_dK");
  const double ks = K_of(a, s);
  const double k = K.value();
  return 4.0 * s.r() * s.r_comp() * s.r_comp() * ks * ks / kPiSq * mu(a, m) / (k * k);
}

double dphi_dK_image_form(const SignatureParam& a, const DistortionCoeff& K, const Modulus& m) {
  const Modulus s = phi(a, K, m);
  require_interior(s, "dphi_dK");
  const double ks = K_of(a, s);
  return 4.0 * s.r() * s.r_comp() * s.r_comp() * ks * ks / kPiSq * mu(a, s) / K.value();
}

ModularSolution solve_modular(const SignatureParam& a, double degree_p, const Modulus& m,
                              double tol, const SolverOptions& opts) {
  if (!(degree_p > 0.0) || !std::isfinite(degree_p)) {
    throw DomainError("modular equation degree p must be finite and positive");
  }
  if (!(tol > 0.0)) throw DomainError("modular equation tolerance must be positive");
  require_interior(m, "solve_modular");

  const double y = degree_p * mu(a, m);
  if (!std::isfinite(y)) throw ConvergenceError("modular equation target overflows");
  const InverseResult inv = degree_p == 1.0 ? InverseResult{m, 0.0, 0} : mu_inv_solve(a, y, opts);
  const Modulus& s = inv.modulus;

  // Defect of the equation in its hypergeometric-ratio form; the pi/2 factors
  // of K_a cancel in each ratio.
  const double lhs = K_of(a, s.complement()) / K_of(a, s);
  const double rhs = degree_p * K_of(a, m.complement()) / K_of(a, m);
  const double residual = std::fabs(lhs - rhs);
  if (!(residual <= tol)) {
    throw ConvergenceError("modular equation residual " + std::to_string(residual) +
                           " exceeds tolerance");
  }
  return {s, residual, inv.iterations};
}

}  // namespace hpd
