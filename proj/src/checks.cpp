#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "hpd/errors.hpp"
#include "hpd/verifier.hpp"

namespace hpd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEqualityTol = 1e-11;

// K values for the l'Hopital limits and the falsification probes.
constexpr double kNearOne = 1.0 + 1e-6;
constexpr double kFar = 1e6;
constexpr std::array<double, 3> kProbeNearOne = {1.0 + 1e-6, 1.0 + 1e-5, 1.0 + 1e-4};
constexpr std::array<double, 3> kProbeFar = {1e4, 1e5, 1e6};

std::string free_name(const NamedFn& fn) {
  return fn.free_variable() == FreeVariable::r ? "r" : "K";
}

double log_phi(const SignatureParam& a, double K, const Modulus& m) {
  return phi(a, DistortionCoeff(K), m).log_r();
}

// A distortion ratio in log form as a function of K, with the parameters
// that identify it in the report.
struct LogRatio {
  std::function<double(double)> at;
  std::map<std::string, double> params;

  CheckRecord record(std::string check, double K, double lhs, double rhs, double margin) const {
    CheckRecord rec{std::move(check), params, lhs, rhs, margin};
    rec.params["K"] = K;
    return rec;
  }
};

// One side of a two-sided family: margin(L, K) >= 0 when the bound holds.
struct Bound {
  std::string name;
  bool reciprocal;  // evaluated on phi_{1/K}
  bool upper;       // L <= exponent * scale(K)
  double exponent;
};

double scale_of(const Bound& b, double K) { return b.reciprocal ? 1.0 - K : 1.0 - 1.0 / K; }

double ratio_at(const LogRatio& L, const Bound& b, double K) {
  return L.at(b.reciprocal ? 1.0 / K : K);
}

double bound_margin(const Bound& b, double exponent, double K, double value) {
  const double rhs = exponent * scale_of(b, K);
  return b.upper ? rhs - value : value - rhs;
}

void check_bound(VerificationReport& rep, const LogRatio& L, const Bound& b, double K,
                 double margin_guard) {
  try {
    const double value = ratio_at(L, b, K);
    const double rhs = b.exponent * scale_of(b, K);
    rep.record(L.record(b.name, K, value, rhs, bound_margin(b, b.exponent, K, value)),
               margin_guard);
  } catch (const std::exception& e) {
    rep.record_outcome(L.record(b.name + ": " + e.what(), K, kNaN, kNaN, kNaN), false);
  }
}

// L(K)/scale(K) tends to the sharp exponent at `K_limit`.
void check_sharpness(VerificationReport& rep, const LogRatio& L, const Bound& b, double K_limit,
                     double tol) {
  const std::string name = b.name + ":sharp";
  try {
    const double est = ratio_at(L, b, K_limit) / scale_of(b, K_limit);
    const double err = std::fabs(est - b.exponent);
    rep.record_outcome(L.record(name, K_limit, est, b.exponent, tol - err), err <= tol);
  } catch (const std::exception& e) {
    rep.record_outcome(L.record(name + ": " + e.what(), K_limit, kNaN, kNaN, kNaN), false);
  }
}

// Moves the exponent by epsilon in the direction that makes the bound too
// tight and expects at least one violation among the probe points.
template <std::size_t N>
void falsify(VerificationReport& rep, const LogRatio& L, const Bound& b,
             const std::array<double, N>& probes, double epsilon, double margin_guard) {
  // Upper bounds on L tighten when the exponent term shrinks, lower ones when it grows.
  const double sign_scale = scale_of(b, probes[0]) > 0.0 ? 1.0 : -1.0;
  const double perturbed = b.exponent - (b.upper ? 1.0 : -1.0) * sign_scale * epsilon;
  bool violated = false;
  for (double K : probes) {
    try {
      const double value = ratio_at(L, b, K);
      const double margin = bound_margin(b, perturbed, K, value);
      if (margin < -margin_guard) {
        violated = true;
        auto rec = L.record(b.name + ":falsify", K, value, perturbed * scale_of(b, K), margin);
        rec.params["epsilon"] = epsilon;
        rep.record_expected_violation(std::move(rec));
      }
    } catch (const std::exception&) {
      // An unevaluable probe point is not a violation.
    }
  }
  if (!violated) {
    auto rec = L.record(b.name + ":falsify:no-violation", probes.back(), kNaN, perturbed, kNaN);
    rec.params["epsilon"] = epsilon;
    rep.record_outcome(std::move(rec), false);
  }
}

void check_equality_at_one(VerificationReport& rep, const LogRatio& L, const std::string& name) {
  try {
    const double v = L.at(1.0);
    rep.record_outcome(L.record(name, 1.0, v, 0.0, kEqualityTol - std::fabs(v)),
                       std::fabs(v) <= kEqualityTol);
  } catch (const std::exception& e) {
    rep.record_outcome(L.record(name + ": " + e.what(), 1.0, kNaN, kNaN, kNaN), false);
  }
}

// Shared driver for the multiplicative and power families: the direct bound
// on phi_K, the two-sided bound on phi_{1/K}, which of them are sharp near
// K = 1 and which as K -> inf, and the probes.
struct Family {
  std::array<Bound, 3> bounds;
  std::array<bool, 3> sharp_near_one;
};

VerificationReport run_family(const LogRatio& L, const Family& fam, std::span<const double> K_grid,
                              double margin_guard, const SharpnessOptions& sharp) {
  VerificationReport rep;
  for (double K : K_grid) {
    if (!(K >= 1.0) || !std::isfinite(K)) {
      throw DomainError("distortion bounds need K in [1, inf), got " + std::to_string(K));
    }
  }
  for (double K : K_grid) {
    if (K == 1.0) {
      check_equality_at_one(rep, L, fam.bounds[0].name + ":K=1");
      continue;
    }
    for (const Bound& b : fam.bounds) check_bound(rep, L, b, K, margin_guard);
  }
  for (std::size_t i = 0; i < fam.bounds.size(); ++i) {
    const Bound& b = fam.bounds[i];
    check_sharpness(rep, L, b, fam.sharp_near_one[i] ? kNearOne : kFar, sharp.lhopital_tol);
    if (sharp.falsify_epsilon > 0.0) {
      if (fam.sharp_near_one[i]) {
        falsify(rep, L, b, kProbeNearOne, sharp.falsify_epsilon, margin_guard);
      } else {
        falsify(rep, L, b, kProbeFar, sharp.falsify_epsilon, margin_guard);
      }
    }
  }
  return rep;
}

}  // namespace

std::string_view to_string(Direction d) {
  return d == Direction::increasing ? "increasing" : "decreasing";
}

VerificationReport check_monotone(const NamedFn& fn, std::span<const double> grid, Direction dir,
                                  double strict_tol) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw DomainError("monotonicity grid must be sorted ascending");
  }
  const bool use_log = fn.positive();
  const std::string var = free_name(fn);
  const std::string name = "monotone:" + std::string(fn.name()) + ":" +
                           std::string(to_string(dir)) + (use_log ? ":log" : "");

  std::vector<double> values(grid.size(), kNaN);
  std::vector<std::string> errors(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      values[i] = use_log ? eval_named_log(fn, grid[i]) : eval_named(fn, grid[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }

  VerificationReport rep;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    CheckRecord rec{name, fn.params(), values[i], values[i + 1], kNaN};
    rec.params[var] = grid[i];
    rec.params[var + "_next"] = grid[i + 1];
    if (!errors[i].empty() || !errors[i + 1].empty()) {
      rec.check += ": " + (errors[i].empty() ? errors[i + 1] : errors[i]);
      rep.record_outcome(std::move(rec), false);
      continue;
    }
    const double step = values[i + 1] - values[i];
    rec.margin = dir == Direction::increasing ? step : -step;
    const double scale = std::max({1.0, std::fabs(values[i]), std::fabs(values[i + 1])});
    rep.record_one_sided(std::move(rec), strict_tol * scale);
  }
  return rep;
}

VerificationReport check_range(const NamedFn& fn, Endpoint endpoint, double expected,
                               double approach, double tol) {
  VerificationReport rep;
  CheckRecord rec{"range:" + std::string(fn.name()) +
                      (endpoint == Endpoint::lower ? ":lower" : ":upper"),
                  fn.params(), kNaN, expected, kNaN};
  rec.params[free_name(fn)] = approach;
  try {
    rec.lhs = eval_named(fn, approach);
    rec.margin = tol - std::fabs(rec.lhs - expected);
    const bool ok = rec.margin >= 0.0;
    rep.record_outcome(std::move(rec), ok);
  } catch (const std::exception& e) {
    rec.check += std::string(": ") + e.what();
    rep.record_outcome(std::move(rec), false);
  }
  return rep;
}

VerificationReport check_theorem_mult(const SignatureParam& a, const Modulus& r, const Modulus& t,
                                      std::span<const double> K_grid, double margin_guard,
                                      const SharpnessOptions& sharp) {
  const Modulus x = Modulus::from_log(r.log_r() + t.log_r());
  const MultExponents ex = sharp_exp_mult(a, r, t);
  LogRatio L{[&a, r, t, x](double K) {
               return log_phi(a, K, r) + log_phi(a, K, t) - log_phi(a, K, x);
             },
             {{"a", a.value()}, {"r", r.r()}, {"t", t.r()}}};
  const Family fam{{{{"mult:alpha", false, true, ex.alpha_star},
                     {"mult:beta", true, true, ex.alpha_star},
                     {"mult:gamma", true, false, ex.gamma_star}}},
                   {true, true, false}};
  return run_family(L, fam, K_grid, margin_guard, sharp);
}

VerificationReport check_theorem_power(const SignatureParam& a, const Modulus& r, double p,
                                       std::span<const double> K_grid, double margin_guard,
                                       const SharpnessOptions& sharp) {
  const PowerExponents ex = sharp_exp_power(a, r, p);
  const Modulus x = Modulus::from_log(p * r.log_r());
  LogRatio L{[&a, r, x, p](double K) { return p * log_phi(a, K, r) - log_phi(a, K, x); },
             {{"a", a.value()}, {"r", r.r()}, {"p", p}}};

  if (p == 1.0) {
    VerificationReport rep;
    for (double K : K_grid) {
      if (!(K >= 1.0) || !std::isfinite(K)) {
        throw DomainError("distortion bounds need K in [1, inf), got " + std::to_string(K));
      }
      for (double k : {K, 1.0 / K}) {
        try {
          const double v = L.at(k);
          rep.record_outcome(L.record("power:p=1", k, v, 0.0, kEqualityTol - std::fabs(v)),
                             std::fabs(v) <= kEqualityTol);
        } catch (const std::exception& e) {
          rep.record_outcome(L.record(std::string("power:p=1: ") + e.what(), k, kNaN, kNaN, kNaN),
                             false);
        }
      }
    }
    return rep;
  }

  const bool small_p = p < 1.0;
  // p < 1: delta is a lower bound, zeta = m-based, eta = mu-based.
  // p > 1: delta is an upper bound, zeta = mu-based, eta = m-based.
  const Family fam =
      small_p ? Family{{{{"power:delta", false, false, ex.m_based},
                         {"power:zeta", true, false, ex.m_based},
                         {"power:eta", true, true, ex.mu_based}}},
                       {true, true, false}}
              : Family{{{{"power:delta", false, true, ex.m_based},
                         {"power:zeta", true, false, ex.mu_based},
                         {"power:eta", true, true, ex.m_based}}},
                       {true, false, true}};
  return run_family(L, fam, K_grid, margin_guard, sharp);
}

double find_sign_change(const NamedFn& fn, double K_lo, double K_hi, double tol, SignOf what) {
  if (fn.free_variable() != FreeVariable::K) {
    throw DomainError("find_sign_change needs a function of K");
  }
  if (!(K_lo > 0.0 && K_lo < K_hi && std::isfinite(K_hi)) || !(tol > 0.0)) {
    throw DomainError("find_sign_change needs 0 < K_lo < K_hi < inf and tol > 0");
  }
  const auto f = [&](double K) {
    if (what == SignOf::value) return eval_named(fn, K);
    const double h = 1e-4 * K;
    if (fn.positive()) {
      return (eval_named_log(fn, K + h) - eval_named_log(fn, K - h)) / (2.0 * h);
    }
    return (eval_named(fn, K + h) - eval_named(fn, K - h)) / (2.0 * h);
  };
  double lo = K_lo;
  double hi = K_hi;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw DomainError("find_sign_change: bracket endpoints have the same sign");
  }
  for (int it = 0; it < 200 && hi - lo > tol * lo; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace hpd
