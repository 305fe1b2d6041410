#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "hpd/errors.hpp"
#include "hpd/verifier.hpp"
#include "parallel.hpp"

namespace hpd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLimitTol = 1e-3;
constexpr double kMonotoneNoise = 1e-11;
constexpr double kMuProductTol = 1e-10;
constexpr double kRoundTripTol = 1e-10;
constexpr double kLandenTol = 1e-8;
constexpr double kFormTol = 1e-9;
constexpr double kFdStep = 1e-5;
constexpr double kFarK = 1e6;

using Task = std::function<VerificationReport()>;
using Params = std::map<std::string, double>;

struct SuiteInfo {
  Suite suite;
  std::string_view name;
};

constexpr SuiteInfo kSuites[] = {
    {Suite::identities, "identities"},     {Suite::derivatives, "derivatives"},
    {Suite::asymptotics, "asymptotics"},   {Suite::prop_pro2, "prop-pro2"},
    {Suite::prop_pro1, "prop-pro1"},       {Suite::prop_pro4, "prop-pro4"},
    {Suite::prop_pro3, "prop-pro3"},       {Suite::thm_mult, "thm-mult"},
    {Suite::thm_power, "thm-power"},       {Suite::thm_g_monotone, "thm-g-monotone"},
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// |value - expected| <= tol, recorded with margin tol - |value - expected|.
void expect_near(VerificationReport& rep, std::string check, Params params, double value,
                 double expected, double tol) {
  const double margin = tol - std::fabs(value - expected);
  rep.record_outcome({std::move(check), std::move(params), value, expected, margin}, margin >= 0.0);
}

void expect_rel(VerificationReport& rep, std::string check, Params params, double value,
                double expected, double rel_tol) {
  const double tol = rel_tol * std::fabs(expected);
  expect_near(rep, std::move(check), std::move(params), value, expected, tol);
}

// Runs `body`, turning any exception into a failed record named `check`.
void guarded(VerificationReport& rep, const std::string& check, const Params& params,
             const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    rep.record_outcome({check + ": " + e.what(), params, kNaN, kNaN, kNaN}, false);
  }
}

Modulus phi_of(const SignatureParam& a, double K, const Modulus& m) {
  return phi(a, DistortionCoeff(K), m);
}

// ---------------------------------------------------------------------------

std::vector<Task> identities(const SweepSpec& spec) {
  std::vector<Task> tasks;
  for (double av : spec.a_grid) {
    for (double rv : spec.r_grid) {
      tasks.push_back([&spec, av, rv] {
        VerificationReport rep;
        const SignatureParam a(av);
        const Modulus r(rv);
        const Params base{{"a", av}, {"r", rv}};
        for (double K : spec.K_grid) {
          Params p = base;
          p["K"] = K;
          guarded(rep, "identity:complement", p, [&] {
            const double s = phi_of(a, K, r).r();
            const double u = phi_of(a, 1.0 / K, r.complement()).r();
            expect_near(rep, "identity:complement", p, s * s + u * u, 1.0, spec.tolerance);
          });
          guarded(rep, "identity:semigroup", p, [&] {
            const double twice = phi_of(a, K, phi_of(a, 2.0, r)).r();
            expect_near(rep, "identity:semigroup", p, twice, phi_of(a, 2.0 * K, r).r(),
                        spec.tolerance);
          });
          guarded(rep, "identity:inverse", p, [&] {
            expect_near(rep, "identity:inverse", p, phi_of(a, K, phi_of(a, 1.0 / K, r)).r(), rv,
                        spec.tolerance);
          });
        }
        guarded(rep, "identity:mu-product", base, [&] {
          const double c = mu_symmetric_value(a);
          expect_rel(rep, "identity:mu-product", base, mu(a, r) * mu(a, r.complement()), c * c,
                     kMuProductTol);
        });
        guarded(rep, "identity:mu-inverse", base, [&] {
          expect_rel(rep, "identity:mu-inverse", base, mu_inv(a, mu(a, r)).r(), rv, kRoundTripTol);
        });
        for (double p : spec.p_grid) {
          Params pp = base;
          pp["p"] = p;
          guarded(rep, "identity:modular", pp, [&] {
            const ModularSolution sol = solve_modular(a, p, r);
            rep.record_outcome({"identity:modular", pp, sol.residual, kModularTol,
                                kModularTol - sol.residual},
                               sol.residual <= kModularTol);
          });
        }
        return rep;
      });
    }
    // phi_K is increasing in r.
    for (double K : spec.K_grid) {
      tasks.push_back([&spec, av, K] {
        VerificationReport rep;
        const SignatureParam a(av);
        double prev = 0.0;
        for (double rv : spec.r_grid) {
          const Params p{{"a", av}, {"K", K}, {"r", rv}};
          guarded(rep, "identity:increasing", p, [&] {
            const double s = phi_of(a, K, Modulus(rv)).r();
            rep.record_one_sided({"identity:increasing", p, prev, s, s - prev}, 0.0);
            prev = s;
          });
        }
        return rep;
      });
    }
  }
  // Landen transformations at a = 1/2.
  for (double rv : spec.r_grid) {
    tasks.push_back([rv] {
      VerificationReport rep;
      const SignatureParam half(0.5);
      const Modulus r(rv);
      const Params p{{"a", 0.5}, {"r", rv}};
      guarded(rep, "identity:landen", p, [&] {
        expect_rel(rep, "identity:landen-ascending", p, phi_of(half, 2.0, r).r(),
                   2.0 * std::sqrt(rv) / (1.0 + rv), kLandenTol);
        const double rc = r.r_comp();
        expect_rel(rep, "identity:landen-descending", p, phi_of(half, 0.5, r).r(),
                   (1.0 - rc) / (1.0 + rc), kLandenTol);
      });
      return rep;
    });
  }
  return tasks;
}

// ---------------------------------------------------------------------------

double central(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

void expect_derivative(VerificationReport& rep, const std::string& check, const Params& p,
                       double analytic, double numeric, double tol) {
  const double allowed = std::max(tol, tol * std::fabs(numeric));
  expect_near(rep, check, p, analytic, numeric, allowed);
}

std::vector<Task> derivatives(const SweepSpec& spec) {
  std::vector<Task> tasks;
  for (double av : spec.a_grid) {
    for (double rv : spec.r_grid) {
      tasks.push_back([&spec, av, rv] {
        VerificationReport rep;
        const SignatureParam a(av);
        const Modulus r(rv);
        const Params base{{"a", av}, {"r", rv}};
        const double tol = spec.tolerance;
        guarded(rep, "derivative:r", base, [&] {
          const auto K_at = [&](double x) { return ellint_K(a, Modulus(x)).value; };
          const auto E_at = [&](double x) { return ellint_E(a, Modulus(x)).value; };
          const auto mu_at = [&](double x) { return mu(a, Modulus(x)); };
          const auto m_at = [&](double x) { return m_fn(a, Modulus(x)); };
          expect_derivative(rep, "derivative:dK_dr", base, dK_dr(a, r), central(K_at, rv, kFdStep),
                            tol);
          expect_derivative(rep, "derivative:dE_dr", base, dE_dr(a, r), central(E_at, rv, kFdStep),
                            tol);
          expect_derivative(rep, "derivative:dmu_dr", base, dmu_dr(a, r),
                            central(mu_at, rv, kFdStep), tol);
          expect_derivative(rep, "derivative:dm_dr", base, dm_dr(a, r), central(m_at, rv, kFdStep),
                            tol);
        });
        for (double K : spec.K_grid) {
          Params p = base;
          p["K"] = K;
          guarded(rep, "derivative:dphi_dK", p, [&] {
            const auto s_at = [&](double k) { return phi_of(a, k, r).r(); };
            const DistortionCoeff coeff(K);
            const double d = dphi_dK(a, coeff, r);
            expect_derivative(rep, "derivative:dphi_dK", p, d, central(s_at, K, kFdStep * K), tol);
            expect_rel(rep, "derivative:dphi_dK-forms", p, dphi_dK_image_form(a, coeff, r), d,
                       kFormTol);
          });
        }
        return rep;
      });
    }
  }
  return tasks;
}

// ---------------------------------------------------------------------------

std::vector<Task> asymptotics(const SweepSpec& spec) {
  std::vector<Task> tasks;
  for (double av : spec.a_grid) {
    tasks.push_back([&spec, av] {
      VerificationReport rep;
      const SignatureParam a(av);
      const double half_R = 0.5 * a.ramanujan();
      const double tol = spec.tolerance;
      const Modulus tiny(1e-6);
      const Params p{{"a", av}, {"r", 1e-6}};
      guarded(rep, "asymptotic:r->0", p, [&] {
        expect_near(rep, "asymptotic:mu+log", p, mu(a, tiny) + tiny.log_r(), half_R, tol);
        expect_near(rep, "asymptotic:m+log", p, m_fn(a, tiny) + tiny.log_r(), half_R, tol);
        Params pp = p;
        pp["p"] = 2.0;
        expect_near(rep, "asymptotic:m_based(p=2)", pp, sharp_exp_power(a, tiny, 2.0).m_based,
                    half_R, tol);
      });
      rep.merge(check_range(NamedFn(NamedFnId::f1, {{"a", av}}), Endpoint::lower,
                            kPi / (2.0 * (1.0 - av)), 1e-8, 1e-6));
      const Modulus near_one(1.0 - 1e-9);
      for (double tv : spec.t_grid) {
        const Params pt{{"a", av}, {"r", 1.0 - 1e-9}, {"t", tv}};
        guarded(rep, "asymptotic:alpha(r->1)", pt, [&] {
          expect_near(rep, "asymptotic:alpha(r->1)", pt,
                      sharp_exp_mult(a, near_one, Modulus(tv)).alpha_star, 0.0, tol);
        });
      }
      for (double rv : spec.r_grid) {
        for (double tv : spec.t_grid) {
          const Params pt{{"a", av}, {"r", rv}, {"t", tv}};
          guarded(rep, "asymptotic:alpha<R/2", pt, [&] {
            const double alpha = sharp_exp_mult(a, Modulus(rv), Modulus(tv)).alpha_star;
            rep.record({"asymptotic:alpha<R/2", pt, alpha, half_R, half_R - alpha},
                       spec.margin_guard);
            if (av == 0.5) {
              const double bound = std::exp(alpha);
              rep.record({"asymptotic:exp(alpha)<4", pt, bound, 4.0, 4.0 - bound},
                         spec.margin_guard);
            }
          });
        }
      }
      return rep;
    });
  }
  return tasks;
}

// ---------------------------------------------------------------------------

// Samples ln r' = -k ln 10, k = 1..max_exp: a modulus approaching 1 far past
// what r itself can resolve.
std::vector<Modulus> approach_one(int max_exp) {
  std::vector<Modulus> out;
  for (int k = 1; k <= max_exp; ++k) {
    out.push_back(Modulus::from_log_complement(-k * std::log(10.0)));
  }
  return out;
}

// |fn| must shrink monotonically along the sequence and agree with the
// leading asymptotic term `predicted` at the last few points.
void check_log_approach(VerificationReport& rep, const NamedFn& fn, double limit,
                        const std::vector<Modulus>& seq,
                        const std::function<double(const Modulus&)>& predicted, double rel_tol) {
  const std::string name = "range:" + std::string(fn.name()) + ":upper:log-approach";
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    Params p = fn.params();
    p["log10_rc"] = seq[i].log_r_comp() / std::log(10.0);
    guarded(rep, name, p, [&] {
      const double gap = std::fabs(eval_named(fn, seq[i]) - limit);
      rep.record_one_sided({name + ":shrinking", p, prev, gap, prev - gap}, 0.0);
      prev = gap;
      if (i + 3 >= seq.size()) {
        expect_rel(rep, name + ":rate", p, eval_named(fn, seq[i]) - limit, predicted(seq[i]),
                   rel_tol);
      }
    });
  }
}

std::vector<Task> prop_pro2(const SweepSpec& spec) {
  std::vector<Task> tasks;
  const std::vector<double> fine = linspace(0.005, 0.995, 200);
  for (double av : spec.a_grid) {
    tasks.push_back([&spec, av, fine] {
      VerificationReport rep;
      const SignatureParam a(av);
      const double sa = a.sin_pi_a();
      const double q = 2.0 * av * av - 2.0 * av + 1.0;
      const NamedFn f1(NamedFnId::f1, {{"a", av}});
      const NamedFn f2(NamedFnId::f2, {{"a", av}});
      const NamedFn f3(NamedFnId::f3, {{"a", av}});
      for (const NamedFn* f : {&f1, &f2, &f3}) {
        rep.merge(check_monotone(*f, fine, Direction::decreasing, kMonotoneNoise));
      }
      const double lo = 1e-7;
      const double hi = 1.0 - 1e-7;
      const double tol = spec.tolerance;
      rep.merge(check_range(f1, Endpoint::lower, kPi / (2.0 * (1.0 - av)), lo, tol));
      rep.merge(check_range(f1, Endpoint::upper, sa / (1.0 - av), hi, tol));
      rep.merge(check_range(f2, Endpoint::lower, kPi * q / (2.0 * (1.0 - av)), lo, tol));
      rep.merge(check_range(f2, Endpoint::upper, sa / (2.0 * (1.0 - av)), hi, tol));
      rep.merge(check_range(f3, Endpoint::lower, 2.0 * (1.0 - av) / q, lo, tol));
      // f3 reaches 2(1-a) only logarithmically in r': f3 - 2(1-a) is
      // 2(1-a) z/(1-z) + O(r'^2) with z = 2/(R(a) - ln r'^2).
      const double limit = 2.0 * (1.0 - av);
      check_log_approach(
          rep, f3, limit, approach_one(300),
          [&](const Modulus& m) {
            const double z = 2.0 / (a.ramanujan() - 2.0 * m.log_r_comp());
            return limit * z / (1.0 - z);
          },
          1e-6);
      try {
        rep.notes.push_back("f3 a=" + fmt(av) + ": f3(1-1e-7) - 2(1-a) = " +
                            fmt(eval_named(f3, hi) - limit));
      } catch (const std::exception&) {
      }
      return rep;
    });
  }
  return tasks;
}

// ---------------------------------------------------------------------------

std::string measured_direction(const NamedFn& fn, const std::vector<double>& grid) {
  const double first = eval_named(fn, grid.front());
  const double last = eval_named(fn, grid.back());
  if (first == last) return "constant";
  return last > first ? "increasing" : "decreasing";
}

std::vector<Task> prop_pro1(const SweepSpec& spec) {
  std::vector<Task> tasks;
  const std::vector<double> fine = linspace(0.01, 0.99, 99);
  for (double av : spec.a_grid) {
    for (double p : spec.p_grid) {
      tasks.push_back([&spec, av, p, fine] {
        VerificationReport rep;
        const SignatureParam a(av);
        const Params fp{{"a", av}, {"p", p}};
        const NamedFn f4(NamedFnId::f4, fp);
        const NamedFn f5(NamedFnId::f5, fp);
        if (p == 1.0) {
          for (double rv : fine) {
            for (const NamedFn* f : {&f4, &f5}) {
              Params pr = fp;
              pr["r"] = rv;
              guarded(rep, "range:p=1", pr, [&] {
                const double v = eval_named(*f, rv);
                rep.record_outcome({"range:" + std::string(f->name()) + ":p=1", pr, v, 0.0, -std::fabs(v)},
                                   v == 0.0);
              });
            }
          }
          return rep;
        }
        // Derivative sign of f4, f5: negative for p < 1, positive for p > 1.
        const Direction dir = p < 1.0 ? Direction::decreasing : Direction::increasing;
        for (const NamedFn* f : {&f4, &f5}) {
          rep.merge(check_monotone(*f, fine, dir, kMonotoneNoise));
          try {
            rep.notes.push_back(std::string(f->name()) + " a=" + fmt(av) + " p=" + fmt(p) +
                                ": measured " + measured_direction(*f, fine));
          } catch (const std::exception&) {
          }
        }
        const double limit0 = (1.0 - p) * 0.5 * a.ramanujan();
        const double r_lo = std::pow(1e-6, 1.0 / std::min(p, 1.0));
        rep.merge(check_range(f4, Endpoint::lower, limit0, r_lo, spec.tolerance));
        rep.merge(check_range(f5, Endpoint::lower, limit0, r_lo, spec.tolerance));
        rep.merge(check_range(f4, Endpoint::upper, 0.0, 1.0 - 1e-7, spec.tolerance));
        // mu_a(r) ~ pi^2 / (2 sin^2(pi a) (R(a) - ln r'^2)) as r -> 1.
        const double c2 = kPi * kPi / (2.0 * a.sin_pi_a() * a.sin_pi_a());
        check_log_approach(
            rep, f5, 0.0, approach_one(150),
            [&](const Modulus& m) {
              const double rx2 = -std::expm1(2.0 * p * m.log_r());
              return c2 / (a.ramanujan() - std::log(rx2)) -
                     p * c2 / (a.ramanujan() - 2.0 * m.log_r_comp());
            },
            1e-6);
        return rep;
      });
    }
  }
  return tasks;
}

// ---------------------------------------------------------------------------

std::vector<Task> prop_pro4(const SweepSpec& spec) {
  std::vector<Task> tasks;
  for (double av : spec.a_grid) {
    for (double tv : spec.t_grid) {
      tasks.push_back([&spec, av, tv] {
        VerificationReport rep;
        const SignatureParam a(av);
        const Modulus t(tv);
        for (double rv : spec.r_grid) {
          const Params p{{"a", av}, {"r", rv}, {"t", tv}};
          guarded(rep, "superadditive", p, [&] {
            const MultExponents ex = sharp_exp_mult(a, Modulus(rv), t);
            rep.record({"superadditive:m", p, ex.alpha_star, 0.0, ex.alpha_star},
                       spec.margin_guard);
            rep.record({"superadditive:mu", p, ex.gamma_star, 0.0, ex.gamma_star},
                       spec.margin_guard);
          });
        }
        rep.merge(check_monotone(NamedFn(NamedFnId::f6, {{"a", av}, {"t", tv}}), spec.r_grid,
                                 Direction::decreasing, kMonotoneNoise));
        return rep;
      });
    }
  }
  return tasks;
}

// ---------------------------------------------------------------------------

std::vector<Task> prop_pro3(const SweepSpec& spec) {
  std::vector<Task> tasks;
  const std::vector<double> Ks = logspace(-2.0, 2.0, 41);
  const std::vector<double>& rs = spec.r_grid;
  for (double av : spec.a_grid) {
    for (std::size_t j = 1; j < rs.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const double xv = rs[i];
        const double rv = rs[j];
        tasks.push_back([&spec, av, xv, rv, Ks] {
          VerificationReport rep;
          const SignatureParam a(av);
          const Params fp{{"a", av}, {"x", xv}, {"r", rv}};
          const NamedFn f7(NamedFnId::f7, fp);
          const NamedFn f8(NamedFnId::f8, fp);
          rep.merge(check_monotone(f7, Ks, Direction::decreasing, kMonotoneNoise));
          rep.merge(check_monotone(f8, Ks, Direction::decreasing, kMonotoneNoise));
          const double floor8 = mu(a, Modulus(xv)) / mu(a, Modulus(rv));
          for (double K : Ks) {
            Params p = fp;
            p["K"] = K;
            guarded(rep, "range:f7/f8", p, [&] {
              const double l7 = eval_named_log(f7, K);
              rep.record({"range:f7<1", p, l7, 0.0, -l7}, spec.margin_guard);
              const double v8 = eval_named(f8, K);
              rep.record({"range:f8>limit", p, v8, floor8, v8 - floor8}, 0.0);
            });
          }
          rep.merge(check_range(f7, Endpoint::lower, 1.0, 1e-3, spec.tolerance));
          rep.merge(check_range(f7, Endpoint::upper, 0.0, 1e3, spec.tolerance));
          // f8/limit - 1 decays like 4 sin^2(pi a) (mu(x) - mu(r)) / (pi^2 K), so the
          // limit is checked where that term is negligible, and the rate separately.
          rep.merge(check_range(f8, Endpoint::upper, floor8, kFarK, kLimitTol * floor8));
          guarded(rep, "range:f8:upper:rate", fp, [&] {
            const double sa = a.sin_pi_a();
            const double rate = 4.0 * sa * sa * (mu(a, Modulus(xv)) - mu(a, Modulus(rv))) / (kPi * kPi);
            Params p = fp;
            p["K"] = kFarK;
            expect_rel(rep, "range:f8:upper:rate", p, (eval_named(f8, kFarK) / floor8 - 1.0) * kFarK,
                       rate, 1e-2);
          });
          return rep;
        });
      }
    }
  }
  return tasks;
}

// ---------------------------------------------------------------------------

SharpnessOptions sharpness(const SweepSpec& spec) {
  return {spec.tolerance, spec.falsify_epsilon};
}

std::vector<Task> thm_mult(const SweepSpec& spec) {
  std::vector<Task> tasks;
  for (double av : spec.a_grid) {
    for (double rv : spec.r_grid) {
      tasks.push_back([&spec, av, rv] {
        VerificationReport rep;
        const SignatureParam a(av);
        for (double tv : spec.t_grid) {
          rep.merge(check_theorem_mult(a, Modulus(rv), Modulus(tv), spec.K_grid,
                                       spec.margin_guard, sharpness(spec)));
        }
        return rep;
      });
    }
  }
  return tasks;
}

std::vector<Task> thm_power(const SweepSpec& spec) {
  std::vector<Task> tasks;
  for (double av : spec.a_grid) {
    for (double rv : spec.r_grid) {
      tasks.push_back([&spec, av, rv] {
        VerificationReport rep;
        const SignatureParam a(av);
        const Modulus r(rv);
        for (double p : spec.p_grid) {
          rep.merge(check_theorem_power(a, r, p, spec.K_grid, spec.margin_guard,
                                        sharpness(spec)));
          if (p == 1.0) continue;
          const Params gp{{"a", av}, {"r", rv}, {"p", p}};
          guarded(rep, "limit:g8", gp, [&] {
            const PowerExponents ex = sharp_exp_power(a, r, p);
            const NamedFn g8(NamedFnId::g8, gp);
            rep.merge(check_range(g8, Endpoint::lower, ex.mu_based, 1e-4, kLimitTol));
            expect_near(rep, "limit:g8:K=1", gp, eval_named(g8, 1.0), ex.m_based, kLimitTol);
            rep.merge(check_range(g8, Endpoint::upper, 0.0, 1e4, kLimitTol));
          });
        }
        return rep;
      });
    }
  }
  return tasks;
}

// ---------------------------------------------------------------------------

// Scans an ascending K grid for the first sign change of fn' and refines it.
// Records that the derivative starts with sign `first_negative ? - : +`, and
// that the crossover lies in (1, inf).
void check_crossover(VerificationReport& rep, const NamedFn& fn, bool first_negative) {
  const std::string name = "crossover:" + std::string(fn.name());
  const std::vector<double> Ks = logspace(0.0, 2.0, 41);
  const auto slope = [&](double K) {
    const double h = 1e-4 * K;
    return (eval_named(fn, K + h) - eval_named(fn, K - h)) / (2.0 * h);
  };
  guarded(rep, name, fn.params(), [&] {
    double prev = slope(Ks.front());
    Params p = fn.params();
    p["K"] = Ks.front();
    rep.record_outcome({name + ":initial-sign", p, prev, 0.0, first_negative ? -prev : prev},
                       first_negative ? prev < 0.0 : prev > 0.0);
    for (std::size_t i = 1; i < Ks.size(); ++i) {
      const double cur = slope(Ks[i]);
      if (std::signbit(cur) != std::signbit(prev)) {
        const double K0 = find_sign_change(fn, Ks[i - 1], Ks[i], 1e-8, SignOf::derivative);
        p["K"] = K0;
        rep.record_outcome({name, p, K0, 1.0, K0 - 1.0}, K0 > 1.0);
        return;
      }
      prev = cur;
    }
    rep.record_outcome({name + ":not-found", p, kNaN, kNaN, kNaN}, false);
  });
}

std::vector<Task> thm_g_monotone(const SweepSpec& spec) {
  std::vector<Task> tasks;
  const std::vector<double> below = logspace(-3.0, 0.0, 31);
  const std::vector<double> above = logspace(0.0, 3.0, 31);
  const std::vector<double>& rs = spec.r_grid;
  const std::vector<double>& ts = spec.t_grid;
  const auto mono = [](VerificationReport& rep, NamedFnId id, Params params,
                       const std::vector<double>& grid, Direction dir) {
    rep.merge(check_monotone(NamedFn(id, std::move(params)), grid, dir, kMonotoneNoise));
  };
  using enum Direction;
  for (double av : spec.a_grid) {
    for (double rv : rs) {
      for (double tv : ts) {
        tasks.push_back([=, &spec] {
          VerificationReport rep;
          const SignatureParam a(av);
          const Params base{{"a", av}, {"r", rv}, {"t", tv}};
          const MultExponents ex = sharp_exp_mult(a, Modulus(rv), Modulus(tv));
          const auto with = [&](const char* key, double v) {
            Params p = base;
            p[key] = v;
            return p;
          };
          mono(rep, NamedFnId::g1, with("lambda", ex.alpha_star), below, increasing);
          mono(rep, NamedFnId::g1, with("lambda", ex.alpha_star), above, decreasing);
          mono(rep, NamedFnId::g1, with("lambda", ex.gamma_star), below, decreasing);
          mono(rep, NamedFnId::g2, with("tau", ex.alpha_star), below, increasing);
          mono(rep, NamedFnId::g2, with("tau", ex.alpha_star), above, decreasing);
          mono(rep, NamedFnId::g2, with("tau", ex.gamma_star), above, increasing);
          const NamedFn g3(NamedFnId::g3, base);
          rep.merge(check_range(g3, Endpoint::lower, ex.gamma_star, 1e-4, spec.tolerance));
          guarded(rep, "limit:g3:K=1", base, [&] {
            expect_near(rep, "limit:g3:K=1", base, eval_named(g3, 1.0), ex.alpha_star,
                        spec.tolerance);
          });
          rep.merge(check_range(g3, Endpoint::upper, 0.0, 1e4, spec.tolerance));
          check_crossover(rep, g3, true);
          return rep;
        });
      }
    }
    for (double rv : rs) {
      for (double p : spec.p_grid) {
        if (p == 1.0) continue;
        tasks.push_back([=] {
          VerificationReport rep;
          const SignatureParam a(av);
          const Params base{{"a", av}, {"r", rv}, {"p", p}};
          const PowerExponents ex = sharp_exp_power(a, Modulus(rv), p);
          const auto with = [&](const char* key, double v) {
            Params q = base;
            q[key] = v;
            return q;
          };
          if (p < 1.0) {
            mono(rep, NamedFnId::g6, with("xi", ex.mu_based), below, increasing);
            mono(rep, NamedFnId::g6, with("xi", ex.m_based), below, decreasing);
            mono(rep, NamedFnId::g6, with("xi", ex.m_based), above, increasing);
            mono(rep, NamedFnId::g7, with("rho", ex.m_based), below, decreasing);
            mono(rep, NamedFnId::g7, with("rho", ex.m_based), above, increasing);
            mono(rep, NamedFnId::g7, with("rho", ex.mu_based), above, decreasing);
          } else {
            mono(rep, NamedFnId::g6, with("xi", ex.m_based), below, increasing);
            mono(rep, NamedFnId::g6, with("xi", ex.mu_based), below, decreasing);
            mono(rep, NamedFnId::g6, with("xi", ex.m_based), above, decreasing);
            mono(rep, NamedFnId::g7, with("rho", ex.m_based), below, increasing);
            mono(rep, NamedFnId::g7, with("rho", ex.mu_based), above, increasing);
            mono(rep, NamedFnId::g7, with("rho", ex.m_based), above, decreasing);
          }
          // g8 falls then rises for p > 1 and rises then falls for p < 1.
          check_crossover(rep, NamedFn(NamedFnId::g8, base), p > 1.0);
          return rep;
        });
      }
    }
  }
  return tasks;
}

std::vector<Task> build(const SweepSpec& spec) {
  switch (spec.suite) {
    case Suite::identities:
      return identities(spec);
    case Suite::derivatives:
      return derivatives(spec);
    case Suite::asymptotics:
      return asymptotics(spec);
    case Suite::prop_pro2:
      return prop_pro2(spec);
    case Suite::prop_pro1:
      return prop_pro1(spec);
    case Suite::prop_pro4:
      return prop_pro4(spec);
    case Suite::prop_pro3:
      return prop_pro3(spec);
    case Suite::thm_mult:
      return thm_mult(spec);
    case Suite::thm_power:
      return thm_power(spec);
    case Suite::thm_g_monotone:
      return thm_g_monotone(spec);
  }
  return {};
}

void require_grid(const std::vector<double>& grid, const char* name, double lo, double hi,
                  bool lo_open, bool hi_open) {
  if (grid.empty()) throw DomainError(std::string(name) + " grid is empty");
  for (double v : grid) {
    const bool ok = std::isfinite(v) && (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
    if (!ok) {
      throw DomainError(std::string(name) + " grid value " + fmt(v) + " is outside its domain");
    }
  }
}

}  // namespace

std::string_view to_string(Suite s) {
  for (const auto& e : kSuites) {
    if (e.suite == s) return e.name;
  }
  return "unknown";
}

std::optional<Suite> suite_from_string(std::string_view name) {
  for (const auto& e : kSuites) {
    if (e.name == name) return e.suite;
  }
  return std::nullopt;
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> v = [] {
    std::vector<Suite> out;
    for (const auto& e : kSuites) out.push_back(e.suite);
    return out;
  }();
  return v;
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> out;
  if (count == 1) return {start};
  for (std::size_t i = 0; i < count; ++i) {
    // Interpolate from both ends so that both endpoints are exact.
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(i + 1 == count ? stop : start + (stop - start) * f);
  }
  return out;
}

std::vector<double> logspace(double log10_start, double log10_stop, std::size_t count) {
  std::vector<double> out = linspace(log10_start, log10_stop, count);
  for (double& v : out) v = std::pow(10.0, v);
  return out;
}

SweepSpec SweepSpec::defaults(Suite suite, int density) {
  if (density < 2) throw DomainError("grid density must be at least 2");
  SweepSpec s;
  s.suite = suite;
  s.a_grid = {0.1, 0.25, 1.0 / 3.0, 0.5};
  s.r_grid = linspace(0.05, 0.95, static_cast<std::size_t>(density));
  s.t_grid = s.r_grid;
  s.K_grid = {1.0 + 1e-6, 1.1, 1.5, 2.0, 5.0, 10.0, 100.0};
  s.p_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  switch (suite) {
    case Suite::identities:
      s.K_grid = {0.1, 0.5, 1.0, 2.0, 10.0};
      s.tolerance = 1e-9;
      break;
    case Suite::derivatives:
      s.K_grid = {0.1, 0.5, 2.0, 10.0};
      s.tolerance = 1e-6;
      break;
    case Suite::asymptotics:
    case Suite::prop_pro2:
    case Suite::prop_pro1:
      s.tolerance = 1e-5;
      break;
    case Suite::prop_pro4:
      s.tolerance = 1e-11;
      break;
    case Suite::prop_pro3:
    case Suite::thm_g_monotone:
      s.tolerance = 1e-3;
      break;
    case Suite::thm_mult:
    case Suite::thm_power:
      s.tolerance = 1e-4;
      break;
  }
  return s;
}

void SweepSpec::validate() const {
  require_grid(a_grid, "a", 0.0, 0.5, true, false);
  require_grid(r_grid, "r", 0.0, 1.0, true, true);
  require_grid(t_grid, "t", 0.0, 1.0, true, true);
  const bool bounds = suite == Suite::thm_mult || suite == Suite::thm_power;
  require_grid(K_grid, "K", bounds ? 1.0 : 0.0, std::numeric_limits<double>::infinity(), !bounds,
               true);
  require_grid(p_grid, "p", 0.0, std::numeric_limits<double>::infinity(), true, true);
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (!(margin_guard >= 0.0)) throw DomainError("margin guard must be non-negative");
  if (!(falsify_epsilon >= 0.0)) throw DomainError("falsification epsilon must be non-negative");
}

void to_json(nlohmann::json& j, const SweepSpec& spec) {
  j = {{"suite", std::string(to_string(spec.suite))},
       {"a_grid", spec.a_grid},
       {"r_grid", spec.r_grid},
       {"t_grid", spec.t_grid},
       {"K_grid", spec.K_grid},
       {"p_grid", spec.p_grid},
       {"tolerance", spec.tolerance},
       {"margin_guard", spec.margin_guard},
       {"falsify_epsilon", spec.falsify_epsilon}};
}

VerificationReport run_suite(const SweepSpec& spec) {
  spec.validate();
  const std::vector<Task> tasks = build(spec);
  const auto parts = detail::parallel_map<VerificationReport>(
      tasks.size(), spec.threads, [&](std::size_t i) {
        try {
          return tasks[i]();
        } catch (const std::exception& e) {
          VerificationReport rep;
          rep.record_outcome({std::string("error: ") + e.what(), {}, kNaN, kNaN, kNaN}, false);
          return rep;
        }
      });
  VerificationReport rep;
  for (const auto& part : parts) rep.merge(part);
  rep.suite = std::string(to_string(spec.suite));
  rep.spec = spec;
  rep.library_version = library_version();
  return rep;
}

}  // namespace hpd
