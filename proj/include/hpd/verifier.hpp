#pragma once

// Numerical verification of the monotonicity, range and distortion
// inequalities satisfied by the generalized elliptic integrals.
//
// Every comparison is recorded as a CheckRecord whose margin is positive when
// the claimed relation holds. Inequalities between products of phi values
// are compared in log form, so the margins stay meaningful when a modulus
// sits at 1e-300 or 1 - 1e-17.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hpd/distortion.hpp"
#include "hpd/elliptic.hpp"
#include "hpd/report.hpp"
#include "hpd/special.hpp"

namespace hpd {

enum class NamedFnId { f1, f2, f3, f4, f5, f6, f7, f8, f9, f10, f11, g1, g2, g3, g6, g7, g8 };

enum class FreeVariable { r, K };

std::string_view to_string(NamedFnId id);
std::optional<NamedFnId> named_fn_from_string(std::string_view name);
const std::vector<NamedFnId>& all_named_fns();

// Fixed parameters each function needs, by their CLI names
// (a, p, t, x, r, lambda, tau, xi, rho).
std::vector<std::string> required_params(NamedFnId id);
FreeVariable free_variable(NamedFnId id);

// A named function with its fixed parameters bound. Construction rejects
// missing or unknown parameters and values outside the legal domain
// (0 < a <= 1/2, p > 0, r, t, x in (0, 1), x < r for f7 and f8).
class NamedFn {
 public:
  NamedFn(NamedFnId id, std::map<std::string, double> params);

  NamedFnId id() const { return id_; }
  std::string_view name() const { return to_string(id_); }
  FreeVariable free_variable() const { return hpd::free_variable(id_); }
  const std::map<std::string, double>& params() const { return params_; }
  double param(const std::string& key) const { return params_.at(key); }
  const SignatureParam& signature() const { return a_; }

  // g1, g2, g6, g7, f7, f8 are positive and are also available as logs.
  bool positive() const;

 private:
  NamedFnId id_;
  std::map<std::string, double> params_;
  SignatureParam a_;
};

// Evaluates fn at its free variable: r in (0, 1) or K in (0, inf).
double eval_named(const NamedFn& fn, double free_var);
// r-functions only; the modulus may sit closer to 0 or 1 than a double can.
double eval_named(const NamedFn& fn, const Modulus& r);
// ln fn(K) for the positive functions; avoids under- and overflow of exp.
double eval_named_log(const NamedFn& fn, double free_var);

struct MultExponents {
  double alpha_star;  // m_a(r) + m_a(t) - m_a(rt)
  double gamma_star;  // mu_a(r) + mu_a(t) - mu_a(rt)
};

struct PowerExponents {
  double m_based;   // p m_a(r) - m_a(r^p)
  double mu_based;  // p mu_a(r) - mu_a(r^p)
};

MultExponents sharp_exp_mult(const SignatureParam& a, const Modulus& r, const Modulus& t);
PowerExponents sharp_exp_power(const SignatureParam& a, const Modulus& r, double p);

enum class Direction { increasing, decreasing };
enum class Endpoint { lower, upper };
enum class SignOf { value, derivative };

std::string_view to_string(Direction d);

// Compares each adjacent pair of an ascending grid. A step in the wrong
// direction by more than strict_tol * max(1, |f_i|, |f_i+1|) fails; a smaller
// one is indeterminate. Positive functions are compared through their logs.
VerificationReport check_monotone(const NamedFn& fn, std::span<const double> grid, Direction dir,
                                  double strict_tol);

// Records |fn(approach) - expected| <= tol. Evaluation errors become failures.
VerificationReport check_range(const NamedFn& fn, Endpoint endpoint, double expected,
                               double approach, double tol);

struct SharpnessOptions {
  double lhopital_tol = 1e-4;
  // Exponent perturbation of the falsification probes; 0 disables them.
  double falsify_epsilon = 1e-3;
};

// Multiplicative distortion bounds on phi_K(r) phi_K(t) / phi_K(rt) with the
// sharp exponents. K == 1 in the grid is checked as an equality.
VerificationReport check_theorem_mult(const SignatureParam& a, const Modulus& r, const Modulus& t,
                                      std::span<const double> K_grid, double margin_guard,
                                      const SharpnessOptions& sharp = {});

// Power distortion bounds on phi_K(r)^p / phi_K(r^p); the direction of each
// bound depends on whether p <= 1. p == 1 is checked as an equality.
VerificationReport check_theorem_power(const SignatureParam& a, const Modulus& r, double p,
                                       std::span<const double> K_grid, double margin_guard,
                                       const SharpnessOptions& sharp = {});

// Bisection in ln K for a sign change of fn (or of its K-derivative, by
// central differences) on [K_lo, K_hi]. Stops when the bracket is narrower
// than tol * K. Throws DomainError when the endpoints have the same sign.
double find_sign_change(const NamedFn& fn, double K_lo, double K_hi, double tol,
                        SignOf what = SignOf::value);

// ---------------------------------------------------------------------------
// Sweeps

enum class Suite {
  identities,
  derivatives,
  asymptotics,
  prop_pro2,
  prop_pro1,
  prop_pro4,
  prop_pro3,
  thm_mult,
  thm_power,
  thm_g_monotone,
};

std::string_view to_string(Suite s);
std::optional<Suite> suite_from_string(std::string_view name);
const std::vector<Suite>& all_suites();

struct SweepSpec {
  Suite suite = Suite::identities;
  std::vector<double> a_grid;
  std::vector<double> r_grid;
  std::vector<double> t_grid;
  std::vector<double> K_grid;
  std::vector<double> p_grid;
  double tolerance = 1e-9;
  double margin_guard = 1e-11;
  double falsify_epsilon = 1e-3;
  // Worker threads for grid evaluation; 0 picks the hardware concurrency.
  unsigned threads = 0;

  // Default grids for a suite; r and t get `density` points on [0.05, 0.95].
  static SweepSpec defaults(Suite suite, int density = 19);

  // Throws DomainError for empty grids or values outside the suite's domain.
  void validate() const;
};

void to_json(nlohmann::json& j, const SweepSpec& spec);

// Runs a suite. Grid points are evaluated concurrently; the report lists
// records in grid order regardless of completion order.
VerificationReport run_suite(const SweepSpec& spec);

// Evenly spaced, both endpoints included.
std::vector<double> linspace(double start, double stop, std::size_t count);
std::vector<double> logspace(double log10_start, double log10_stop, std::size_t count);

}  // namespace hpd
