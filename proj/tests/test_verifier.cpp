#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hpd/errors.hpp"
#include "hpd/verifier.hpp"
#include "support.hpp"

using namespace hpd;
using hpd::testing::Gen;
using hpd::testing::rel_diff;

namespace {

double eval(NamedFnId id, std::map<std::string, double> params, double at) {
  return eval_named(NamedFn(id, std::move(params)), at);
}

}  // namespace

TEST(NamedFn, Golden) {
  EXPECT_LT(rel_diff(eval(NamedFnId::f1, {{"a", 0.3}}, 0.5), 2.0286287476411569978), 1e-13);
  EXPECT_LT(rel_diff(eval(NamedFnId::f2, {{"a", 0.3}}, 0.5), 1.1572077744188685844), 1e-13);
  EXPECT_LT(rel_diff(eval(NamedFnId::f3, {{"a", 0.3}}, 0.5), 2.361799019964832617), 1e-13);
  EXPECT_LT(rel_diff(eval(NamedFnId::f4, {{"a", 0.3}, {"p", 2.0}}, 0.5), -1.0122186695072916705), 1e-13);
  EXPECT_LT(rel_diff(eval(NamedFnId::f5, {{"a", 0.3}, {"p", 2.0}}, 0.5), -1.6399482713031091155), 1e-13);
  EXPECT_LT(rel_diff(eval(NamedFnId::f6, {{"a", 0.3}, {"t", 0.7}}, 0.5), 1.5562152269054774819), 1e-13);
  const std::map<std::string, double> xr{{"a", 0.3}, {"x", 0.2}, {"r", 0.5}};
  EXPECT_LT(rel_diff(eval(NamedFnId::f7, xr, 2.0), 0.44036806815122985209), 1e-12);
  EXPECT_LT(rel_diff(eval(NamedFnId::f8, xr, 2.0), 2.0387166379285555725), 1e-12);
  EXPECT_LT(rel_diff(eval(NamedFnId::g1, {{"a", 0.3}, {"r", 0.5}, {"t", 0.7}, {"lambda", 1.0}}, 2.0),
                     1.7144947071136198295),
            1e-12);
  EXPECT_LT(rel_diff(eval(NamedFnId::g6, {{"a", 0.3}, {"r", 0.5}, {"p", 2.0}, {"xi", 1.0}}, 2.0),
                     1.7855199046198697162),
            1e-12);
  EXPECT_LT(rel_diff(eval(NamedFnId::g3, {{"a", 0.3}, {"r", 0.5}, {"t", 0.7}}, 2.0),
                     -0.31807667851798475952),
            1e-11);
}

TEST(NamedFn, Names) {
  for (NamedFnId id : all_named_fns()) {
    EXPECT_EQ(named_fn_from_string(to_string(id)), id);
  }
  EXPECT_FALSE(named_fn_from_string("f12").has_value());
  EXPECT_EQ(free_variable(NamedFnId::f1), FreeVariable::r);
  EXPECT_EQ(free_variable(NamedFnId::g8), FreeVariable::K);
}

TEST(NamedFn, ParameterValidation) {
  EXPECT_THROW(NamedFn(NamedFnId::f4, {{"a", 0.3}}), DomainError);
  EXPECT_THROW(NamedFn(NamedFnId::f1, {{"a", 0.3}, {"p", 2.0}}), DomainError);
  EXPECT_THROW(NamedFn(NamedFnId::f1, {{"a", 0.7}}), DomainError);
  EXPECT_THROW(NamedFn(NamedFnId::f7, {{"a", 0.3}, {"x", 0.6}, {"r", 0.5}}), DomainError);
  EXPECT_THROW(NamedFn(NamedFnId::f6, {{"a", 0.3}, {"t", 1.0}}), DomainError);
  EXPECT_THROW(NamedFn(NamedFnId::g6, {{"a", 0.3}, {"r", 0.5}, {"p", -1.0}, {"xi", 0.0}}), DomainError);
}

TEST(NamedFn, LogFormAgrees) {
  const NamedFn g2(NamedFnId::g2, {{"a", 0.25}, {"r", 0.4}, {"t", 0.6}, {"tau", 0.5}});
  for (double K : {0.1, 0.7, 1.0, 3.0, 20.0}) {
    EXPECT_NEAR(eval_named_log(g2, K), std::log(eval_named(g2, K)), 1e-13);
  }
}

TEST(SharpExponents, Golden) {
  const MultExponents e = sharp_exp_mult(SignatureParam(0.3), Modulus(0.5), Modulus(0.7));
  EXPECT_LT(rel_diff(e.alpha_star, 0.74347895491782036994), 1e-13);
  EXPECT_LT(rel_diff(e.gamma_star, 1.5562152269054774819), 1e-13);
}

TEST(SharpExponents, PowerOneIsZero) {
  const PowerExponents e = sharp_exp_power(SignatureParam(0.3), Modulus(0.5), 1.0);
  EXPECT_EQ(e.m_based, 0.0);
  EXPECT_EQ(e.mu_based, 0.0);
}

TEST(SharpExponents, OrderingProperty) {
  // 0 < alpha* < gamma* and alpha* < R(a)/2 on the open unit square.
  Gen g(31);
  for (int i = 0; i < 1000; ++i) {
    const SignatureParam a(g.signature());
    const MultExponents e = sharp_exp_mult(a, Modulus(g.modulus()), Modulus(g.modulus()));
    EXPECT_GT(e.alpha_star, 0.0);
    EXPECT_LT(e.alpha_star, e.gamma_star);
    EXPECT_LT(e.alpha_star, 0.5 * a.ramanujan());
  }
}

TEST(CheckMonotone, DetectsDirection) {
  const NamedFn f1(NamedFnId::f1, {{"a", 0.25}});
  const std::vector<double> grid = linspace(0.05, 0.95, 19);
  EXPECT_TRUE(check_monotone(f1, grid, Direction::decreasing, 1e-12).passed());
  const VerificationReport wrong = check_monotone(f1, grid, Direction::increasing, 1e-12);
  EXPECT_EQ(wrong.failures.size(), grid.size() - 1);
  EXPECT_EQ(wrong.total_checks, grid.size() - 1);
}

TEST(CheckRange, Endpoint) {
  // f1(0+) = pi / (2 (1 - a))
  const NamedFn f1(NamedFnId::f1, {{"a", 0.3}});
  const double lim = kPi / 1.4;
  EXPECT_TRUE(check_range(f1, Endpoint::lower, lim, 1e-8, 1e-7).passed());
  EXPECT_FALSE(check_range(f1, Endpoint::lower, lim + 1e-3, 1e-8, 1e-7).passed());
}

TEST(TheoremMult, HoldsAndProbesViolate) {
  const std::vector<double> Ks = {1.0, 1.0 + 1e-6, 1.5, 3.0, 30.0};
  const VerificationReport rep = check_theorem_mult(SignatureParam(0.3), Modulus(0.4), Modulus(0.8), Ks, 1e-11);
  EXPECT_TRUE(rep.passed()) << nlohmann::json(rep).dump();
  EXPECT_FALSE(rep.expected_violations.empty());
  SharpnessOptions off;
  off.falsify_epsilon = 0.0;
  const VerificationReport quiet =
      check_theorem_mult(SignatureParam(0.3), Modulus(0.4), Modulus(0.8), Ks, 1e-11, off);
  EXPECT_TRUE(quiet.expected_violations.empty());
}

TEST(TheoremMult, RejectsKBelowOne) {
  const std::vector<double> Ks = {0.5};
  EXPECT_THROW(check_theorem_mult(SignatureParam(0.3), Modulus(0.4), Modulus(0.8), Ks, 1e-11),
               DomainError);
}

TEST(TheoremPower, BothRegimesAndEquality) {
  const std::vector<double> Ks = {1.0 + 1e-6, 2.0, 10.0};
  for (double p : {0.25, 1.0, 3.0}) {
    const VerificationReport rep = check_theorem_power(SignatureParam(0.2), Modulus(0.6), p, Ks, 1e-11);
    EXPECT_TRUE(rep.passed()) << p;
  }
}

TEST(SignChange, G3Derivative) {
  const NamedFn g3(NamedFnId::g3, {{"a", 0.5}, {"r", 0.5}, {"t", 0.5}});
  const double K0 = find_sign_change(g3, 1.0, 100.0, 1e-8, SignOf::derivative);
  EXPECT_GT(K0, 1.0);
  const double h = 1e-3 * K0;
  EXPECT_LT(eval_named(g3, K0 - 10 * h) - eval_named(g3, K0 - 11 * h), 0.0);
  EXPECT_GT(eval_named(g3, K0 + 11 * h) - eval_named(g3, K0 + 10 * h), 0.0);
}

TEST(SignChange, SameSignBracket) {
  const NamedFn g1(NamedFnId::g1, {{"a", 0.5}, {"r", 0.5}, {"t", 0.5}, {"lambda", 0.0}});
  EXPECT_THROW(find_sign_change(g1, 1.0, 10.0, 1e-8), DomainError);
}

TEST(Grids, Spacing) {
  const std::vector<double> g = linspace(0.1, 0.9, 9);
  ASSERT_EQ(g.size(), 9u);
  EXPECT_EQ(g.front(), 0.1);
  EXPECT_EQ(g.back(), 0.9);
  const std::vector<double> l = logspace(-2, 2, 5);
  EXPECT_DOUBLE_EQ(l[0], 0.01);
  EXPECT_DOUBLE_EQ(l[4], 100.0);
}

TEST(SweepSpec, DefaultsAndValidation) {
  const SweepSpec spec = SweepSpec::defaults(Suite::identities);
  EXPECT_EQ(spec.a_grid.size(), 4u);
  EXPECT_EQ(spec.r_grid.size(), 19u);
  EXPECT_NO_THROW(spec.validate());
  SweepSpec bad = spec;
  bad.r_grid.clear();
  EXPECT_THROW(bad.validate(), DomainError);
  SweepSpec bad_a = spec;
  bad_a.a_grid = {0.7};
  EXPECT_THROW(bad_a.validate(), DomainError);
  SweepSpec bad_k = SweepSpec::defaults(Suite::thm_mult);
  bad_k.K_grid = {0.5, 2.0};
  EXPECT_THROW(bad_k.validate(), DomainError);
}

TEST(SweepSpec, SuiteNames) {
  for (Suite s : all_suites()) EXPECT_EQ(suite_from_string(to_string(s)), s);
  EXPECT_EQ(suite_from_string("prop-pro2"), Suite::prop_pro2);
  EXPECT_FALSE(suite_from_string("nope").has_value());
}

TEST(RunSuite, DeterministicAcrossThreadCounts) {
  SweepSpec spec = SweepSpec::defaults(Suite::prop_pro4, 7);
  spec.threads = 1;
  const nlohmann::json one = run_suite(spec);
  spec.threads = 4;
  const nlohmann::json four = run_suite(spec);
  EXPECT_EQ(one.dump(), four.dump());
}

TEST(RunSuite, SmallSweepsPass) {
  for (Suite s : all_suites()) {
    if (s == Suite::thm_g_monotone || s == Suite::prop_pro3) continue;  // covered by acceptance
    const VerificationReport rep = run_suite(SweepSpec::defaults(s, 5));
    EXPECT_TRUE(rep.passed()) << to_string(s) << ": " << rep.failures.size() << " failures";
    EXPECT_GT(rep.total_checks, 0u);
  }
}
