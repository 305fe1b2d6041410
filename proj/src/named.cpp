#include <array>
#include <cmath>
#include <set>
#include <string>

#include "hpd/errors.hpp"
#include "hpd/verifier.hpp"

namespace hpd {

namespace {

constexpr double kFourOverPiSq = 4.0 / (kPi * kPi);

struct FnInfo {
  NamedFnId id;
  std::string_view name;
  FreeVariable var;
  std::vector<std::string> params;
};

const std::vector<FnInfo>& table() {
  static const std::vector<FnInfo> t = {
      {NamedFnId::f1, "f1", FreeVariable::r, {"a"}},
      {NamedFnId::f2, "f2", FreeVariable::r, {"a"}},
      {NamedFnId::f3, "f3", FreeVariable::r, {"a"}},
      {NamedFnId::f4, "f4", FreeVariable::r, {"a", "p"}},
      {NamedFnId::f5, "f5", FreeVariable::r, {"a", "p"}},
      {NamedFnId::f6, "f6", FreeVariable::r, {"a", "t"}},
      {NamedFnId::f7, "f7", FreeVariable::K, {"a", "x", "r"}},
      {NamedFnId::f8, "f8", FreeVariable::K, {"a", "x", "r"}},
      {NamedFnId::f9, "f9", FreeVariable::r, {"a"}},
      {NamedFnId::f10, "f10", FreeVariable::r, {"a"}},
      {NamedFnId::f11, "f11", FreeVariable::r, {"a"}},
      {NamedFnId::g1, "g1", FreeVariable::K, {"a", "r", "t", "lambda"}},
      {NamedFnId::g2, "g2", FreeVariable::K, {"a", "r", "t", "tau"}},
      {NamedFnId::g3, "g3", FreeVariable::K, {"a", "r", "t"}},
      {NamedFnId::g6, "g6", FreeVariable::K, {"a", "r", "p", "xi"}},
      {NamedFnId::g7, "g7", FreeVariable::K, {"a", "r", "p", "rho"}},
      {NamedFnId::g8, "g8", FreeVariable::K, {"a", "r", "p"}},
  };
  return t;
}

const FnInfo& info(NamedFnId id) { return table()[static_cast<std::size_t>(id)]; }

double checked_a(const std::map<std::string, double>& params) {
  const auto it = params.find("a");
  if (it == params.end()) throw DomainError("missing parameter a");
  return it->second;
}

void require_unit_open(const std::string& key, double v) {
  if (!(v > 0.0 && v < 1.0)) throw DomainError("parameter " + key + " must lie in (0, 1)");
}

double K_of(const SignatureParam& a, const Modulus& m) { return ellint_K(a, m).value; }

Modulus product(const Modulus& x, const Modulus& y) {
  return Modulus::from_log(x.log_r() + y.log_r());
}

Modulus power(const Modulus& x, double p) { return Modulus::from_log(p * x.log_r()); }

Modulus phi_at(const SignatureParam& a, double K, const Modulus& m) {
  return phi(a, DistortionCoeff(K), m);
}

// 4/pi^2 * s'^2 K_a(s)^2, which tends to 1 as s -> 0 and to 0 as s -> 1.
double weight(const SignatureParam& a, const Modulus& s) {
  if (s.r_comp() == 0.0 && std::isinf(s.log_r_comp())) return 0.0;
  const double k = K_of(a, s);
  return kFourOverPiSq * std::exp(2.0 * s.log_r_comp()) * k * k;
}

double f1_at(const SignatureParam& a, const Modulus& m) {
  const double av = a.value();
  const EllipticPair ke = ellint_KE(a, m);
  const double rc2 = std::exp(2.0 * m.log_r_comp());
  return (2.0 * av - 1.0) / (1.0 - av) * rc2 * ke.K_val + 2.0 * ke.E_val;
}

double f2_at(const SignatureParam& a, const Modulus& m) {
  const double av = a.value();
  const EllipticPair ke = ellint_KE(a, m);
  const double rc2 = std::exp(2.0 * m.log_r_comp());
  return av * (2.0 * av - 1.0) / (1.0 - av) * rc2 * ke.K_val + ke.E_val;
}

double f3_at(const SignatureParam& a, const Modulus& m) {
  const EllipticCombos c = elliptic_combos(a, m);
  return c.K / c.gap_over_r2;
}

double f10_at(const SignatureParam& a, const Modulus& m) {
  const EllipticCombos c = elliptic_combos(a, m);
  return c.K - 3.0 * (1.0 - a.value()) * c.e_minus_rc2_k_over_r2;
}

double eval_r(const NamedFn& fn, const Modulus& m) {
  if (!(m.r() > 0.0 || std::isfinite(m.log_r())) || !std::isfinite(m.log_r_comp())) {
    throw DomainError(std::string(fn.name()) + " requires 0 < r < 1");
  }
  const SignatureParam& a = fn.signature();
  switch (fn.id()) {
    case NamedFnId::f1:
      return f1_at(a, m);
    case NamedFnId::f2:
      return f2_at(a, m);
    case NamedFnId::f3:
      return f3_at(a, m);
    case NamedFnId::f4: {
      const double p = fn.param("p");
      if (p == 1.0) return 0.0;
      return m_fn(a, power(m, p)) - p * m_fn(a, m);
    }
    case NamedFnId::f5: {
      const double p = fn.param("p");
      if (p == 1.0) return 0.0;
      return mu(a, power(m, p)) - p * mu(a, m);
    }
    case NamedFnId::f6: {
      const Modulus t(fn.param("t"));
      return mu(a, m) + mu(a, t) - mu(a, product(m, t));
    }
    case NamedFnId::f9: {
      const double r2 = std::exp(2.0 * m.log_r());
      return r2 * K_of(a, m.complement()) * f10_at(a, m);
    }
    case NamedFnId::f10:
      return f10_at(a, m);
    case NamedFnId::f11:
      return K_of(a, m.complement()) * f2_at(a, m) * f3_at(a, m);
    default:
      throw DomainError(std::string(fn.name()) + " is a function of K, not r");
  }
}

double log_eval_K(const NamedFn& fn, double K) {
  const SignatureParam& a = fn.signature();
  switch (fn.id()) {
    case NamedFnId::f7:
    case NamedFnId::f8: {
      const Modulus s = phi_at(a, K, Modulus(fn.param("r")));
      const Modulus y = phi_at(a, K, Modulus(fn.param("x")));
      if (fn.id() == NamedFnId::f7) {
        return 2.0 * (s.log_r_comp() - y.log_r_comp()) +
               3.0 * (std::log(K_of(a, s)) - std::log(K_of(a, y)));
      }
      // The shifted gap vanishes like r^2; divide that out before the logs.
      return 2.0 * (s.log_r() - y.log_r()) + std::log(elliptic_combos(a, s).gap_over_r2) -
             std::log(elliptic_combos(a, y).gap_over_r2);
    }
    case NamedFnId::g1:
    case NamedFnId::g2: {
      const bool inverse = fn.id() == NamedFnId::g2;
      const double k = inverse ? 1.0 / K : K;
      const Modulus r(fn.param("r"));
      const Modulus t(fn.param("t"));
      const double log_ratio = phi_at(a, k, r).log_r() + phi_at(a, k, t).log_r() -
                               phi_at(a, k, product(r, t)).log_r();
      return inverse ? log_ratio + fn.param("tau") * K : log_ratio + fn.param("lambda") / K;
    }
    case NamedFnId::g6:
    case NamedFnId::g7: {
      const bool inverse = fn.id() == NamedFnId::g7;
      const double k = inverse ? 1.0 / K : K;
      const Modulus r(fn.param("r"));
      const double p = fn.param("p");
      const double log_ratio = p * phi_at(a, k, r).log_r() - phi_at(a, k, power(r, p)).log_r();
      return inverse ? log_ratio + fn.param("rho") * K : log_ratio + fn.param("xi") / K;
    }
    default:
      throw DomainError(std::string(fn.name()) + " has no log form");
  }
}

double eval_K(const NamedFn& fn, double K) {
  const SignatureParam& a = fn.signature();
  switch (fn.id()) {
    case NamedFnId::g3: {
      const Modulus r(fn.param("r"));
      const Modulus t(fn.param("t"));
      const Modulus x = product(r, t);
      return weight(a, phi_at(a, K, r)) * mu(a, r) + weight(a, phi_at(a, K, t)) * mu(a, t) -
             weight(a, phi_at(a, K, x)) * mu(a, x);
    }
    case NamedFnId::g8: {
      const Modulus r(fn.param("r"));
      const double p = fn.param("p");
      const Modulus x = power(r, p);
      return p * mu(a, r) * weight(a, phi_at(a, K, r)) - mu(a, x) * weight(a, phi_at(a, K, x));
    }
    default:
      return std::exp(log_eval_K(fn, K));
  }
}

}  // namespace

std::string_view to_string(NamedFnId id) { return info(id).name; }

std::optional<NamedFnId> named_fn_from_string(std::string_view name) {
  for (const auto& e : table()) {
    if (e.name == name) return e.id;
  }
  return std::nullopt;
}

const std::vector<NamedFnId>& all_named_fns() {
  static const std::vector<NamedFnId> ids = [] {
    std::vector<NamedFnId> v;
    for (const auto& e : table()) v.push_back(e.id);
    return v;
  }();
  return ids;
}

std::vector<std::string> required_params(NamedFnId id) { return info(id).params; }

FreeVariable free_variable(NamedFnId id) { return info(id).var; }

NamedFn::NamedFn(NamedFnId id, std::map<std::string, double> params)
    : id_(id), params_(std::move(params)), a_(checked_a(params_)) {
  const auto& need = info(id).params;
  const std::set<std::string> wanted(need.begin(), need.end());
  for (const auto& key : need) {
    if (!params_.count(key)) {
      throw DomainError(std::string(name()) + ": missing parameter " + key);
    }
  }
  for (const auto& [key, v] : params_) {
    if (!wanted.count(key)) {
      throw DomainError(std::string(name()) + ": unexpected parameter " + key);
    }
    if (!std::isfinite(v)) throw DomainError("parameter " + key + " must be finite");
  }
  for (const char* key : {"r", "t", "x"}) {
    if (params_.count(key)) require_unit_open(key, params_.at(key));
  }
  if (params_.count("p") && !(params_.at("p") > 0.0)) {
    throw DomainError("parameter p must be positive");
  }
  if ((id == NamedFnId::f7 || id == NamedFnId::f8) && !(params_.at("x") < params_.at("r"))) {
    throw DomainError(std::string(name()) + " requires x < r");
  }
}

bool NamedFn::positive() const {
  switch (id_) {
    case NamedFnId::f7:
    case NamedFnId::f8:
    case NamedFnId::g1:
    case NamedFnId::g2:
    case NamedFnId::g6:
    case NamedFnId::g7:
      return true;
    default:
      return false;
  }
}

double eval_named(const NamedFn& fn, double free_var) {
  if (fn.free_variable() == FreeVariable::r) {
    require_unit_open("r", free_var);
    return eval_r(fn, Modulus(free_var));
  }
  if (!(free_var > 0.0) || !std::isfinite(free_var)) {
    throw DomainError(std::string(fn.name()) + " requires K in (0, inf)");
  }
  return eval_K(fn, free_var);
}

double eval_named(const NamedFn& fn, const Modulus& r) {
  if (fn.free_variable() != FreeVariable::r) {
    throw DomainError(std::string(fn.name()) + " is a function of K, not r");
  }
  return eval_r(fn, r);
}

double eval_named_log(const NamedFn& fn, double free_var) {
  if (!fn.positive()) throw DomainError(std::string(fn.name()) + " has no log form");
  if (!(free_var > 0.0) || !std::isfinite(free_var)) {
    throw DomainError(std::string(fn.name()) + " requires K in (0, inf)");
  }
  return log_eval_K(fn, free_var);
}

MultExponents sharp_exp_mult(const SignatureParam& a, const Modulus& r, const Modulus& t) {
  const Modulus x = product(r, t);
  return {m_fn(a, r) + m_fn(a, t) - m_fn(a, x), mu(a, r) + mu(a, t) - mu(a, x)};
}

PowerExponents sharp_exp_power(const SignatureParam& a, const Modulus& r, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("power p must be finite and positive");
  if (p == 1.0) return {0.0, 0.0};
  const Modulus x = power(r, p);
  return {p * m_fn(a, r) - m_fn(a, x), p * mu(a, r) - mu(a, x)};
}

}  // namespace hpd
