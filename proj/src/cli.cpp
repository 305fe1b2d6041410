#include "hpd/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hpd/distortion.hpp"
#include "hpd/elliptic.hpp"
#include "hpd/errors.hpp"
#include "hpd/format.hpp"
#include "hpd/report.hpp"
#include "hpd/special.hpp"
#include "hpd/verifier.hpp"

namespace hpd {

namespace {

using Params = std::map<std::string, double>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kParamNames = {"a",      "r",   "t",  "K",   "p",  "y",   "x",
                                              "b",      "c",   "lambda", "tau", "xi", "rho"};

struct Settings {
  double precision = 1e-14;
  int max_iter = SolverOptions{}.max_iter;
};

struct Value {
  double value;
  double err;
};

// Built-in functions and the parameters they take.
const std::map<std::string, std::vector<std::string>>& builtin_params() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"K", {"a", "r"}},       {"E", {"a", "r"}},        {"mu", {"a", "r"}},
      {"m", {"a", "r"}},       {"mu-inv", {"a", "y"}},   {"phi", {"a", "K", "r"}},
      {"R", {"a"}},            {"hyp2f1", {"a", "b", "c", "x"}},
      {"dK_dr", {"a", "r"}},   {"dE_dr", {"a", "r"}},    {"dmu_dr", {"a", "r"}},
      {"dm_dr", {"a", "r"}},   {"dphi_dK", {"a", "K", "r"}},
  };
  return table;
}

std::vector<std::string> params_of(const std::string& fn) {
  const auto& table = builtin_params();
  if (auto it = table.find(fn); it != table.end()) return it->second;
  if (auto id = named_fn_from_string(fn)) {
    std::vector<std::string> names = required_params(*id);
    names.push_back(free_variable(*id) == FreeVariable::r ? "r" : "K");
    return names;
  }
  std::string known;
  for (const auto& [name, _] : table) known += name + ", ";
  for (NamedFnId id : all_named_fns()) known += std::string(to_string(id)) + ", ";
  known.resize(known.size() - 2);
  throw DomainError("unknown function '" + fn + "' (expected one of " + known + ")");
}

void require_exact_params(const std::string& fn, const Params& params) {
  const std::vector<std::string> need = params_of(fn);
  for (const auto& name : need) {
    if (!params.count(name)) throw DomainError(fn + " requires --" + name);
  }
  for (const auto& [name, _] : params) {
    if (std::find(need.begin(), need.end(), name) == need.end()) {
      throw DomainError(fn + " does not take --" + name);
    }
  }
}

SolverOptions solver_options(const Settings& s) {
  SolverOptions opts;
  opts.tol = s.precision;
  opts.max_iter = s.max_iter;
  return opts;
}

double rel_err(const EvalResult& res) {
  return res.value != 0.0 ? res.abs_err_estimate / std::fabs(res.value) : res.abs_err_estimate;
}

// Error of a root s of mu_a(s) = y, transported through the slope of mu_a.
double root_err(const SignatureParam& a, const Modulus& s, double y) {
  if (!(s.r() > 0.0 && s.r() < 1.0)) return kNaN;
  return std::fabs(mu(a, s) - y) / std::fabs(dmu_dr(a, s));
}

Value evaluate(const std::string& fn, const Params& p, const Settings& s) {
  require_exact_params(fn, p);
  if (fn == "hyp2f1") {
    const HypergeomParams hp{p.at("a"), p.at("b"), p.at("c"), p.at("x")};
    HypergeomOptions opts;
    opts.max_terms = std::max<std::size_t>(opts.max_terms, static_cast<std::size_t>(s.max_iter));
    const EvalResult res = hyp2f1(hp, s.precision, opts);
    return {res.value, res.abs_err_estimate};
  }
  if (auto id = named_fn_from_string(fn)) {
    Params fixed = p;
    const std::string free = free_variable(*id) == FreeVariable::r ? "r" : "K";
    const double v = fixed.at(free);
    fixed.erase(free);
    return {eval_named(NamedFn(*id, fixed), v), kNaN};
  }

  const SignatureParam a(p.at("a"));
  if (fn == "R") {
    const double R = ramanujan_R(a);
    return {R, 1e-15 * std::max(1.0, std::fabs(R))};
  }
  if (fn == "mu-inv") {
    const double y = p.at("y");
    const Modulus root = mu_inv(a, y, solver_options(s));
    return {root.r(), root_err(a, root, y)};
  }

  const Modulus m(p.at("r"));
  if (fn == "K" || fn == "E") {
    const EvalResult res = fn == "K" ? ellint_K(a, m, s.precision) : ellint_E(a, m, s.precision);
    return {res.value, res.abs_err_estimate};
  }
  if (fn == "mu" || fn == "m") {
    const EvalResult k = ellint_K(a, m, s.precision);
    const EvalResult kc = ellint_K(a, m.complement(), s.precision);
    const double v = fn == "mu" ? mu(a, m) : m_fn(a, m);
    return {v, std::fabs(v) * (rel_err(k) + rel_err(kc))};
  }
  if (fn == "phi") {
    const DistortionCoeff K(p.at("K"));
    const Modulus img = phi(a, K, m, solver_options(s));
    const double err = m.r() > 0.0 && m.r() < 1.0 ? root_err(a, img, mu(a, m) / K.value()) : 0.0;
    return {img.r(), err};
  }
  if (fn == "dK_dr") return {dK_dr(a, m), kNaN};
  if (fn == "dE_dr") return {dE_dr(a, m), kNaN};
  if (fn == "dmu_dr") return {dmu_dr(a, m), kNaN};
  if (fn == "dm_dr") return {dm_dr(a, m), kNaN};
  // dphi_dK
  return {dphi_dK(a, DistortionCoeff(p.at("K")), m), kNaN};
}

// Writes to the --out file when one is given, else to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}

  std::ostream& stream() { return buf_; }

  void flush() {
    if (path_.empty()) {
      fallback_ << buf_.str();
      return;
    }
    std::ofstream file(path_, std::ios::binary);
    if (!file) throw DomainError("cannot open output file '" + path_ + "'");
    file << buf_.str();
    if (!file) throw DomainError("cannot write output file '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ostream& fallback_;
  std::ostringstream buf_;
};

nlohmann::json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

// start:stop:count, endpoints inclusive.
std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw DomainError("range must be start:stop:count, got '" + text + "'");
  const double start = parse_double(parts[0]);
  const double stop = parse_double(parts[1]);
  const double count = parse_double(parts[2]);
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw DomainError("range endpoints must be finite in '" + text + "'");
  }
  if (!(count >= 1.0) || count != std::floor(count) || count > 1e7) {
    throw DomainError("range count must be a positive integer in '" + text + "'");
  }
  if (count == 1.0 && start != stop) {
    throw DomainError("a one-point range needs start == stop in '" + text + "'");
  }
  return linspace(start, stop, static_cast<std::size_t>(count));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_double(part));
  if (out.empty()) throw DomainError("empty grid list");
  return out;
}

struct ParamFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App& app) {
    for (const auto& name : kParamNames) {
      options[name] = app.add_option("--" + name, values[name], "value of parameter " + name);
    }
  }

  Params bound() const {
    Params out;
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0) out[name] = parse_double(values.at(name));
    }
    return out;
  }
};

void check_precision(double precision) {
  if (!(precision >= 1e-14 && precision <= 1e-4)) {
    throw DomainError("--precision must lie in [1e-14, 1e-4], got " + format_double(precision));
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized elliptic integrals, distortion functions and their inequalities", "hpd"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(library_version()));

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate one function at one point");
  std::string eval_fn;
  std::string eval_format = "text";
  std::string eval_out;
  std::string eval_precision = "1e-14";
  int eval_max_iter = SolverOptions{}.max_iter;
  ParamFlags eval_params;
  eval->add_option("--fn", eval_fn, "Function name")->required();
  eval->add_option("--precision", eval_precision, "Requested tolerance in [1e-14, 1e-4]");
  eval->add_option("--max-iter", eval_max_iter, "Iteration cap of the root finders")
      ->check(CLI::PositiveNumber);
  eval->add_option("--format", eval_format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  eval->add_option("--out", eval_out, "Write output to this file");
  eval_params.attach(*eval);

  // solve-modular
  auto* solve = app.add_subcommand("solve-modular", "Solve mu_a(s) = p mu_a(r) for s");
  std::string solve_format = "text";
  std::string solve_out;
  std::string solve_precision = "1e-9";
  int solve_max_iter = SolverOptions{}.max_iter;
  std::string solve_degree;
  ParamFlags solve_params;
  solve->add_option("--degree", solve_degree, "Degree p of the modular equation")->required();
  solve->add_option("--precision", solve_precision, "Residual tolerance in [1e-14, 1e-4]");
  solve->add_option("--max-iter", solve_max_iter, "Iteration cap of the root finder")
      ->check(CLI::PositiveNumber);
  solve->add_option("--format", solve_format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  solve->add_option("--out", solve_out, "Write output to this file");
  solve_params.attach(*solve);

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite and emit a JSON report");
  std::string suite_name;
  std::string verify_out;
  int density = 19;
  std::string falsify_epsilon;
  std::string tolerance;
  unsigned threads = 0;
  bool timing = false;
  std::map<std::string, std::string> grid_text;
  std::map<std::string, CLI::Option*> grid_opts;
  std::string suite_names = "all";
  for (Suite s : all_suites()) suite_names += ", " + std::string(to_string(s));
  verify->add_option("--suite", suite_name, "Suite name or 'all' (" + suite_names + ")")
      ->required();
  verify->add_option("--out", verify_out, "Write the report to this file");
  verify->add_option("--grid-density", density, "Points per r and t grid");
  verify->add_option("--falsify-epsilon", falsify_epsilon, "Exponent perturbation of sharpness probes");
  verify->add_option("--tolerance", tolerance, "Override the suite tolerance");
  verify->add_option("--threads", threads, "Worker threads, 0 for all cores");
  verify->add_flag("--timing", timing, "Record elapsed_ms (makes the report non-reproducible)");
  for (const std::string g : {"a", "r", "t", "K", "p"}) {
    grid_opts[g] = verify->add_option("--" + g + "-grid", grid_text[g], "Comma list replacing the " + g + " grid");
  }

  // table
  auto* table = app.add_subcommand("table", "Tabulate a function over one parameter range");
  std::string table_fn;
  std::string table_format = "csv";
  std::string table_out;
  std::string table_precision = "1e-14";
  int table_max_iter = SolverOptions{}.max_iter;
  ParamFlags table_params;
  std::map<std::string, std::string> range_text;
  std::map<std::string, CLI::Option*> range_opts;
  table->add_option("--fn", table_fn, "Function name")->required();
  table->add_option("--precision", table_precision, "Requested tolerance in [1e-14, 1e-4]");
  table->add_option("--max-iter", table_max_iter, "Iteration cap of the root finders")
      ->check(CLI::PositiveNumber);
  table->add_option("--format", table_format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  table->add_option("--out", table_out, "Write output to this file");
  table_params.attach(*table);
  for (const auto& name : kParamNames) {
    range_opts[name] = table->add_option("--" + name + "-range", range_text[name],
                                         "Sweep " + name + " over start:stop:count");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eval->parsed()) {
      Settings s{parse_double(eval_precision), eval_max_iter};
      check_precision(s.precision);
      const Params p = eval_params.bound();
      const Value v = evaluate(eval_fn, p, s);
      Sink sink(eval_out, out);
      auto& os = sink.stream();
      if (eval_format == "json") {
        nlohmann::json j = {{"fn", eval_fn}, {"value", json_number(v.value)},
                            {"err_estimate", json_number(v.err)}};
        nlohmann::json params = nlohmann::json::object();
        for (const auto& [k, x] : p) params[k] = json_number(x);
        j["params"] = params;
        os << j.dump(2) << '\n';
      } else if (eval_format == "csv") {
        os << "value,err_estimate\n" << format_double(v.value) << ',' << format_double(v.err) << '\n';
      } else {
        os << format_double(v.value) << '\n' << "err_estimate: " << format_double(v.err) << '\n';
      }
      sink.flush();
      return kExitOk;
    }

    if (solve->parsed()) {
      const double precision = parse_double(solve_precision);
      check_precision(precision);
      const double degree = parse_double(solve_degree);
      Params p = solve_params.bound();
      for (const auto& name : {"a", "r"}) {
        if (!p.count(name)) throw DomainError(std::string("solve-modular requires --") + name);
      }
      for (const auto& [name, _] : p) {
        if (name != "a" && name != "r") throw DomainError("solve-modular does not take --" + name);
      }
      SolverOptions opts;
      opts.tol = std::min(opts.tol, precision);
      opts.max_iter = solve_max_iter;
      const ModularSolution sol =
          solve_modular(SignatureParam(p.at("a")), degree, Modulus(p.at("r")), precision, opts);
      Sink sink(solve_out, out);
      auto& os = sink.stream();
      if (solve_format == "json") {
        nlohmann::json j = {{"a", p.at("a")},
                            {"degree", degree},
                            {"r", p.at("r")},
                            {"s", json_number(sol.s.r())},
                            {"residual", json_number(sol.residual)},
                            {"iterations", sol.iterations}};
        os << j.dump(2) << '\n';
      } else if (solve_format == "csv") {
        os << "s,residual,iterations\n"
           << format_double(sol.s.r()) << ',' << format_double(sol.residual) << ','
           << sol.iterations << '\n';
      } else {
        os << "s = " << format_double(sol.s.r()) << '\n'
           << "residual = " << format_double(sol.residual) << '\n'
           << "iterations = " << sol.iterations << '\n';
      }
      sink.flush();
      return kExitOk;
    }

    if (verify->parsed()) {
      if (density < 2) throw DomainError("--grid-density must be at least 2");
      std::vector<Suite> suites;
      if (suite_name == "all") {
        suites = all_suites();
      } else if (auto s = suite_from_string(suite_name)) {
        suites = {*s};
      } else {
        throw DomainError("unknown suite '" + suite_name + "' (expected " + suite_names + ")");
      }

      std::vector<SweepSpec> specs;
      for (Suite s : suites) {
        SweepSpec spec = SweepSpec::defaults(s, density);
        if (!falsify_epsilon.empty()) spec.falsify_epsilon = parse_double(falsify_epsilon);
        if (!tolerance.empty()) spec.tolerance = parse_double(tolerance);
        spec.threads = threads;
        if (grid_opts["a"]->count()) spec.a_grid = parse_list(grid_text["a"]);
        if (grid_opts["r"]->count()) spec.r_grid = parse_list(grid_text["r"]);
        if (grid_opts["t"]->count()) spec.t_grid = parse_list(grid_text["t"]);
        if (grid_opts["K"]->count()) spec.K_grid = parse_list(grid_text["K"]);
        if (grid_opts["p"]->count()) spec.p_grid = parse_list(grid_text["p"]);
        spec.validate();
        specs.push_back(std::move(spec));
      }

      VerificationReport report;
      report.library_version = library_version();
      const auto t0 = std::chrono::steady_clock::now();
      if (specs.size() == 1) {
        report = run_suite(specs.front());
      } else {
        report.suite = "all";
        report.spec = nlohmann::json::array();
        for (const auto& spec : specs) {
          const VerificationReport part = run_suite(spec);
          report.spec.push_back(part.spec);
          report.merge(part);
          err << to_string(spec.suite) << ": " << part.total_checks << " checks, "
              << part.failures.size() << " failures\n";
        }
      }
      const auto t1 = std::chrono::steady_clock::now();
      report.elapsed_ms =
          timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;

      Sink sink(verify_out, out);
      sink.stream() << nlohmann::json(report).dump(2) << '\n';
      sink.flush();
      err << report.suite << ": " << report.total_checks << " checks, " << report.failures.size()
          << " failures, " << report.indeterminate.size() << " indeterminate, "
          << report.expected_violations.size() << " expected violations\n";
      return report.passed() ? kExitOk : kExitVerificationFailed;
    }

    // table
    Settings s{parse_double(table_precision), table_max_iter};
    check_precision(s.precision);
    std::string swept;
    for (const auto& [name, opt] : range_opts) {
      if (opt->count() == 0) continue;
      if (!swept.empty()) throw DomainError("table sweeps exactly one --<param>-range");
      swept = name;
    }
    if (swept.empty()) throw DomainError("table requires one --<param>-range start:stop:count");
    Params p = table_params.bound();
    if (p.count(swept)) throw DomainError("--" + swept + " is both fixed and swept");
    const std::vector<double> xs = parse_range(range_text[swept]);

    std::vector<Value> rows;
    rows.reserve(xs.size());
    for (double x : xs) {
      p[swept] = x;
      rows.push_back(evaluate(table_fn, p, s));
    }
    p.erase(swept);

    Sink sink(table_out, out);
    auto& os = sink.stream();
    if (table_format == "json") {
      nlohmann::json fixed = nlohmann::json::object();
      for (const auto& [k, x] : p) fixed[k] = json_number(x);
      nlohmann::json j = {{"fn", table_fn}, {"param", swept}, {"params", fixed},
                          {"rows", nlohmann::json::array()}};
      for (std::size_t i = 0; i < xs.size(); ++i) {
        j["rows"].push_back({{swept, json_number(xs[i])},
                             {"value", json_number(rows[i].value)},
                             {"err_estimate", json_number(rows[i].err)}});
      }
      os << j.dump(2) << '\n';
    } else {
      const char sep = table_format == "csv" ? ',' : '\t';
      os << swept << sep << "value" << sep << "err_estimate\n";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        os << format_double(xs[i]) << sep << format_double(rows[i].value) << sep
           << format_double(rows[i].err) << '\n';
      }
    }
    sink.flush();
    return kExitOk;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    // DomainError, PoleError, malformed numbers and I/O failures.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace hpd
