#include "hpd/report.hpp"

#include <algorithm>
#include <cmath>

namespace hpd {

namespace {

// JSON has no NaN or infinity; they travel as null and as signed strings.
nlohmann::json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    return j.get<std::string>() == "-inf" ? -std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::infinity();
  }
  return j.get<double>();
}

}  // namespace

const char* library_version() { return HPD_VERSION; }

void VerificationReport::record(CheckRecord rec, double margin_guard) {
  ++total_checks;
  if (!std::isnan(rec.margin)) min_margin = std::min(min_margin, rec.margin);
  if (rec.margin >= margin_guard) return;
  if (rec.margin > -margin_guard) {
    indeterminate.push_back(std::move(rec));
  } else {
    failures.push_back(std::move(rec));
  }
}

void VerificationReport::record_one_sided(CheckRecord rec, double noise) {
  ++total_checks;
  if (!std::isnan(rec.margin)) min_margin = std::min(min_margin, rec.margin);
  if (rec.margin >= 0.0) return;
  if (rec.margin >= -noise) {
    indeterminate.push_back(std::move(rec));
  } else {
    failures.push_back(std::move(rec));
  }
}

void VerificationReport::record_outcome(CheckRecord rec, bool ok) {
  ++total_checks;
  if (!std::isnan(rec.margin)) min_margin = std::min(min_margin, rec.margin);
  if (!ok) failures.push_back(std::move(rec));
}

void VerificationReport::record_expected_violation(CheckRecord rec) {
  ++total_checks;
  expected_violations.push_back(std::move(rec));
}

void VerificationReport::merge(const VerificationReport& other) {
  total_checks += other.total_checks;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  indeterminate.insert(indeterminate.end(), other.indeterminate.begin(), other.indeterminate.end());
  expected_violations.insert(expected_violations.end(), other.expected_violations.begin(),
                             other.expected_violations.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  min_margin = std::min(min_margin, other.min_margin);
}

void to_json(nlohmann::json& j, const CheckRecord& rec) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : rec.params) params[k] = number(v);
  j = {{"check", rec.check},
       {"params", params},
       {"lhs", number(rec.lhs)},
       {"rhs", number(rec.rhs)},
       {"margin", number(rec.margin)}};
}

void from_json(const nlohmann::json& j, CheckRecord& rec) {
  rec.check = j.at("check").get<std::string>();
  rec.params.clear();
  for (const auto& [k, v] : j.at("params").items()) rec.params[k] = number_from(v);
  rec.lhs = number_from(j.at("lhs"));
  rec.rhs = number_from(j.at("rhs"));
  rec.margin = number_from(j.at("margin"));
}

void to_json(nlohmann::json& j, const VerificationReport& rep) {
  nlohmann::json expected = nlohmann::json::array();
  for (const auto& rec : rep.expected_violations) {
    nlohmann::json e = rec;
    e["status"] = "EXPECTED_VIOLATION";
    expected.push_back(std::move(e));
  }
  j = {{"suite", rep.suite},
       {"spec", rep.spec},
       {"total_checks", rep.total_checks},
       {"failures", rep.failures},
       {"indeterminate", rep.indeterminate},
       {"expected_violations", expected},
       {"notes", rep.notes},
       {"min_margin", number(rep.min_margin)},
       {"elapsed_ms", rep.elapsed_ms},
       {"library_version", rep.library_version}};
}

void from_json(const nlohmann::json& j, VerificationReport& rep) {
  rep.suite = j.at("suite").get<std::string>();
  rep.spec = j.at("spec");
  rep.total_checks = j.at("total_checks").get<std::size_t>();
  rep.failures = j.at("failures").get<std::vector<CheckRecord>>();
  rep.indeterminate = j.at("indeterminate").get<std::vector<CheckRecord>>();
  rep.expected_violations = j.at("expected_violations").get<std::vector<CheckRecord>>();
  rep.notes = j.value("notes", std::vector<std::string>{});
  rep.min_margin = number_from(j.at("min_margin"));
  rep.elapsed_ms = j.at("elapsed_ms").get<double>();
  rep.library_version = j.at("library_version").get<std::string>();
}

}  // namespace hpd
