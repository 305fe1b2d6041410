#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace hpd {

// One inequality or tolerance comparison. `margin` is positive when the
// check holds: for an inequality lhs < rhs it is rhs - lhs, for a tolerance
// check |lhs - rhs| <= tol it is tol - |lhs - rhs|.
struct CheckRecord {
  std::string check;
  std::map<std::string, double> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

struct VerificationReport {
  std::string suite;
  nlohmann::json spec = nlohmann::json::object();
  std::size_t total_checks = 0;
  std::vector<CheckRecord> failures;
  // |margin| below the margin guard: binary64 noise, not a counterexample.
  std::vector<CheckRecord> indeterminate;
  // Violations that a falsification probe was looking for.
  std::vector<CheckRecord> expected_violations;
  std::vector<std::string> notes;
  double min_margin = std::numeric_limits<double>::infinity();
  double elapsed_ms = 0.0;
  std::string library_version;

  bool passed() const { return failures.empty(); }

  // Classifies by margin: >= guard passes, (-guard, guard) is indeterminate,
  // anything lower fails. A guard of 0 makes the check strict.
  void record(CheckRecord rec, double margin_guard);
  // Non-negative margins pass, margins in [-noise, 0) are indeterminate.
  void record_one_sided(CheckRecord rec, double noise);
  // A check that passes or fails outright, independent of its margin.
  void record_outcome(CheckRecord rec, bool ok);
  void record_expected_violation(CheckRecord rec);

  // Appends the other report's records, keeping their order.
  void merge(const VerificationReport& other);
};

void to_json(nlohmann::json& j, const CheckRecord& rec);
void from_json(const nlohmann::json& j, CheckRecord& rec);
void to_json(nlohmann::json& j, const VerificationReport& rep);
void from_json(const nlohmann::json& j, VerificationReport& rep);

const char* library_version();

}  // namespace hpd
