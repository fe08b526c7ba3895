#pragma once

// Three-valued verdicts, evidence curves, and the structured check report.
// The criteria certify hypotheses about infinite objects from finite evidence,
// so "pass" is never a proof; "inconclusive" is a first-class outcome.

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace opdomain::report {

enum class Outcome { Pass, Fail, Inconclusive };

std::string to_string(Outcome o);

struct Witness {
  long k = 0;
  long l = 0;
};

struct Verdict {
  std::string condition;  // condition label, e.g. "(h1)", "(AG)", "(M2)"
  Outcome outcome = Outcome::Inconclusive;
  double value = 0.0;     // primary numeric evidence
  std::string detail;
  std::optional<Witness> witness;

  static Verdict pass(std::string cond, double value, std::string detail = "");
  static Verdict fail(std::string cond, double value, std::string detail = "",
                      std::optional<Witness> w = std::nullopt);
  static Verdict inconclusive(std::string cond, double value, std::string detail = "");
};

// A named numeric table, exported as one CSV file per curve.
struct Curve {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CheckReport {
  nlohmann::json job_echo;
  std::vector<Verdict> verdicts;
  std::vector<Curve> curves;
  std::string conclusion;
  Outcome overall = Outcome::Inconclusive;
  std::string tool_version;

  void add(const Verdict& v) { verdicts.push_back(v); }
  void add_curve(Curve c) { curves.push_back(std::move(c)); }
  // Pass only if every verdict passes; fail dominates inconclusive.
  void finalize(const std::string& conclusion_on_pass);
};

Outcome combine(const std::vector<Verdict>& vs);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const CheckReport& r);
std::string curve_csv(const Curve& c);

}  // namespace opdomain::report
