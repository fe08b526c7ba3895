#include "opdomain/report.hpp"

#include <sstream>

namespace opdomain::report {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict Verdict::pass(std::string cond, double value, std::string detail) {
  return {std::move(cond), Outcome::Pass, value, std::move(detail), std::nullopt};
}

Verdict Verdict::fail(std::string cond, double value, std::string detail,
                      std::optional<Witness> w) {
  return {std::move(cond), Outcome::Fail, value, std::move(detail), w};
}

Verdict Verdict::inconclusive(std::string cond, double value, std::string detail) {
  return {std::move(cond), Outcome::Inconclusive, value, std::move(detail), std::nullopt};
}

Outcome combine(const std::vector<Verdict>& vs) {
  Outcome out = Outcome::Pass;
  for (const auto& v : vs) {
    if (v.outcome == Outcome::Fail) return Outcome::Fail;
    if (v.outcome == Outcome::Inconclusive) out = Outcome::Inconclusive;
  }
  return out;
}

void CheckReport::finalize(const std::string& conclusion_on_pass) {
  overall = combine(verdicts);
  switch (overall) {
    case Outcome::Pass: conclusion = conclusion_on_pass + " — hypotheses certified"; break;
    case Outcome::Fail: conclusion = conclusion_on_pass + " — hypothesis violated"; break;
    case Outcome::Inconclusive:
      conclusion = conclusion_on_pass + " — evidence inconclusive";
      break;
  }
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j{{"condition", v.condition},
                   {"outcome", to_string(v.outcome)},
                   {"value", v.value},
                   {"detail", v.detail}};
  if (v.witness) j["witness"] = {{"k", v.witness->k}, {"l", v.witness->l}};
  return j;
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : r.curves) curves.push_back(c.name);
  return nlohmann::json{{"job", r.job_echo},
                        {"verdicts", verdicts},
                        {"curves", curves},
                        {"conclusion", r.conclusion},
                        {"overall", to_string(r.overall)},
                        {"tool_version", r.tool_version},
                        {"timestamp", nullptr}};
}

std::string curve_csv(const Curve& c) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < c.columns.size(); ++i) {
    if (i) os << ',';
    os << c.columns[i];
  }
  os << '\n';
  for (const auto& row : c.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace opdomain::report
