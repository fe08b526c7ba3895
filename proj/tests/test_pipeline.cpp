#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "opdomain/pipeline.hpp"

using namespace opdomain::pipeline;
using nlohmann::json;
using opdomain::core::cplx;
using opdomain::report::Outcome;

TEST_CASE("parse_cplx accepts numbers and [re, im] pairs") {
  CHECK(parse_cplx(json(2.5), "z") == cplx(2.5, 0.0));
  CHECK(parse_cplx(json::array({0, 1}), "z") == cplx(0.0, 1.0));
  CHECK_THROWS_AS(parse_cplx(json::array({1, 2, 3}), "z"), ConfigError);
  CHECK_THROWS_AS(parse_cplx(json("nope"), "z"), ConfigError);
}

TEST_CASE("config errors carry the offending field path") {
  try {
    JobConfig::parse(json{{"job", "no-such-job"}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "job");
  }
  CHECK_THROWS_AS(JobConfig::parse(json::object()), ConfigError);
  // m and modakl are mutually exclusive
  json j = example_config("jacobi_h_identity");
  j["modakl"] = {{"d", 1.0}, {"s", 0.0}, {"alpha", 3.0}};
  CHECK_THROWS_AS(JobConfig::parse(j), ConfigError);
}

TEST_CASE("parse_entry_gen rejects unknown kinds and bad tables") {
  CHECK_THROWS_AS(parse_entry_gen(json{{"kind", "mystery"}}, "operator"), ConfigError);
  CHECK_THROWS_AS(parse_entry_gen(json{{"kind", "diagonal"}}, "operator"), ConfigError);
  const auto gen = parse_entry_gen(
      json{{"kind", "table"},
           {"entries", json::array({{{"k", 2}, {"l", 3}, {"value", json::array({0, 1})}}})}},
      "operator");
  CHECK(gen(2, 3) == cplx(0, 1));
}

TEST_CASE("every bundled example parses and lists a description") {
  CHECK(examples().size() == 6);
  for (const auto& ex : examples()) {
    CHECK(!ex.description.empty());
    const json j = example_config(ex.name);
    const JobConfig cfg = JobConfig::parse(j);
    CHECK(!cfg.job.empty());
  }
  CHECK_THROWS_AS(example_config("no_such_example"), ConfigError);
}

TEST_CASE("missing config file raises a ConfigError") {
  CHECK_THROWS_AS(JobConfig::from_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("cap_windows truncates the ladders") {
  JobConfig cfg = JobConfig::parse(example_config("jacobi_h_identity"));
  cfg.cap_windows(256);
  for (long s : cfg.criteria.sizes) CHECK(s <= 256);
  CHECK(!cfg.criteria.sizes.empty());
}

TEST_CASE("afnorm_violation example runs to a failing report") {
  JobConfig cfg = JobConfig::parse(example_config("afnorm_violation"));
  const RunResult r = run_job(cfg);
  CHECK(r.exit_code == 1);
  CHECK(r.report.overall == Outcome::Fail);
  bool witnessed = false;
  for (const auto& v : r.report.verdicts)
    if (v.outcome == Outcome::Fail && v.witness) witnessed = true;
  CHECK(witnessed);
}

TEST_CASE("dirac example passes and serializes deterministically") {
  JobConfig cfg = JobConfig::parse(example_config("dirac_constant_alphas"));
  const RunResult a = run_job(cfg);
  const RunResult b = run_job(cfg);
  CHECK(a.exit_code == 0);
  CHECK(to_json(a.report).dump(2) == to_json(b.report).dump(2));
  const json rep = to_json(a.report);
  CHECK(rep.contains("verdicts"));
  CHECK(rep.contains("conclusion"));
  CHECK(rep["tool_version"] == kToolVersion);
  CHECK(rep["timestamp"].is_null());
}

TEST_CASE("write_outputs produces report.json and sanitized csv names") {
  JobConfig cfg = JobConfig::parse(example_config("jacobi_h_identity"));
  cfg.cap_windows(128);
  cfg.criteria.n_values = {1, 2, 4, 8};
  const RunResult r = run_job(cfg);
  const std::string dir = "test_pipeline_out";
  write_outputs(r, dir);
  std::ifstream rep(dir + "/report.json");
  REQUIRE(rep.good());
  json parsed;
  rep >> parsed;
  CHECK(parsed["verdicts"].size() == r.report.verdicts.size());
  for (const auto& c : r.report.curves) {
    std::string fname = c.name;
    for (char& ch : fname)
      if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
    std::ifstream csv(dir + "/" + fname + ".csv");
    CHECK(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header.find(',') != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("verdict JSON carries condition labels and witnesses") {
  opdomain::report::Verdict v = opdomain::report::Verdict::fail(
      "(AG)", 0.5, "residual", opdomain::report::Witness{3, 4});
  const json j = opdomain::report::to_json(v);
  CHECK(j["condition"] == "(AG)");
  CHECK(j["outcome"] == "fail");
  CHECK(j["witness"]["k"] == 3);
  CHECK(j["witness"]["l"] == 4);
}
