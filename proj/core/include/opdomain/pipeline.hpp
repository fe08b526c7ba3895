#pragma once

// Config ingestion and orchestration: parses JSON job configs, runs the
// requested checks, and assembles a CheckReport plus CSV curve files.

#include <array>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "opdomain/approx_unit.hpp"
#include "opdomain/core.hpp"
#include "opdomain/diffop.hpp"
#include "opdomain/matrix_criteria.hpp"
#include "opdomain/oracle.hpp"
#include "opdomain/report.hpp"

namespace opdomain::pipeline {

inline constexpr const char* kToolVersion = "opdomain 0.1.0";

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config error at '" + field + "': " + what),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Complex scalars appear in configs as plain numbers or [re, im] pairs.
core::cplx parse_cplx(const nlohmann::json& j, const std::string& field);
core::Matrix parse_matrix(const nlohmann::json& j, const std::string& field);
core::EntryGen parse_entry_gen(const nlohmann::json& j, const std::string& field);
core::DiagonalSpec parse_diagonal(const nlohmann::json& j, const std::string& field);
diffop::PolyMatrix parse_poly_matrix(const nlohmann::json& j, const std::string& field);

struct DiffopJob {
  std::vector<core::Matrix> alphas;
  std::optional<diffop::MatFunc> q;
  std::vector<diffop::MatFunc> coefficients;  // the Q_l of the first-order part
  std::optional<diffop::PolyMatrix> p1, p2;   // symbols for domination
  std::optional<diffop::GridSpec> grid;
  std::vector<double> holder_radii = {1.0};
  long holder_pairs = 4000;
};

struct OracleJob {
  struct JacobiProbe {
    std::string diag, offdiag;
    core::cplx z{0.0, 1.0};
    std::vector<long> sizes = {256, 1024, 4096, 16384};
  };
  std::optional<JacobiProbe> jacobi;
  bool h_symmetry = false;       // requires operator + pairing
  bool resolvent_commute = false;  // requires operator + diagonal
  core::cplx z{0.0, 1.0};
  core::cplx w_shift{0.0, 2.0};
};

struct JobConfig {
  std::string job;  // check-matrix | check-diffop | approx-unit | oracle | all
  nlohmann::json raw;
  matrix_criteria::CriteriaConfig criteria;

  std::optional<core::OperatorSpec> op;
  std::optional<core::PairingSpec> pairing;
  std::optional<core::DiagonalSpec> diagonal;
  std::optional<std::variant<long, matrix_criteria::ModaklParams>> m_or_modakl;

  approx_unit::UnitKind unit_kind = approx_unit::UnitKind::ResolventPower;
  long unit_m = 1;
  std::optional<std::pair<core::cplx, long>> lemma_zm;  // resolvent-power bound probe
  std::optional<std::array<long, 3>> sqrt3;             // n_max, k_max, l_max

  std::optional<DiffopJob> diffop_job;
  std::optional<OracleJob> oracle_job;

  static JobConfig parse(const nlohmann::json& j);
  static JobConfig from_file(const std::string& path);

  void cap_windows(long max_window);  // --max-window
};

struct RunResult {
  report::CheckReport report;
  int exit_code = 0;  // 0 pass, 1 fail, 2 inconclusive only
};

RunResult run_job(const JobConfig& cfg);

// report.json plus one <curve-name>.csv per curve, under out_dir (created).
void write_outputs(const RunResult& r, const std::string& out_dir);

struct ExampleInfo {
  std::string name;
  std::string description;  // the condition the instance exercises
};

const std::vector<ExampleInfo>& examples();
nlohmann::json example_config(const std::string& name);  // throws ConfigError

}  // namespace opdomain::pipeline
