#include "opdomain/pipeline.hpp"

#include <filesystem>
#include <fstream>

namespace opdomain::pipeline {

using nlohmann::json;

// ---------------------------------------------------------------------------
// parsing helpers

namespace {

const json& need(const json& j, const std::string& key, const std::string& field) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(field + "." + key, "missing required key");
  return *it;
}

double need_num(const json& j, const std::string& key, const std::string& field) {
  const json& v = need(j, key, field);
  if (!v.is_number()) throw ConfigError(field + "." + key, "expected a number");
  return v.get<double>();
}

long need_int(const json& j, const std::string& key, const std::string& field) {
  const json& v = need(j, key, field);
  if (!v.is_number_integer()) throw ConfigError(field + "." + key, "expected an integer");
  return v.get<long>();
}

std::string need_str(const json& j, const std::string& key, const std::string& field) {
  const json& v = need(j, key, field);
  if (!v.is_string()) throw ConfigError(field + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<long> int_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of integers");
  std::vector<long> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError(field, "expected an array of integers");
    out.push_back(v.get<long>());
  }
  return out;
}

}  // namespace

core::cplx parse_cplx(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(field, "expected a number or [re, im]");
}

core::Matrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  core::Matrix M;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array()) throw ConfigError(field, "expected an array of rows");
    if (r == 0) {
      cols = j[r].size();
      if (cols == 0) throw ConfigError(field, "empty row");
      M.resize(rows, cols);
    } else if (j[r].size() != cols) {
      throw ConfigError(field, "ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c)
      M(r, c) = parse_cplx(j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return M;
}

core::EntryGen parse_entry_gen(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  const std::string kind = need_str(j, "kind", field);
  core::EntryGen gen = [&]() {
    try {
      if (kind == "zero") return core::EntryGen::zero();
      if (kind == "identity") return core::EntryGen::identity();
      if (kind == "shift") return core::EntryGen::shift();
      if (kind == "diagonal") return core::EntryGen::diagonal(need_str(j, "c", field));
      if (kind == "jacobi")
        return core::EntryGen::jacobi(need_str(j, "diag", field), need_str(j, "offdiag", field));
      if (kind == "pairswap_jacobi")
        return core::EntryGen::pairswap_jacobi(need_str(j, "diag", field),
                                               need_str(j, "offdiag", field));
      if (kind == "power_band")
        return core::EntryGen::power_band(need_num(j, "d", field), need_num(j, "s", field),
                                          need_num(j, "alpha", field));
      if (kind == "antidiagonal_blocks") {
        std::vector<int> signs;
        if (j.contains("signs"))
          for (long s : int_list(j["signs"], field + ".signs")) signs.push_back(static_cast<int>(s));
        return core::EntryGen::antidiagonal_blocks(int_list(need(j, "sizes", field), field + ".sizes"),
                                                   std::move(signs));
      }
      if (kind == "table") {
        std::map<std::pair<long, long>, core::cplx> entries;
        for (const auto& e : need(j, "entries", field)) {
          entries[{need_int(e, "k", field + ".entries"), need_int(e, "l", field + ".entries")}] =
              parse_cplx(need(e, "value", field + ".entries"), field + ".entries.value");
        }
        return core::EntryGen::table(std::move(entries));
      }
      if (kind == "expression") return core::EntryGen::expression(need_str(j, "src", field));
    } catch (const exprlang::ParseError& e) {
      throw ConfigError(field, std::string("expression parse error: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field, e.what());
    }
    throw ConfigError(field + ".kind", "unknown generator kind '" + kind + "'");
  }();
  if (j.contains("perturbations")) {
    for (const auto& p : j["perturbations"])
      gen.perturb(need_int(p, "k", field + ".perturbations"),
                  need_int(p, "l", field + ".perturbations"),
                  parse_cplx(need(p, "delta", field + ".perturbations"), field + ".perturbations"));
  }
  return gen;
}

core::DiagonalSpec parse_diagonal(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  try {
    if (j.contains("expr")) return core::DiagonalSpec::from_expr(j["expr"].get<std::string>());
    if (j.contains("block_expr"))
      return core::DiagonalSpec::from_block_expr(j["block_expr"].get<std::string>(),
                                                 need_int(j, "block_size", field));
    if (j.contains("values")) {
      std::vector<double> vals;
      for (const auto& v : j["values"]) vals.push_back(v.get<double>());
      return core::DiagonalSpec::from_values(std::move(vals));
    }
  } catch (const exprlang::ParseError& e) {
    throw ConfigError(field, std::string("expression parse error: ") + e.what());
  }
  throw ConfigError(field, "expected one of: expr, block_expr, values");
}

diffop::PolyMatrix parse_poly_matrix(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  diffop::PolyMatrix p;
  p.m = need_int(j, "m", field);
  p.k = need_int(j, "k", field);
  if (p.m < 1 || p.k < 1) throw ConfigError(field, "m and k must be >= 1");
  for (const auto& t : need(j, "terms", field)) {
    const auto expo = int_list(need(t, "expo", field + ".terms"), field + ".terms.expo");
    const json& cj = need(t, "coeff", field + ".terms");
    core::Matrix coeff;
    if (cj.is_number() || (cj.is_array() && cj.size() == 2 && cj[0].is_number())) {
      coeff.resize(1, 1);
      coeff(0, 0) = parse_cplx(cj, field + ".terms.coeff");
    } else {
      coeff = parse_matrix(cj, field + ".terms.coeff");
    }
    try {
      p.add_term(expo, coeff);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field + ".terms", e.what());
    }
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
  return p;
}

namespace {

diffop::GridSpec parse_grid(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  std::vector<diffop::Axis> axes;
  for (const auto& a : need(j, "axes", field)) {
    diffop::Axis ax;
    ax.lo = need_num(a, "lo", field + ".axes");
    ax.hi = need_num(a, "hi", field + ".axes");
    ax.count = need_int(a, "count", field + ".axes");
    axes.push_back(ax);
  }
  if (axes.empty()) throw ConfigError(field + ".axes", "at least one axis required");
  diffop::GridSpec g = diffop::GridSpec::default_for(static_cast<long>(axes.size()));
  g.axes = std::move(axes);
  if (j.contains("ray_radii")) {
    g.ray_radii.clear();
    for (const auto& r : j["ray_radii"]) g.ray_radii.push_back(r.get<double>());
  }
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
  return g;
}

core::PairingSpec parse_pairing(const json& j, const std::string& field) {
  core::PairingSpec pair{parse_entry_gen(need(j, "h", field), field + ".h"),
                         parse_entry_gen(need(j, "g", field), field + ".g"),
                         need_int(j, "p", field), std::nullopt};
  if (pair.p < 0) throw ConfigError(field + ".p", "band width must be >= 0");
  if (j.contains("s_g")) pair.s_g = j["s_g"].get<double>();
  return pair;
}

core::OperatorSpec parse_operator(const json& j, const std::string& field) {
  core::EntryGen gen = parse_entry_gen(j, field);
  std::optional<long> band;
  if (j.contains("bandwidth")) band = need_int(j, "bandwidth", field);
  core::Symmetry sym = core::Symmetry::None;
  if (j.contains("symmetry")) {
    const std::string s = j["symmetry"].get<std::string>();
    if (s == "hermitian")
      sym = core::Symmetry::Hermitian;
    else if (s == "real")
      sym = core::Symmetry::Real;
    else if (s != "none")
      throw ConfigError(field + ".symmetry", "expected none, hermitian or real");
  }
  try {
    return core::OperatorSpec(std::move(gen), band, sym);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

diffop::MatFunc parse_mat_func(const json& j, const std::string& field) {
  // configs can only carry polynomials; SampledMatFunc is API-level only
  return parse_poly_matrix(j, field);
}

}  // namespace

// ---------------------------------------------------------------------------
// JobConfig

JobConfig JobConfig::parse(const json& j) {
  if (!j.is_object()) throw ConfigError("", "top-level config must be an object");
  JobConfig cfg;
  cfg.raw = j;
  cfg.job = need_str(j, "job", "");
  if (cfg.job != "check-matrix" && cfg.job != "check-diffop" && cfg.job != "approx-unit" &&
      cfg.job != "oracle" && cfg.job != "all")
    throw ConfigError("job", "unknown job kind '" + cfg.job + "'");

  if (j.contains("sizes")) cfg.criteria.sizes = int_list(j["sizes"], "sizes");
  if (j.contains("n_values")) cfg.criteria.n_values = int_list(j["n_values"], "n_values");
  if (j.contains("tolerance")) cfg.criteria.tol = j["tolerance"].get<double>();
  if (j.contains("max_iter")) cfg.criteria.max_iter = need_int(j, "max_iter", "");
  if (j.contains("seed")) cfg.criteria.seed = static_cast<unsigned>(need_int(j, "seed", ""));
  if (j.contains("flatness")) cfg.criteria.flatness = j["flatness"].get<double>();
  if (j.contains("schur_certificate"))
    cfg.criteria.schur_certificate = j["schur_certificate"].get<bool>();
  if (cfg.criteria.sizes.empty()) throw ConfigError("sizes", "window ladder must be nonempty");
  for (long s : cfg.criteria.sizes)
    if (s < 1) throw ConfigError("sizes", "window sizes must be >= 1");

  if (j.contains("operator")) cfg.op = parse_operator(j["operator"], "operator");
  if (j.contains("pairing")) cfg.pairing = parse_pairing(j["pairing"], "pairing");
  if (j.contains("diagonal")) cfg.diagonal = parse_diagonal(j["diagonal"], "diagonal");

  if (j.contains("m") && j.contains("modakl"))
    throw ConfigError("m", "give either m or modakl, not both");
  if (j.contains("m")) cfg.m_or_modakl = need_int(j, "m", "");
  if (j.contains("modakl")) {
    matrix_criteria::ModaklParams mp;
    mp.d = need_num(j["modakl"], "d", "modakl");
    mp.s = need_num(j["modakl"], "s", "modakl");
    mp.alpha = need_num(j["modakl"], "alpha", "modakl");
    cfg.m_or_modakl = mp;
  }

  if (j.contains("unit")) {
    const json& u = j["unit"];
    const std::string kind = need_str(u, "kind", "unit");
    if (kind == "resolvent-power")
      cfg.unit_kind = approx_unit::UnitKind::ResolventPower;
    else if (kind == "spectral-projection")
      cfg.unit_kind = approx_unit::UnitKind::SpectralProjection;
    else
      throw ConfigError("unit.kind", "expected resolvent-power or spectral-projection");
    if (u.contains("m")) cfg.unit_m = need_int(u, "m", "unit");
    if (cfg.unit_m < 1) throw ConfigError("unit.m", "power must be >= 1");
  }
  if (j.contains("lemma"))
    cfg.lemma_zm = {parse_cplx(need(j["lemma"], "z", "lemma"), "lemma.z"),
                    need_int(j["lemma"], "m", "lemma")};
  if (j.contains("sqrt3"))
    cfg.sqrt3 = std::array<long, 3>{need_int(j["sqrt3"], "n_max", "sqrt3"),
                                    need_int(j["sqrt3"], "k_max", "sqrt3"),
                                    need_int(j["sqrt3"], "l_max", "sqrt3")};

  if (j.contains("diffop")) {
    const json& d = j["diffop"];
    DiffopJob dj;
    if (d.contains("alphas"))
      for (std::size_t i = 0; i < d["alphas"].size(); ++i)
        dj.alphas.push_back(parse_matrix(d["alphas"][i], "diffop.alphas[" + std::to_string(i) + "]"));
    if (d.contains("q")) dj.q = parse_mat_func(d["q"], "diffop.q");
    if (d.contains("coefficients"))
      for (std::size_t i = 0; i < d["coefficients"].size(); ++i)
        dj.coefficients.push_back(
            parse_mat_func(d["coefficients"][i], "diffop.coefficients[" + std::to_string(i) + "]"));
    if (d.contains("p1")) dj.p1 = parse_poly_matrix(d["p1"], "diffop.p1");
    if (d.contains("p2")) dj.p2 = parse_poly_matrix(d["p2"], "diffop.p2");
    if (d.contains("grid")) dj.grid = parse_grid(d["grid"], "diffop.grid");
    if (d.contains("holder_radii")) {
      dj.holder_radii.clear();
      for (const auto& r : d["holder_radii"]) dj.holder_radii.push_back(r.get<double>());
    }
    if (d.contains("holder_pairs")) dj.holder_pairs = need_int(d, "holder_pairs", "diffop");
    cfg.diffop_job = std::move(dj);
  }

  if (j.contains("oracle")) {
    const json& o = j["oracle"];
    OracleJob oj;
    if (o.contains("jacobi")) {
      OracleJob::JacobiProbe pr;
      pr.diag = need_str(o["jacobi"], "diag", "oracle.jacobi");
      pr.offdiag = need_str(o["jacobi"], "offdiag", "oracle.jacobi");
      if (o["jacobi"].contains("z")) pr.z = parse_cplx(o["jacobi"]["z"], "oracle.jacobi.z");
      if (o["jacobi"].contains("sizes"))
        pr.sizes = int_list(o["jacobi"]["sizes"], "oracle.jacobi.sizes");
      oj.jacobi = std::move(pr);
    }
    if (o.contains("h_symmetry")) oj.h_symmetry = o["h_symmetry"].get<bool>();
    if (o.contains("resolvent_commute")) oj.resolvent_commute = o["resolvent_commute"].get<bool>();
    if (o.contains("z")) oj.z = parse_cplx(o["z"], "oracle.z");
    if (o.contains("w_shift")) oj.w_shift = parse_cplx(o["w_shift"], "oracle.w_shift");
    cfg.oracle_job = std::move(oj);
  }

  return cfg;
}

JobConfig JobConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("JSON parse error: ") + e.what());
  }
  return parse(j);
}

void JobConfig::cap_windows(long max_window) {
  if (max_window < 1) throw ConfigError("max-window", "must be >= 1");
  auto cap = [&](std::vector<long>& sizes) {
    std::vector<long> kept;
    for (long s : sizes)
      if (s <= max_window) kept.push_back(s);
    if (kept.empty()) kept.push_back(std::min(max_window, sizes.empty() ? max_window : sizes.front()));
    sizes = std::move(kept);
  };
  cap(criteria.sizes);
  if (oracle_job && oracle_job->jacobi) cap(oracle_job->jacobi->sizes);
}

// ---------------------------------------------------------------------------
// job execution

namespace {

void run_check_matrix(const JobConfig& cfg, report::CheckReport& rep) {
  if (!cfg.op) throw ConfigError("operator", "check-matrix requires an operator");
  if (!cfg.pairing) throw ConfigError("pairing", "check-matrix requires a pairing");
  if (!cfg.diagonal) throw ConfigError("diagonal", "check-matrix requires a diagonal");
  if (!cfg.m_or_modakl) throw ConfigError("m", "check-matrix requires m or modakl");
  const auto res = matrix_criteria::certify_h_selfadjoint(*cfg.op, *cfg.pairing, *cfg.diagonal,
                                                          *cfg.m_or_modakl, cfg.criteria);
  for (const auto& v : res.verdicts) rep.add(v);
  for (const auto& c : res.curves) rep.add_curve(c);
}

void run_approx_unit(const JobConfig& cfg, report::CheckReport& rep) {
  if (!cfg.diagonal) throw ConfigError("diagonal", "approx-unit requires a diagonal");
  approx_unit::UnitFamily family{cfg.unit_kind, *cfg.diagonal, cfg.unit_m,
                                 cfg.criteria.n_values};
  const long wmax = cfg.criteria.sizes.back();
  const core::Window w{1, wmax, 0};

  // WOT probe with f = g = e_1
  const auto wot = approx_unit::wot_convergence_check(family, {{{1, core::cplx(1.0, 0.0)}}}, w);
  rep.add(wot.verdict);
  report::Curve wc{"wot_curve", {"n", "deviation"}, {}};
  for (auto [n, d] : wot.deviations) wc.rows.push_back({static_cast<double>(n), d});
  rep.add_curve(wc);

  if (cfg.sqrt3) {
    const auto s3 = approx_unit::sqrt3_inequality_check(*cfg.diagonal, (*cfg.sqrt3)[0],
                                                        (*cfg.sqrt3)[1], (*cfg.sqrt3)[2]);
    rep.add(s3.verdict);
  }

  if (cfg.op) {
    std::vector<core::Window> ladder;
    for (long n : cfg.criteria.sizes) ladder.push_back(core::Window{1, n, 0});
    const auto kom = approx_unit::komintro_check(family, *cfg.op, ladder, cfg.criteria.tol,
                                                 cfg.criteria.max_iter, cfg.criteria.seed);
    rep.add(kom.bounded == report::Outcome::Pass
                ? report::Verdict::pass("(komintro)", kom.sup, kom.detail)
            : kom.bounded == report::Outcome::Fail
                ? report::Verdict::fail("(komintro)", kom.sup, kom.detail)
                : report::Verdict::inconclusive("(komintro)", kom.sup, kom.detail));
    auto kc = kom.curve();
    kc.name = "komintro_curve";
    rep.add_curve(kc);

    if (cfg.lemma_zm) {
      const auto lb = approx_unit::lemma_bound_check(*cfg.op, *cfg.diagonal, cfg.lemma_zm->first,
                                                     cfg.lemma_zm->second, ladder,
                                                     cfg.criteria.tol, cfg.criteria.seed);
      rep.add(lb.verdict);
    }
  }
}

void run_oracle(const JobConfig& cfg, report::CheckReport& rep) {
  if (!cfg.oracle_job) throw ConfigError("oracle", "oracle job requires an oracle section");
  const auto& oj = *cfg.oracle_job;

  if (oj.jacobi) {
    core::DiagonalSpec dg = core::DiagonalSpec::from_expr(oj.jacobi->diag);
    core::DiagonalSpec og = core::DiagonalSpec::from_expr(oj.jacobi->offdiag);
    const auto probe = oracle::jacobi_limit_point_probe([&](long k) { return dg.at(k); },
                                                        [&](long k) { return og.at(k); },
                                                        oj.jacobi->z, oj.jacobi->sizes);
    const double last = probe.values.empty() ? 0.0 : probe.values.back().second;
    rep.add(probe.trend == oracle::Trend::Growing
                ? report::Verdict::pass("(limit-point probe)", last, probe.conclusion)
                : report::Verdict::inconclusive("(limit-point probe)", last, probe.conclusion));
    report::Curve pc{"limit_point_probe", {"size", "log10_sum"}, {}};
    for (auto [n, v] : probe.values) pc.rows.push_back({n, v});
    rep.add_curve(pc);
  }

  if (oj.h_symmetry) {
    if (!cfg.op || !cfg.pairing)
      throw ConfigError("oracle.h_symmetry", "requires operator and pairing");
    const core::Window w{1, std::min(cfg.criteria.sizes.back(), 1024L), 0};
    const double res = oracle::finite_h_symmetry_residual(*cfg.op, *cfg.pairing, w);
    double scale = 1.0;
    for (long k = w.lo; k <= std::min(w.hi, w.lo + 63); ++k)
      for (long l = w.lo; l <= std::min(w.hi, w.lo + 63); ++l)
        scale = std::max(scale, std::abs(cfg.op->at(k, l)));
    rep.add(res <= 1e-10 * scale
                ? report::Verdict::pass("(HA=A*H)", res, "H-symmetry residual vanishes")
                : report::Verdict::fail("(HA=A*H)", res, "H-symmetry residual nonzero"));
  }

  if (oj.resolvent_commute) {
    if (!cfg.op || !cfg.diagonal)
      throw ConfigError("oracle.resolvent_commute", "requires operator and diagonal");
    std::vector<core::Window> ladder;
    for (long n : cfg.criteria.sizes)
      if (n <= 2048) ladder.push_back(core::Window{1, n, 0});
    if (ladder.empty()) ladder.push_back(core::Window{1, cfg.criteria.sizes.front(), 0});
    const auto probe = oracle::resolvent_commute_check(*cfg.op, *cfg.diagonal, oj.z, oj.w_shift,
                                                       ladder);
    const double last = probe.values.empty() ? 0.0 : probe.values.back().second;
    rep.add(last <= 1e-8 && !probe.values.empty()
                ? report::Verdict::pass("(resolvent-commute)", last, probe.conclusion)
                : report::Verdict::fail("(resolvent-commute)", last, probe.conclusion));
    report::Curve pc{"resolvent_commute", {"size", "norm"}, {}};
    for (auto [n, v] : probe.values) pc.rows.push_back({n, v});
    rep.add_curve(pc);
  }
}

void run_check_diffop(const JobConfig& cfg, report::CheckReport& rep) {
  if (!cfg.diffop_job) throw ConfigError("diffop", "check-diffop requires a diffop section");
  const auto& dj = *cfg.diffop_job;

  auto grid_for = [&](long m) {
    if (dj.grid) {
      if (dj.grid->dim() != m)
        throw ConfigError("diffop.grid", "grid dimension does not match the coefficients");
      return *dj.grid;
    }
    return diffop::GridSpec::default_for(m);
  };

  bool ran = false;
  if (!dj.alphas.empty()) {
    if (!dj.q) throw ConfigError("diffop.q", "check_afnorm requires Q (use a zero polynomial)");
    const auto af = diffop::check_afnorm(dj.alphas, *dj.q, grid_for(diffop::func_m(*dj.q)));
    for (const auto& v : af.all()) rep.add(v);
    ran = true;
  }
  if (dj.q) {
    const auto h = diffop::check_holder(*dj.q, dj.holder_radii, dj.holder_pairs,
                                        cfg.criteria.seed);
    rep.add(h.verdict);
    report::Curve hc{"holder_curve", {"n", "b_hat", "sup"}, {}};
    for (const auto& e : h.per_radius) hc.rows.push_back({e.n, e.b_hat, e.sup});
    rep.add_curve(hc);
    ran = true;
  }
  if (!dj.coefficients.empty()) {
    const long m = diffop::func_m(dj.coefficients.front());
    const auto grid = grid_for(m);
    rep.add(diffop::check_QL(dj.coefficients, grid).verdict);
    const auto qq = diffop::check_QQ(dj.coefficients, grid, cfg.criteria.tol);
    rep.add(qq.verdict);
    rep.add_curve(qq.ray_curve);
    const auto qi = diffop::check_QI(dj.coefficients, grid);
    rep.add(qi.verdict);
    rep.add_curve(qi.ray_curve);
    ran = true;
  }
  if (dj.p1 && dj.p2) {
    const auto dom = diffop::check_poly_domination(*dj.p1, *dj.p2, grid_for(dj.p1->m));
    rep.add(dom.verdict);
    rep.add_curve(dom.ray_curve);
    ran = true;
  }
  if (!ran) throw ConfigError("diffop", "no checks requested (empty diffop section)");
}

}  // namespace

RunResult run_job(const JobConfig& cfg) {
  RunResult out;
  out.report.job_echo = cfg.raw;
  out.report.tool_version = kToolVersion;

  std::string conclusion;
  if (cfg.job == "check-matrix") {
    run_check_matrix(cfg, out.report);
    conclusion = "essentially H-selfadjoint";
  } else if (cfg.job == "approx-unit") {
    run_approx_unit(cfg, out.report);
    conclusion = "approximate-unit hypotheses";
  } else if (cfg.job == "oracle") {
    run_oracle(cfg, out.report);
    conclusion = "independent oracle probes";
  } else if (cfg.job == "check-diffop") {
    run_check_diffop(cfg, out.report);
    conclusion = "essentially normal (Krein-space sense)";
  } else {  // all
    if (cfg.op && cfg.pairing && cfg.diagonal && cfg.m_or_modakl) run_check_matrix(cfg, out.report);
    if (cfg.diagonal) run_approx_unit(cfg, out.report);
    if (cfg.oracle_job) run_oracle(cfg, out.report);
    if (cfg.diffop_job) run_check_diffop(cfg, out.report);
    conclusion = "combined certification";
  }
  out.report.finalize(conclusion);
  switch (out.report.overall) {
    case report::Outcome::Pass: out.exit_code = 0; break;
    case report::Outcome::Fail: out.exit_code = 1; break;
    case report::Outcome::Inconclusive: out.exit_code = 2; break;
  }
  return out;
}

void write_outputs(const RunResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream f(fs::path(out_dir) / "report.json", std::ios::binary);
    f << report::to_json(r.report).dump(2) << '\n';
  }
  for (const auto& c : r.report.curves) {
    std::string stem;  // file-system-safe curve name
    for (char ch : c.name) stem += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
    std::ofstream f(fs::path(out_dir) / (stem + ".csv"), std::ios::binary);
    f << report::curve_csv(c);
  }
}

// ---------------------------------------------------------------------------
// bundled examples

namespace {

json jacobi_h_identity() {
  return json{
      {"job", "check-matrix"},
      {"operator", {{"kind", "jacobi"}, {"diag", "0"}, {"offdiag", "k"}, {"bandwidth", 1},
                    {"symmetry", "real"}}},
      {"pairing", {{"h", {{"kind", "identity"}}}, {"g", {{"kind", "identity"}}}, {"p", 0},
                   {"s_g", 1.0}}},
      {"diagonal", {{"expr", "k"}}},
      {"m", 1},
      {"sizes", {64, 128, 256, 512, 1024, 2048, 4096}},
      {"n_values", {1, 2, 4, 8, 16, 32, 64, 128, 256}},
  };
}

json antidiagonal_block_H() {
  return json{
      {"job", "check-matrix"},
      {"operator", {{"kind", "pairswap_jacobi"}, {"diag", "k"}, {"offdiag", "1"},
                    {"bandwidth", 2}, {"symmetry", "none"}}},
      {"pairing", {{"h", {{"kind", "antidiagonal_blocks"}, {"sizes", {2}}, {"signs", {1}}}},
                   {"g", {{"kind", "antidiagonal_blocks"}, {"sizes", {2}}, {"signs", {1}}}},
                   {"p", 1}, {"s_g", 1.0}}},
      {"diagonal", {{"expr", "k"}}},
      {"m", 2},
      {"sizes", {64, 128, 256, 512, 1024, 2048, 4096}},
  };
}

json power_band_modakl() {
  return json{
      {"job", "check-matrix"},
      {"operator", {{"kind", "power_band"}, {"d", 1.0}, {"s", 1.0}, {"alpha", 3.0},
                    {"symmetry", "real"}}},
      {"pairing", {{"h", {{"kind", "identity"}}}, {"g", {{"kind", "identity"}}}, {"p", 0},
                   {"s_g", 1.0}}},
      {"diagonal", {{"expr", "k"}}},
      {"modakl", {{"d", 1.0}, {"s", 1.0}, {"alpha", 3.0}}},
      {"sizes", {64, 128, 256, 512, 1024}},
      {"unit", {{"kind", "resolvent-power"}, {"m", 3}}},
  };
}

json dirac_constant_alphas() {
  return json{
      {"job", "check-diffop"},
      {"diffop",
       {{"alphas", {{{0, 1}, {1, 0}}, {{1, 0}, {0, -1}}}},
        {"q", {{"m", 2}, {"k", 2},
               {"terms", {{{"expo", {0, 0}}, {"coeff", {{2, 0}, {0, 2}}}}}}}},
        {"holder_radii", {1.0}}}},
  };
}

json afnorm_violation() {
  return json{
      {"job", "check-diffop"},
      {"diffop",
       {{"alphas", {{{0, 1}, {0, 0}}}},
        {"q", {{"m", 1}, {"k", 2}, {"terms", json::array()}}}}},
  };
}

json block_commuting_resolvent() {
  return json{
      {"job", "oracle"},
      {"operator", {{"kind", "antidiagonal_blocks"}, {"sizes", {2}}, {"signs", {1}},
                    {"bandwidth", 1}}},
      {"diagonal", {{"block_expr", "k"}, {"block_size", 2}}},
      {"sizes", {256, 512, 1024, 2048}},
      {"oracle", {{"resolvent_commute", true}, {"z", {0, 1}}, {"w_shift", {0, 2}}}},
  };
}

}  // namespace

const std::vector<ExampleInfo>& examples() {
  static const std::vector<ExampleInfo> cat = {
      {"jacobi_h_identity",
       "Jacobi operator a_{k,k+1} = k with c_k = k, H = I: (M1)/(M2) kernels and (komintro)"},
      {"antidiagonal_block_H",
       "antidiagonal 2x2-block Gram pairing: (h1)-(h4) and the H-symmetry identity (AG)"},
      {"power_band_modakl", "power-band growth family: entrywise (modakl) shortcut, suggested m"},
      {"dirac_constant_alphas",
       "constant Hermitian alphas with scalar Q: the three (Afnorm) identities and (Holder)"},
      {"afnorm_violation", "non-normal alpha: (Afnorm) violation with witness pair"},
      {"block_commuting_resolvent",
       "block operator with ad(S,A) = 0: resolvent commutation decay on sections"},
  };
  return cat;
}

json example_config(const std::string& name) {
  if (name == "jacobi_h_identity") return jacobi_h_identity();
  if (name == "antidiagonal_block_H") return antidiagonal_block_H();
  if (name == "power_band_modakl") return power_band_modakl();
  if (name == "dirac_constant_alphas") return dirac_constant_alphas();
  if (name == "afnorm_violation") return afnorm_violation();
  if (name == "block_commuting_resolvent") return block_commuting_resolvent();
  throw ConfigError("example", "unknown example '" + name + "'");
}

}  // namespace opdomain::pipeline
