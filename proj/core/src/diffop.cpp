#include "opdomain/diffop.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace opdomain::diffop {

namespace {

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (auto [x, y] : pts) {
    if (x <= 0 || y <= 0) continue;
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

// Ray sups stabilize when the log-log slope against radius stays <= 0.1.
struct RayTrend {
  bool divergent = false;
  long worst_ray = -1;
  double slope = 0.0;
};

RayTrend ray_trend(const std::map<long, std::vector<std::pair<double, double>>>& per_ray) {
  RayTrend t;
  for (const auto& [ray, pts] : per_ray) {
    const double s = loglog_slope(pts);
    if (s > 0.1 && s > t.slope) {
      t.divergent = true;
      t.worst_ray = ray;
      t.slope = s;
    }
  }
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// PolyMatrix

PolyMatrix PolyMatrix::constant(long m, const Matrix& coeff) {
  PolyMatrix p;
  p.m = m;
  p.k = coeff.rows();
  p.terms[std::vector<long>(m, 0)] = coeff;
  p.validate();
  return p;
}

PolyMatrix PolyMatrix::zero(long m, long k) {
  PolyMatrix p;
  p.m = m;
  p.k = k;
  p.validate();
  return p;
}

PolyMatrix PolyMatrix::scalar(long m, const std::map<std::vector<long>, cplx>& coeffs) {
  PolyMatrix p;
  p.m = m;
  p.k = 1;
  for (const auto& [expo, c] : coeffs) {
    Matrix M(1, 1);
    M(0, 0) = c;
    p.add_term(expo, M);
  }
  p.validate();
  return p;
}

void PolyMatrix::add_term(const std::vector<long>& expo, const Matrix& coeff) {
  if (static_cast<long>(expo.size()) != m)
    throw std::invalid_argument("PolyMatrix: exponent length != m");
  if (coeff.rows() != k || coeff.cols() != k)
    throw std::invalid_argument("PolyMatrix: coefficient is not k x k");
  auto it = terms.find(expo);
  if (it == terms.end())
    terms[expo] = coeff;
  else
    it->second += coeff;
}

void PolyMatrix::validate() const {
  if (m < 1 || k < 1) throw std::invalid_argument("PolyMatrix: m and k must be >= 1");
  for (const auto& [expo, coeff] : terms) {
    if (static_cast<long>(expo.size()) != m)
      throw std::invalid_argument("PolyMatrix: exponent length != m");
    if (coeff.rows() != k || coeff.cols() != k)
      throw std::invalid_argument("PolyMatrix: coefficient is not k x k");
    for (long e : expo)
      if (e < 0) throw std::invalid_argument("PolyMatrix: negative exponent");
    if (!coeff.allFinite()) throw std::invalid_argument("PolyMatrix: non-finite coefficient");
  }
}

Matrix PolyMatrix::eval(const std::vector<double>& x) const {
  if (static_cast<long>(x.size()) != m)
    throw std::invalid_argument("PolyMatrix::eval: point dimension != m");
  Matrix acc = Matrix::Zero(k, k);
  for (const auto& [expo, coeff] : terms) {
    double mono = 1.0;
    for (long j = 0; j < m; ++j)
      for (long e = 0; e < expo[j]; ++e) mono *= x[j];
    acc += mono * coeff;
  }
  return acc;
}

cplx PolyMatrix::eval_scalar(const std::vector<double>& x) const {
  if (k != 1) throw std::invalid_argument("PolyMatrix::eval_scalar: k != 1");
  return eval(x)(0, 0);
}

PolyMatrix PolyMatrix::partial(long axis) const {
  if (axis < 1 || axis > m) throw std::invalid_argument("PolyMatrix::partial: axis out of range");
  PolyMatrix p;
  p.m = m;
  p.k = k;
  for (const auto& [expo, coeff] : terms) {
    const long e = expo[axis - 1];
    if (e == 0) continue;
    auto de = expo;
    de[axis - 1] = e - 1;
    p.add_term(de, static_cast<double>(e) * coeff);
  }
  return p;
}

long PolyMatrix::total_degree() const {
  long deg = -1;
  for (const auto& [expo, coeff] : terms) {
    if (coeff.cwiseAbs().maxCoeff() == 0.0) continue;
    long d = 0;
    for (long e : expo) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

Matrix SampledMatFunc::eval(const std::vector<double>& x) const {
  if (static_cast<long>(x.size()) != m)
    throw std::invalid_argument("SampledMatFunc::eval: point dimension != m");
  Matrix v = f(x);
  if (v.rows() != k || v.cols() != k)
    throw std::invalid_argument("SampledMatFunc::eval: value is not k x k");
  if (!v.allFinite()) throw std::invalid_argument("SampledMatFunc::eval: non-finite value");
  return v;
}

long func_m(const MatFunc& q) {
  return std::visit([](const auto& f) { return f.m; }, q);
}
long func_k(const MatFunc& q) {
  return std::visit([](const auto& f) { return f.k; }, q);
}
Matrix func_eval(const MatFunc& q, const std::vector<double>& x) {
  return std::visit([&](const auto& f) { return f.eval(x); }, q);
}

// ---------------------------------------------------------------------------
// GridSpec

GridSpec GridSpec::default_for(long m) {
  if (m < 1) throw std::invalid_argument("GridSpec: m must be >= 1");
  GridSpec g;
  g.axes.assign(m, Axis{});
  for (long j = 0; j < m; ++j) {
    std::vector<double> plus(m, 0.0), minus(m, 0.0);
    plus[j] = 1.0;
    minus[j] = -1.0;
    g.ray_directions.push_back(plus);
    g.ray_directions.push_back(minus);
  }
  const double inv = 1.0 / std::sqrt(static_cast<double>(m));
  for (long mask = 0; mask < (1L << m); ++mask) {
    std::vector<double> d(m);
    for (long j = 0; j < m; ++j) d[j] = (mask >> j) & 1 ? -inv : inv;
    g.ray_directions.push_back(d);
  }
  return g;
}

long GridSpec::dim() const { return static_cast<long>(axes.size()); }

void GridSpec::validate() const {
  if (axes.empty()) throw std::invalid_argument("GridSpec: no axes");
  for (const auto& a : axes) {
    if (a.count < 2) throw std::invalid_argument("GridSpec: axis count must be >= 2");
    if (!(a.lo < a.hi)) throw std::invalid_argument("GridSpec: axis lo must be < hi");
  }
  for (const auto& d : ray_directions)
    if (static_cast<long>(d.size()) != dim())
      throw std::invalid_argument("GridSpec: ray direction dimension mismatch");
}

std::vector<std::vector<double>> GridSpec::points() const {
  validate();
  const long m = dim();
  long total = 1;
  for (const auto& a : axes) total *= a.count;
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  std::vector<long> idx(m, 0);
  for (long t = 0; t < total; ++t) {
    std::vector<double> x(m);
    for (long j = 0; j < m; ++j)
      x[j] = axes[j].lo + (axes[j].hi - axes[j].lo) * idx[j] / (axes[j].count - 1);
    pts.push_back(std::move(x));
    for (long j = m - 1; j >= 0; --j) {
      if (++idx[j] < axes[j].count) break;
      idx[j] = 0;
    }
  }
  return pts;
}

std::vector<GridSpec::RayPoint> GridSpec::ray_points() const {
  validate();
  std::vector<RayPoint> pts;
  for (std::size_t r = 0; r < ray_directions.size(); ++r)
    for (double radius : ray_radii) {
      RayPoint p;
      p.x.resize(dim());
      for (long j = 0; j < dim(); ++j) p.x[j] = radius * ray_directions[r][j];
      p.radius = radius;
      p.ray = static_cast<long>(r);
      pts.push_back(std::move(p));
    }
  return pts;
}

// ---------------------------------------------------------------------------
// (Afnorm)

AfnormResult check_afnorm(const std::vector<Matrix>& alphas, const MatFunc& Q,
                          const GridSpec& grid) {
  const long m = static_cast<long>(alphas.size());
  if (m == 0) throw std::invalid_argument("check_afnorm: no alpha matrices");
  const long k = alphas[0].rows();
  for (const auto& a : alphas)
    if (a.rows() != k || a.cols() != k)
      throw std::invalid_argument("check_afnorm: alpha dimension mismatch");
  if (func_k(Q) != k) throw std::invalid_argument("check_afnorm: Q channel count mismatch");
  if (func_m(Q) != grid.dim())
    throw std::invalid_argument("check_afnorm: Q dimension != grid dimension");

  AfnormResult res;

  // identity 1: alpha_l^* alpha_r = alpha_l alpha_r^* (grid-independent)
  double r1 = 0.0, s1 = 0.0;
  std::optional<report::Witness> w1;
  for (long l = 0; l < m; ++l)
    for (long r = 0; r < m; ++r) {
      const Matrix lhs = alphas[l].adjoint() * alphas[r];
      const Matrix rhs = alphas[l] * alphas[r].adjoint();
      s1 = std::max({s1, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff(), 1.0});
      const double d = (lhs - rhs).cwiseAbs().maxCoeff();
      if (d > r1) {
        r1 = d;
        w1 = report::Witness{l + 1, r + 1};
      }
    }
  res.alpha_identity = r1 <= 1e-10 * s1
                           ? Verdict::pass("(Afnorm:alpha)", r1, "alpha_l^* alpha_r = alpha_l alpha_r^*")
                           : Verdict::fail("(Afnorm:alpha)", r1, "identity fails", w1);

  // identities 2 and 3: pointwise over the grid and rays
  double r2 = 0.0, s2 = 1.0, r3 = 0.0, s3 = 1.0;
  std::optional<report::Witness> w3;
  auto visit = [&](const std::vector<double>& x) {
    const Matrix q = func_eval(Q, x);
    const Matrix qs = q.adjoint();
    s2 = std::max(s2, (q * qs).cwiseAbs().maxCoeff());
    r2 = std::max(r2, (q * qs - qs * q).cwiseAbs().maxCoeff());
    for (long l = 0; l < m; ++l) {
      const Matrix lhs = alphas[l].adjoint() * q;
      const Matrix rhs = alphas[l] * qs;
      s3 = std::max({s3, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
      const double d = (lhs - rhs).cwiseAbs().maxCoeff();
      if (d > r3) {
        r3 = d;
        w3 = report::Witness{l + 1, 0};
      }
    }
  };
  for (const auto& x : grid.points()) visit(x);
  for (const auto& rp : grid.ray_points()) visit(rp.x);

  res.q_normality = r2 <= 1e-10 * s2
                        ? Verdict::pass("(Afnorm:QQ*)", r2, "Q(x) Q^*(x) = Q^*(x) Q(x) on the grid")
                        : Verdict::fail("(Afnorm:QQ*)", r2, "Q normality fails at a grid point");
  res.mixed_identity = r3 <= 1e-10 * s3
                           ? Verdict::pass("(Afnorm:alphaQ)", r3, "alpha_l^* Q = alpha_l Q^* on the grid")
                           : Verdict::fail("(Afnorm:alphaQ)", r3, "mixed identity fails", w3);
  res.overall = report::combine(res.all());
  return res;
}

// ---------------------------------------------------------------------------
// local Hölder condition

HolderResult check_holder(const MatFunc& Q, const std::vector<double>& radii,
                          long pairs_per_radius, unsigned seed) {
  const long m = func_m(Q);
  HolderResult res;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  bool all_ok = true;
  double worst_b = 1.0;

  for (double n : radii) {
    // anchor points: half uniform in the ball, half with log-small coordinates
    // so that non-Lipschitz behavior near the origin is actually sampled
    auto draw_anchor = [&]() {
      std::vector<double> x(m);
      if (unit(rng) < 0.5) {
        for (long j = 0; j < m; ++j) x[j] = n * (2.0 * unit(rng) - 1.0);
      } else {
        for (long j = 0; j < m; ++j) {
          const double mag = n * std::pow(10.0, -4.0 * unit(rng));
          x[j] = unit(rng) < 0.5 ? mag : -mag;
        }
      }
      return x;
    };

    constexpr long kBins = 8;
    const double lo_exp = -3.0, hi_exp = -0.5;
    std::vector<double> bin_max(kBins, 0.0);
    double holder_sup = 0.0;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    pairs.reserve(pairs_per_radius);
    for (long t = 0; t < pairs_per_radius; ++t) {
      auto x = draw_anchor();
      const double u = lo_exp + (hi_exp - lo_exp) * unit(rng);
      const double sep = n * std::pow(10.0, u);
      std::vector<double> dir(m);
      double norm = 0.0;
      for (long j = 0; j < m; ++j) {
        dir[j] = gauss(rng);
        norm += dir[j] * dir[j];
      }
      norm = std::sqrt(std::max(norm, 1e-300));
      auto y = x;
      for (long j = 0; j < m; ++j) y[j] += sep * dir[j] / norm;
      const double diff = (func_eval(Q, x) - func_eval(Q, y)).norm();
      const long bin = std::min<long>(kBins - 1, static_cast<long>((u - lo_exp) /
                                                                   (hi_exp - lo_exp) * kBins));
      bin_max[bin] = std::max(bin_max[bin], diff);
      pairs.push_back({std::move(x), std::move(y)});
    }

    HolderEstimate est;
    est.n = n;
    std::vector<std::pair<double, double>> fit;
    for (long b = 0; b < kBins; ++b) {
      const double center = n * std::pow(10.0, lo_exp + (b + 0.5) * (hi_exp - lo_exp) / kBins);
      if (bin_max[b] > 0) fit.push_back({center, bin_max[b]});
    }
    if (fit.size() < 2) {
      // constant Q on all sampled pairs
      est.b_hat = 1.0;
      est.sup = 0.0;
    } else {
      est.b_hat = std::clamp(loglog_slope(fit), 1e-6, 1.0);
      for (const auto& [x, y] : pairs) {
        double sep = 0.0;
        for (long j = 0; j < m; ++j) sep += (x[j] - y[j]) * (x[j] - y[j]);
        sep = std::sqrt(sep);
        if (sep > 0)
          holder_sup = std::max(holder_sup,
                                (func_eval(Q, x) - func_eval(Q, y)).norm() / std::pow(sep, est.b_hat));
      }
      est.sup = holder_sup;
    }
    worst_b = std::min(worst_b, est.b_hat);
    all_ok = all_ok && std::isfinite(est.sup) && est.b_hat > 0.05;
    res.per_radius.push_back(est);
  }

  res.verdict = all_ok ? Verdict::pass("(Holder)", worst_b,
                                       "heuristic: exponent estimate positive, sup finite")
                       : Verdict::fail("(Holder)", worst_b,
                                       "heuristic: exponent estimate collapsed or sup diverged");
  return res;
}

// ---------------------------------------------------------------------------
// (QL)

QLResult check_QL(const std::vector<MatFunc>& Qs, const GridSpec& grid) {
  if (Qs.empty()) throw std::invalid_argument("check_QL: no coefficients");
  QLResult res;
  bool any_sampled = false;
  bool ok = true;
  double worst = 0.0;

  for (const auto& q : Qs) {
    if (const auto* poly = std::get_if<PolyMatrix>(&q)) {
      for (const auto& [expo, coeff] : poly->terms) {
        if (coeff.cwiseAbs().maxCoeff() == 0.0) continue;
        long d = 0;
        for (long e : expo) d += e;
        if (d >= 2) {
          res.offending.push_back(expo);
          ok = false;
        }
        worst = std::max(worst, static_cast<double>(d));
      }
    } else {
      // sampled path: finite-difference first partials at two step sizes; the
      // sup over the grid is only evidence, so the result stays heuristic
      any_sampled = true;
      const long m = func_m(q);
      double sup = 0.0;
      for (const auto& x : grid.points()) {
        for (long j = 0; j < m; ++j) {
          for (double h : {1e-3, 1e-4}) {
            auto xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            sup = std::max(sup, (func_eval(q, xp) - func_eval(q, xm)).norm() / (2 * h));
          }
        }
      }
      worst = std::max(worst, sup);
      if (!std::isfinite(sup)) ok = false;
    }
  }

  res.heuristic = any_sampled;
  if (ok)
    res.verdict = Verdict::pass("(QL)", worst,
                                any_sampled ? "heuristic: finite-difference partial sups finite"
                                            : "all coefficient degrees <= 1");
  else
    res.verdict = Verdict::fail("(QL)", worst, "unbounded coefficient derivative",
                                res.offending.empty()
                                    ? std::nullopt
                                    : std::make_optional(report::Witness{res.offending[0][0], 0}));
  return res;
}

// ---------------------------------------------------------------------------
// block assembly and the (QQ)/(QI) pencils

std::pair<Matrix, Matrix> assemble_blocks(const std::vector<Matrix>& q_values) {
  const long m = static_cast<long>(q_values.size());
  if (m == 0) throw std::invalid_argument("assemble_blocks: no blocks");
  const long k = q_values[0].rows();
  for (const auto& q : q_values)
    if (q.rows() != k || q.cols() != k)
      throw std::invalid_argument("assemble_blocks: block dimension mismatch");
  Matrix Q = Matrix::Zero(m * k, m * k), Qstar = Matrix::Zero(m * k, m * k);
  for (long r = 0; r < m; ++r)
    for (long l = 0; l < m; ++l) {
      Q.block(r * k, l * k, k, k) = q_values[r].adjoint() * q_values[l];
      Qstar.block(r * k, l * k, k, k) = q_values[r] * q_values[l].adjoint();
    }
  return {Q, Qstar};
}

namespace {

std::vector<Matrix> eval_all(const std::vector<MatFunc>& Qs, const std::vector<double>& x) {
  std::vector<Matrix> vals;
  vals.reserve(Qs.size());
  for (const auto& q : Qs) vals.push_back(func_eval(q, x));
  return vals;
}

}  // namespace

ComparabilityResult check_QQ(const std::vector<MatFunc>& Qs, const GridSpec& grid, double tol) {
  if (Qs.empty()) throw std::invalid_argument("check_QQ: no coefficients");
  ComparabilityResult res;
  res.ray_curve = Curve{"qq_ray_curve", {"radius", "sup"}, {}};

  bool none_found = false;
  for (const auto& x : grid.points()) {
    const auto [Q, Qstar] = assemble_blocks(eval_all(Qs, x));
    const auto c = linalg::pencil_bound(Q, Qstar, tol);
    if (!c) {
      res.witness_x = x;
      none_found = true;
      break;
    }
    res.c = std::max(res.c, *c);
  }

  std::map<long, std::vector<std::pair<double, double>>> per_ray;
  std::map<double, double> per_radius;
  if (!none_found) {
    for (const auto& rp : grid.ray_points()) {
      const auto [Q, Qstar] = assemble_blocks(eval_all(Qs, rp.x));
      const auto c = linalg::pencil_bound(Q, Qstar, tol);
      if (!c) {
        res.witness_x = rp.x;
        none_found = true;
        break;
      }
      res.c = std::max(res.c, *c);
      per_ray[rp.ray].push_back({rp.radius, *c});
      per_radius[rp.radius] = std::max(per_radius[rp.radius], *c);
    }
  }
  for (const auto& [radius, sup] : per_radius) res.ray_curve.rows.push_back({radius, sup});

  if (none_found) {
    res.verdict = Verdict::fail("(QQ)", 0.0, "no finite comparison constant (\"none\") at a point");
    return res;
  }
  const auto trend = ray_trend(per_ray);
  if (trend.divergent)
    res.verdict = Verdict::fail("(QQ)", res.c,
                                "c1 grows along ray " + std::to_string(trend.worst_ray) +
                                    " (log-log slope " + std::to_string(trend.slope) + ")");
  else
    res.verdict = Verdict::pass("(QQ)", res.c, "c1 = " + std::to_string(res.c));
  return res;
}

ComparabilityResult check_QI(const std::vector<MatFunc>& Qs, const GridSpec& grid) {
  if (Qs.empty()) throw std::invalid_argument("check_QI: no coefficients");
  ComparabilityResult res;
  res.ray_curve = Curve{"qi_ray_curve", {"radius", "sup"}, {}};

  auto lambda_max = [&](const std::vector<double>& x) {
    const auto [Q, Qstar] = assemble_blocks(eval_all(Qs, x));
    (void)Qstar;
    return linalg::herm_eig_bounds(Q).second;
  };
  for (const auto& x : grid.points()) res.c = std::max(res.c, lambda_max(x));

  std::map<long, std::vector<std::pair<double, double>>> per_ray;
  std::map<double, double> per_radius;
  for (const auto& rp : grid.ray_points()) {
    const double v = lambda_max(rp.x);
    res.c = std::max(res.c, v);
    per_ray[rp.ray].push_back({rp.radius, v});
    per_radius[rp.radius] = std::max(per_radius[rp.radius], v);
  }
  for (const auto& [radius, sup] : per_radius) res.ray_curve.rows.push_back({radius, sup});

  const auto trend = ray_trend(per_ray);
  if (trend.divergent)
    res.verdict = Verdict::fail("(QI)", res.c,
                                "lambda_max grows along ray " + std::to_string(trend.worst_ray) +
                                    " (log-log slope " + std::to_string(trend.slope) + ")");
  else
    res.verdict = Verdict::pass("(QI)", res.c, "c2 = " + std::to_string(res.c));
  return res;
}

// ---------------------------------------------------------------------------
// (diffdomin)

DominationResult check_poly_domination(const PolyMatrix& P1, const PolyMatrix& P2,
                                       const GridSpec& grid) {
  if (P1.k != 1 || P2.k != 1)
    throw std::invalid_argument("check_poly_domination: polynomials must be scalar (k = 1)");
  if (P1.m != grid.dim() || P2.m != grid.dim())
    throw std::invalid_argument("check_poly_domination: dimension mismatch");

  DominationResult res;
  res.ray_curve = Curve{"domination_ray_curve", {"radius", "sup"}, {}};
  auto ratio = [&](const std::vector<double>& x) {
    return std::abs(P2.eval_scalar(x)) / (1.0 + std::abs(P1.eval_scalar(x)));
  };
  for (const auto& x : grid.points()) res.c = std::max(res.c, ratio(x));

  std::map<long, std::vector<std::pair<double, double>>> per_ray;
  std::map<double, double> per_radius;
  for (const auto& rp : grid.ray_points()) {
    const double v = ratio(rp.x);
    res.c = std::max(res.c, v);
    per_ray[rp.ray].push_back({rp.radius, v});
    per_radius[rp.radius] = std::max(per_radius[rp.radius], v);
  }
  for (const auto& [radius, sup] : per_radius) res.ray_curve.rows.push_back({radius, sup});

  const auto trend = ray_trend(per_ray);
  if (trend.divergent) {
    res.divergent_ray = trend.worst_ray;
    res.verdict = Verdict::fail("(diffdomin)", res.c,
                                "ratio diverges along ray " + std::to_string(trend.worst_ray) +
                                    " (log-log slope " + std::to_string(trend.slope) + ")");
  } else {
    res.verdict = Verdict::pass("(diffdomin)", res.c, "c = " + std::to_string(res.c));
  }
  return res;
}

}  // namespace opdomain::diffop
