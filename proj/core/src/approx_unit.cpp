#include "opdomain/approx_unit.hpp"

#include <cmath>

namespace opdomain::approx_unit {

namespace {

cplx cpow_int(cplx base, long e) {
  cplx acc(1.0, 0.0);
  for (long i = 0; i < e; ++i) acc *= base;
  return acc;
}

// log-log slope of y against x over positive samples
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

}  // namespace

Eigen::VectorXcd build_unit(UnitKind kind, const DiagonalSpec& c, long m, long n,
                            const Window& w) {
  if (n < 1) throw std::invalid_argument("build_unit: n must be >= 1");
  if (kind == UnitKind::ResolventPower && m < 1)
    throw std::invalid_argument("build_unit: resolvent power m must be >= 1");
  Eigen::VectorXcd t(w.size());
  for (long i = 0; i < w.size(); ++i) {
    const double ck = c.at(w.lo + i);
    if (kind == UnitKind::ResolventPower) {
      // phase chosen so that WOT lim T_n = I holds literally; the modulus
      // agrees with n^m |c_k - i n|^{-m}
      t(i) = cpow_int(cplx(n, 0.0) / cplx(n, -ck), m);
    } else {
      t(i) = std::abs(ck) <= static_cast<double>(n) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    }
  }
  return t;
}

Matrix commutator_section(const Eigen::VectorXcd& t, const OperatorSpec& a, const Window& w) {
  if (t.size() != w.size())
    throw std::invalid_argument("commutator_section: diagonal length != window size");
  const long n = w.size();
  Matrix M = Matrix::Zero(n, n);
  const auto band = a.band();  // banded a: skip the vanishing bulk
  for (long r = 0; r < n; ++r) {
    const long c0 = band ? std::max(0L, r - *band) : 0;
    const long c1 = band ? std::min(n - 1, r + *band) : n - 1;
    for (long c = c0; c <= c1; ++c) M(r, c) = (t(r) - t(c)) * a.at(w.lo + r, w.lo + c);
  }
  return M;
}

Curve CommutatorCurve::curve() const {
  Curve c{"commutator_curve", {"n", "window", "norm", "converged"}, {}};
  for (const auto& p : points)
    c.rows.push_back({static_cast<double>(p.n), static_cast<double>(p.window), p.norm,
                      p.converged ? 1.0 : 0.0});
  return c;
}

CommutatorCurve komintro_check(const UnitFamily& family, const OperatorSpec& a,
                               const std::vector<Window>& ladder, double tol, long max_iter,
                               unsigned seed) {
  CommutatorCurve out;
  bool all_converged = true;
  for (long n : family.n_values) {
    CommutatorPoint pt;
    pt.n = n;
    double prev = -1.0;
    for (const auto& w : ladder) {
      const auto t = build_unit(family.kind, family.c, family.m, n, w);
      const auto est = linalg::op_norm(commutator_section(t, a, w), tol, max_iter, seed);
      pt.norm = est.value;
      pt.window = w.size();
      if (prev >= 0 && est.converged &&
          std::abs(est.value - prev) <= 0.01 * std::max(est.value, 1e-300)) {
        pt.converged = true;
        break;
      }
      prev = est.converged ? est.value : -1.0;
    }
    all_converged = all_converged && pt.converged;
    out.points.push_back(pt);
    out.sup = std::max(out.sup, pt.norm);
  }
  // trend over n decides boundedness; fitted on the tail half of the curve so
  // that saturation toward a finite sup is not mistaken for growth
  std::vector<std::pair<double, double>> pts;
  const std::size_t tail_start = out.points.size() > 4 ? out.points.size() / 2 : 0;
  for (std::size_t i = tail_start; i < out.points.size(); ++i)
    pts.push_back({static_cast<double>(out.points[i].n), out.points[i].norm});
  const double slope = loglog_slope(pts);
  if (slope > 0.1) {
    out.bounded = Outcome::Fail;
    out.detail = "per-n commutator norms grow (log-log slope " + std::to_string(slope) + ")";
  } else if (!all_converged) {
    out.bounded = Outcome::Inconclusive;
    out.detail = "per-n window curves did not all converge";
  } else {
    out.bounded = Outcome::Pass;
    out.detail = "sup over n of converged estimates: " + std::to_string(out.sup);
  }
  return out;
}

Sqrt3Result sqrt3_inequality_check(const DiagonalSpec& c, long n_max, long k_max, long l_max) {
  Sqrt3Result res;
  const double sqrt3 = std::sqrt(3.0);
  std::vector<double> cv(static_cast<std::size_t>(std::max(k_max, l_max)) + 1);
  for (long k = 1; k <= std::max(k_max, l_max); ++k) cv[k] = c.at(k);
  for (long n = 1; n <= n_max; ++n) {
    const double n2 = static_cast<double>(n) * n;
    for (long k = 1; k <= k_max; ++k) {
      const double dk = std::sqrt(n2 + cv[k] * cv[k]);
      for (long l = 1; l <= l_max; ++l) {
        const double lhs = n / (dk * std::sqrt(n2 + cv[l] * cv[l]));
        const double rhs = sqrt3 / (1.0 + std::abs(cv[k]) + std::abs(cv[l]));
        const double ratio = lhs / rhs;
        if (ratio > res.max_ratio) res.max_ratio = ratio;
        if (ratio > 1.0 + 1e-12) ++res.violations;
      }
    }
  }
  if (res.violations == 0)
    res.verdict = Verdict::pass("(sqrt3)", res.max_ratio, "no violations on the sample grid");
  else
    res.verdict = Verdict::fail("(sqrt3)", res.max_ratio,
                                std::to_string(res.violations) + " violations");
  return res;
}

LemmaBoundResult lemma_bound_check(const OperatorSpec& a, const DiagonalSpec& c, cplx z, long m,
                                   const std::vector<Window>& windows, double tol,
                                   unsigned seed) {
  if (m < 1) throw std::invalid_argument("lemma_bound_check: m must be >= 1");
  if (z.imag() == 0.0) throw std::invalid_argument("lemma_bound_check: z must be off the real axis");
  LemmaBoundResult res;
  bool ok = true;
  for (const auto& w : windows) {
    Eigen::VectorXcd t1(w.size()), tm(w.size());
    double res_norm = 0.0;  // ||(S-z)^{-1}|| on the window
    for (long i = 0; i < w.size(); ++i) {
      const cplx r = 1.0 / (cplx(c.at(w.lo + i), 0.0) - z);
      t1(i) = r;
      tm(i) = cpow_int(r, m);
      res_norm = std::max(res_norm, std::abs(r));
    }
    const double lhs = linalg::op_norm(commutator_section(tm, a, w), tol, 10000, seed).value;
    const double first = linalg::op_norm(commutator_section(t1, a, w), tol, 10000, seed).value;
    const double rhs = m * std::pow(res_norm, m - 1) * first;
    res.lhs = std::max(res.lhs, lhs);
    res.rhs = std::max(res.rhs, rhs);
    if (lhs > rhs * (1.0 + 1e-8)) ok = false;
  }
  res.slack = res.rhs - res.lhs;
  res.verdict = ok ? Verdict::pass("(orazoraz)", res.slack, "resolvent-power commutator bound holds")
                   : Verdict::fail("(orazoraz)", res.slack, "bound violated on a window");
  return res;
}

WotResult wot_convergence_check(const UnitFamily& family,
                                const std::vector<SparseVec>& test_vectors, const Window& w) {
  WotResult res;
  for (const auto& v : test_vectors)
    for (const auto& [idx, val] : v)
      if (idx < w.lo || idx > w.hi)
        throw std::invalid_argument("wot_convergence_check: vector support outside window");
  for (long n : family.n_values) {
    const auto t = build_unit(family.kind, family.c, family.m, n, w);
    double maxdev = 0.0;
    for (const auto& f : test_vectors) {
      for (const auto& g : test_vectors) {
        cplx tfg(0.0, 0.0), fg(0.0, 0.0);
        // <T_n f, g> and <f, g> over the common support
        for (const auto& [ki, fv] : f)
          for (const auto& [kj, gv] : g)
            if (ki == kj) {
              tfg += t(ki - w.lo) * fv * std::conj(gv);
              fg += fv * std::conj(gv);
            }
        maxdev = std::max(maxdev, std::abs(tfg - fg));
      }
    }
    res.deviations.push_back({n, maxdev});
  }
  const double last = res.deviations.empty() ? 0.0 : res.deviations.back().second;
  res.verdict = last <= 1e-6
                    ? Verdict::pass("(WOT)", last, "deviation decays below 1e-6")
                    : Verdict::inconclusive("(WOT)", last, "deviation still above 1e-6");
  return res;
}

Verdict komcond_adjoint_symmetry(const Matrix& T, const Matrix& A, double tol, long max_iter,
                                 unsigned seed) {
  const Matrix c1 = T * A - A * T;
  const Matrix c2 = T.adjoint() * A.adjoint() - A.adjoint() * T.adjoint();
  const double n1 = linalg::op_norm(c1, tol, max_iter, seed).value;
  const double n2 = linalg::op_norm(c2, tol, max_iter, seed).value;
  const double rel = std::abs(n1 - n2) / std::max({n1, n2, 1e-300});
  if (n1 == 0.0 && n2 == 0.0) return Verdict::pass("(combdd<=>combddstar)", 0.0, "both zero");
  return rel <= 1e-10
             ? Verdict::pass("(combdd<=>combddstar)", rel, "adjoint commutator norms agree")
             : Verdict::fail("(combdd<=>combddstar)", rel, "norms disagree");
}

DominationEstimate domination_check(const DiagonalSpec& c, const OperatorSpec& a,
                                    const std::vector<Window>& windows) {
  DominationEstimate res;
  res.curve = Curve{"domination", {"window", "c_estimate"}, {}};
  const long p = a.band().value_or(0);
  double prev = -1.0;
  for (const auto& w : windows) {
    Eigen::VectorXcd cs(w.size());
    for (long i = 0; i < w.size(); ++i) cs(i) = cplx(c.at(w.lo + i), 0.0);
    const Matrix ad = commutator_section(cs, a, w);
    double best = 0.0;
    // ratio on basis vectors supported in the interior (band-exact columns)
    for (long i = p; i < w.size() - p; ++i) {
      const double num = ad.col(i).norm();
      const double den = 1.0 + std::abs(cs(i));
      best = std::max(best, num / den);
    }
    res.curve.rows.push_back({static_cast<double>(w.size()), best});
    res.stabilized = prev >= 0 && best <= prev * 1.01 + 1e-12;
    prev = best;
    res.c = std::max(res.c, best);
  }
  return res;
}

}  // namespace opdomain::approx_unit
