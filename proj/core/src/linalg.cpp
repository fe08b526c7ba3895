#include "opdomain/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <random>

namespace opdomain::linalg {

namespace {

constexpr long kSvdDim = 64;
constexpr long kMaxBisectionBand = 128;
constexpr long kDenseEigDim = 1024;  // fallback eigensolve cap for unbanded stalls

long detect_bandwidth(const Matrix& M) {
  long band = 0;
  for (long r = 0; r < M.rows(); ++r)
    for (long c = 0; c < M.cols(); ++c)
      if (M(r, c) != cplx(0.0, 0.0)) band = std::max(band, std::abs(r - c));
  return band;
}

// Banded matvec y = M x given band width p.
void band_matvec(const Matrix& M, long p, const Eigen::VectorXcd& x, Eigen::VectorXcd& y,
                 bool adjoint) {
  const long n = M.rows();
  y.setZero(n);
  for (long r = 0; r < n; ++r) {
    const long c0 = std::max(0L, r - p), c1 = std::min(n - 1, r + p);
    cplx acc(0.0, 0.0);
    if (!adjoint) {
      for (long c = c0; c <= c1; ++c) acc += M(r, c) * x(c);
    } else {
      for (long c = c0; c <= c1; ++c) acc += std::conj(M(c, r)) * x(c);
    }
    y(r) = acc;
  }
}

// Number of eigenvalues of the Hermitian banded matrix B that are < s,
// via the inertia of the LDL^H factorization of B - sI.  Breakdown (a
// near-zero pivot) is signalled so the caller can jitter s.
std::optional<long> band_inertia_below(const Matrix& B, long bw, double s) {
  const long n = B.rows();
  // lower band storage: col j, offsets 0..bw
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(bw + 1, n);
  double scale = 0.0;
  for (long j = 0; j < n; ++j) {
    for (long t = 0; t <= bw && j + t < n; ++t) {
      C(t, j) = B(j + t, j);
      scale = std::max(scale, std::abs(C(t, j)));
    }
    C(0, j) -= s;
  }
  scale = std::max(scale, std::abs(s));
  const double breakdown = 1e-14 * (scale > 0 ? scale : 1.0);
  long neg = 0;
  std::vector<cplx> l(bw + 1);
  for (long j = 0; j < n; ++j) {
    const double d = C(0, j).real();
    if (std::abs(d) < breakdown) return std::nullopt;
    if (d < 0) ++neg;
    const long reach = std::min(bw, n - 1 - j);
    for (long t = 1; t <= reach; ++t) l[t] = C(t, j) / d;
    for (long c = 1; c <= reach; ++c)
      for (long t2 = 0; t2 + c <= reach; ++t2)
        C(t2, j + c) -= l[c + t2] * std::conj(l[c]) * d;
  }
  return neg;
}

// lambda_max of Hermitian banded B by bisection on inertia counts.
double band_lambda_max(const Matrix& B, long bw) {
  const long n = B.rows();
  double radius = 0.0;  // Gershgorin bound on |lambda|
  for (long r = 0; r < n; ++r) {
    double row = 0.0;
    for (long c = std::max(0L, r - bw); c <= std::min(n - 1, r + bw); ++c)
      row += std::abs(B(r, c));
    radius = std::max(radius, row);
  }
  if (radius == 0.0) return 0.0;
  double lo = -radius, hi = radius * (1 + 1e-12);
  // invariant: at least one eigenvalue >= lo; all eigenvalues < hi
  for (int it = 0; it < 80 && hi - lo > 1e-14 * radius; ++it) {
    double mid = 0.5 * (lo + hi);
    std::optional<long> below;
    double jitter = 0.0;
    for (int attempt = 0; attempt < 6 && !below; ++attempt) {
      below = band_inertia_below(B, bw, mid + jitter);
      jitter = (jitter == 0.0 ? 1e-13 * radius : jitter * 16);
    }
    if (!below) break;  // persistent breakdown; keep current bracket
    if (*below == n)
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

}  // namespace

NormEstimate op_norm(const Matrix& M, double tol, long max_iter, unsigned seed) {
  if (tol <= 0) throw std::invalid_argument("op_norm: tol must be > 0");
  if (!M.allFinite()) throw std::invalid_argument("op_norm: matrix has non-finite entries");
  NormEstimate est;
  const long dim = std::max(M.rows(), M.cols());
  if (dim <= kSvdDim) {
    Eigen::JacobiSVD<Matrix> svd(M);
    est.value = M.size() == 0 ? 0.0 : svd.singularValues()(0);
    est.method = NormEstimate::Method::ExhaustiveSvd;
    est.converged = true;
    return est;
  }

  const double maxabs = M.cwiseAbs().maxCoeff();
  if (maxabs == 0.0) {
    est.converged = true;
    return est;
  }

  const long band = detect_bandwidth(M);
  const bool banded = band <= kMaxBisectionBand && M.rows() == M.cols();

  // seeded deterministic start: all-ones perturbed componentwise
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  Eigen::VectorXcd v(M.cols());
  for (long i = 0; i < M.cols(); ++i) v(i) = cplx(1.0 + u(rng), u(rng));
  v.normalize();

  Eigen::VectorXcd w(M.rows()), back(M.cols());
  double sigma = 0.0, prev = -1.0;
  long it = 0;
  for (; it < max_iter; ++it) {
    if (banded) {
      band_matvec(M, band, v, w, false);
      band_matvec(M, band, w, back, true);
    } else {
      w.noalias() = M * v;
      back.noalias() = M.adjoint() * w;
    }
    sigma = w.norm();
    const double bn = back.norm();
    if (bn == 0.0) break;
    v = back / bn;
    if (prev >= 0 && std::abs(sigma - prev) <= tol * std::max(sigma, 1e-300)) {
      ++it;
      break;
    }
    prev = sigma;
  }
  est.value = sigma;
  est.iterations = it;
  // A stalled iteration can satisfy the successive-change test while still far
  // from the top singular value; validate with the eigen residual.
  if (banded) {
    band_matvec(M, band, v, w, false);
    band_matvec(M, band, w, back, true);
  } else {
    w.noalias() = M * v;
    back.noalias() = M.adjoint() * w;
  }
  const double s2 = sigma * sigma;
  est.residual = s2 > 0 ? (back - s2 * v).norm() / s2 : 0.0;
  if (est.residual <= 1e3 * tol && it < max_iter) {
    est.converged = true;
    return est;
  }
  if (banded) {
    Matrix B = Matrix::Zero(M.rows(), M.cols());
    for (long r = 0; r < M.rows(); ++r)
      for (long c = std::max(0L, r - 2 * band); c <= std::min(M.cols() - 1, r + 2 * band); ++c) {
        cplx acc(0.0, 0.0);
        const long j0 = std::max({0L, r - band, c - band});
        const long j1 = std::min({M.rows() - 1, r + band, c + band});
        for (long j = j0; j <= j1; ++j) acc += std::conj(M(j, r)) * M(j, c);
        B(r, c) = acc;
      }
    const double lam = band_lambda_max(B, 2 * band);
    est.value = lam > 0 ? std::sqrt(lam) : 0.0;
    est.method = NormEstimate::Method::BandBisection;
    est.residual = 0.0;
    est.converged = true;
    return est;
  }
  if (dim <= kDenseEigDim && M.rows() == M.cols()) {
    // unbanded stall (clustered top of spectrum): exact eigensolve of M^H M
    Eigen::SelfAdjointEigenSolver<Matrix> es(M.adjoint() * M, Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues()(es.eigenvalues().size() - 1);
    est.value = lam > 0 ? std::sqrt(lam) : 0.0;
    est.method = NormEstimate::Method::ExhaustiveSvd;
    est.residual = 0.0;
    est.converged = true;
    return est;
  }
  est.converged = false;
  return est;
}

std::pair<double, double> herm_eig_bounds(const Matrix& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("herm_eig_bounds: non-square input");
  const double scale = M.cwiseAbs().maxCoeff();
  const double dev = (M - M.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("herm_eig_bounds: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

std::optional<double> pencil_bound(const Matrix& A, const Matrix& B, double tol) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw std::invalid_argument("pencil_bound: dimension mismatch");
  const long n = A.rows();
  if (n == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> esA(A);
  Eigen::SelfAdjointEigenSolver<Matrix> esB(B);
  const double sA = std::max(esA.eigenvalues().cwiseAbs().maxCoeff(), 0.0);
  const double sB = std::max(esB.eigenvalues().cwiseAbs().maxCoeff(), 0.0);
  if (esA.eigenvalues()(0) < -tol * std::max(sA, 1.0) ||
      esB.eigenvalues()(0) < -tol * std::max(sB, 1.0))
    throw std::invalid_argument("pencil_bound: input not positive semidefinite");
  if (sA == 0.0 && sB == 0.0) return 1.0;
  if (sA == 0.0 || sB == 0.0) return std::nullopt;

  const double thr = std::max(tol, 1e-12) * sA;
  std::vector<long> range_idx;
  for (long i = 0; i < n; ++i)
    if (esA.eigenvalues()(i) > thr) range_idx.push_back(i);
  const long r = static_cast<long>(range_idx.size());
  Matrix Ur(n, r);
  Eigen::VectorXd lam(r);
  for (long i = 0; i < r; ++i) {
    Ur.col(i) = esA.eigenvectors().col(range_idx[i]);
    lam(i) = esA.eigenvalues()(range_idx[i]);
  }
  if (r < n) {
    Matrix Un(n, n - r);
    long j = 0;
    for (long i = 0; i < n; ++i)
      if (esA.eigenvalues()(i) <= thr) Un.col(j++) = esA.eigenvectors().col(i);
    // B must vanish on ker A (blocks and cross terms) or B <= cA is impossible
    const double kerblock = (Un.adjoint() * B * Un).cwiseAbs().maxCoeff();
    const double cross = (Ur.size() ? (Ur.adjoint() * B * Un).cwiseAbs().maxCoeff() : 0.0);
    if (kerblock > std::max(tol, 1e-10) * sB || cross > std::max(tol, 1e-10) * sB)
      return std::nullopt;
  }
  // W = Lam^{-1/2} Ur^H B Ur Lam^{-1/2}; need all eigenvalues in [1/c, c]
  Matrix W = Ur.adjoint() * B * Ur;
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < r; ++j) W(i, j) /= std::sqrt(lam(i) * lam(j));
  Eigen::SelfAdjointEigenSolver<Matrix> esW((W + W.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  const double mu_min = esW.eigenvalues()(0);
  const double mu_max = esW.eigenvalues()(r - 1);
  if (mu_min <= std::max(tol, 1e-12)) return std::nullopt;  // c^{-1}A <= B impossible
  return std::max({mu_max, 1.0 / mu_min, 1.0});
}

Matrix resolvent_diag(const core::DiagonalSpec& c, cplx z, const core::Window& w, double eps) {
  const long n = w.size();
  Matrix M = Matrix::Zero(n, n);
  for (long i = 0; i < n; ++i) {
    const double ck = c.at(w.lo + i);
    const cplx denom = cplx(ck, 0.0) - z;
    if (std::abs(denom) < eps)
      throw SingularResolventError("resolvent_diag: z within " + std::to_string(eps) +
                                   " of spectrum at k=" + std::to_string(w.lo + i));
    M(i, i) = 1.0 / denom;
  }
  return M;
}

SchurBound schur_bound(const core::EntryGen& kernel_abs, const core::DiagonalSpec& weights,
                       const core::Window& probe) {
  SchurBound out;
  out.note = "certificate (heuristic tail)";
  const long lo = probe.lo, hi = probe.hi;
  const long mid = lo + (hi - lo) / 2;

  auto sup_row = [&](long khi, long lhi) {
    double sup = 0.0;
    for (long k = lo; k <= khi; ++k) {
      const double wk = weights.at(k);
      if (wk <= 0) throw std::invalid_argument("schur_bound: weights must be positive");
      double sum = 0.0;
      for (long l = lo; l <= lhi; ++l) {
        const double v = kernel_abs(k, l).real();
        if (v < 0) throw std::invalid_argument("schur_bound: kernel must be nonnegative");
        sum += v * weights.at(l);
      }
      sup = std::max(sup, sum / wk);
    }
    return sup;
  };
  auto sup_col = [&](long khi, long lhi) {
    double sup = 0.0;
    for (long l = lo; l <= lhi; ++l) {
      const double wl = weights.at(l);
      double sum = 0.0;
      for (long k = lo; k <= khi; ++k) sum += kernel_abs(k, l).real() * weights.at(k);
      sup = std::max(sup, sum / wl);
    }
    return sup;
  };

  const double row_half = sup_row(mid, mid), row_full = sup_row(hi, hi);
  const double col_half = sup_col(mid, mid), col_full = sup_col(hi, hi);
  out.bound = std::sqrt(row_full * col_full);
  const double growth =
      std::max(row_full / std::max(row_half, 1e-300), col_full / std::max(col_half, 1e-300));
  out.conclusive = (row_full == 0.0) || growth <= 1.2;
  if (!out.conclusive) out.note = "inconclusive: row sums still growing on probe";
  return out;
}

}  // namespace opdomain::linalg
