#pragma once

// Finite-dimensional numerical kernels: operator norms, Hermitian eigenvalue
// bounds, PSD pencils, diagonal resolvents, Schur-test bounds.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>

#include "opdomain/core.hpp"

namespace opdomain::linalg {

using core::cplx;
using core::Matrix;

struct NormEstimate {
  enum class Method { PowerIteration, ExhaustiveSvd, BandBisection };
  double value = 0.0;
  long iterations = 0;
  double residual = 0.0;
  Method method = Method::PowerIteration;
  bool converged = false;
};

// Largest singular value.  Exhaustive SVD for dims <= 64; otherwise seeded
// power iteration on M^H M, escalating to a banded-bisection eigensolve when
// the iteration stalls on a clustered spectrum and the matrix is banded.
// A non-converged estimate is flagged, never silently wrong.
NormEstimate op_norm(const Matrix& M, double tol = 1e-10, long max_iter = 10000,
                     unsigned seed = 0);

// Extreme eigenvalues of a Hermitian matrix.  Throws on non-Hermitian input.
std::pair<double, double> herm_eig_bounds(const Matrix& M);

// Smallest c >= 1 with c^{-1} A <= B <= c A for Hermitian PSD A, B, or nullopt
// when the ranges differ and no such c exists.
std::optional<double> pencil_bound(const Matrix& A, const Matrix& B, double tol = 1e-10);

class SingularResolventError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Diagonal section of (S - z)^{-1} for S = diag(c_k); requires
// min_k |c_k - z| >= eps over the window.
Matrix resolvent_diag(const core::DiagonalSpec& c, cplx z, const core::Window& w,
                      double eps = 1e-12);

struct SchurBound {
  bool conclusive = false;   // false = divergent row sums on the probe
  double bound = 0.0;        // geometric mean of row and column bounds
  std::string note;          // always flagged as a heuristic-tail certificate
};

// Weighted row/column-sum bound for a nonnegative kernel, estimated on the
// probe window.  Certifies boundedness beyond truncation evidence, modulo the
// declared tail-decay assumption.
SchurBound schur_bound(const core::EntryGen& kernel_abs, const core::DiagonalSpec& weights,
                       const core::Window& probe);

}  // namespace opdomain::linalg
