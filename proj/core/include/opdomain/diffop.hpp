#pragma once

// Hypothesis checks for first-order differential operators with matrix
// coefficients: formal-normality identities, local Hölder estimation, bounded
// coefficient derivatives, the Gram-type block matrices Q(x) and Q^{(*)}(x)
// with their pencil comparison, and polynomial domination.

#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "opdomain/core.hpp"
#include "opdomain/linalg.hpp"
#include "opdomain/report.hpp"

namespace opdomain::diffop {

using core::cplx;
using core::Matrix;
using report::Curve;
using report::Outcome;
using report::Verdict;

// Multivariate polynomial in x_1..x_m with complex k x k matrix coefficients,
// stored as a monomial (exponent vector) -> matrix map.
struct PolyMatrix {
  long m = 0;  // number of variables
  long k = 0;  // channel count
  std::map<std::vector<long>, Matrix> terms;

  static PolyMatrix constant(long m, const Matrix& coeff);
  static PolyMatrix zero(long m, long k);
  // scalar polynomial (k = 1) from a monomial -> coefficient map
  static PolyMatrix scalar(long m, const std::map<std::vector<long>, cplx>& coeffs);

  void add_term(const std::vector<long>& expo, const Matrix& coeff);
  Matrix eval(const std::vector<double>& x) const;
  cplx eval_scalar(const std::vector<double>& x) const;  // requires k = 1
  PolyMatrix partial(long axis) const;                   // d/dx_axis, axis 1-based
  long total_degree() const;                             // -1 for the zero polynomial
  void validate() const;                                 // throws std::invalid_argument
};

// Matrix-valued function known only through an evaluation callback.
struct SampledMatFunc {
  long m = 0;
  long k = 0;
  std::function<Matrix(const std::vector<double>&)> f;
  Matrix eval(const std::vector<double>& x) const;
};

using MatFunc = std::variant<PolyMatrix, SampledMatFunc>;

long func_m(const MatFunc& q);
long func_k(const MatFunc& q);
Matrix func_eval(const MatFunc& q, const std::vector<double>& x);

struct Axis {
  double lo = -10.0, hi = 10.0;
  long count = 41;
};

// Axis-aligned tensor grid plus radial rays for asymptotic sampling.
struct GridSpec {
  std::vector<Axis> axes;
  std::vector<std::vector<double>> ray_directions;  // unit vectors
  std::vector<double> ray_radii = {10.0, 30.0, 100.0, 300.0};

  // [-10,10]^m with 41 points per axis, 2m axis rays, 2^m diagonal rays
  static GridSpec default_for(long m);
  long dim() const;
  void validate() const;
  std::vector<std::vector<double>> points() const;  // tensor grid, row-major
  // (point, radius, ray index) for every ray/radius combination
  struct RayPoint {
    std::vector<double> x;
    double radius;
    long ray;
  };
  std::vector<RayPoint> ray_points() const;
};

struct AfnormResult {
  Verdict alpha_identity;  // alpha_l^* alpha_r = alpha_l alpha_r^*
  Verdict q_normality;     // Q(x) Q^*(x) = Q^*(x) Q(x) pointwise
  Verdict mixed_identity;  // alpha_l^* Q(x) = alpha_l Q^*(x) pointwise
  Outcome overall = Outcome::Inconclusive;
  std::vector<Verdict> all() const { return {alpha_identity, q_normality, mixed_identity}; }
};

// The three (Afnorm) identities; pass iff each max residual <= 1e-10 * scale.
AfnormResult check_afnorm(const std::vector<Matrix>& alphas, const MatFunc& Q,
                          const GridSpec& grid);

struct HolderEstimate {
  double n = 0;      // ball radius
  double b_hat = 0;  // exponent estimate, clipped to (0, 1]
  double sup = 0;    // empirical sup of |Q(x)-Q(y)| / |x-y|^b_hat
};

struct HolderResult {
  std::vector<HolderEstimate> per_radius;
  Verdict verdict;  // heuristic: pass iff sup finite and b_hat > 0.05 on every radius
};

// Envelope regression of log|Q(x)-Q(y)| against log|x-y| on small separations;
// intrinsically empirical, so the verdict is labeled heuristic.
HolderResult check_holder(const MatFunc& Q, const std::vector<double>& radii = {1.0},
                          long pairs_per_radius = 4000, unsigned seed = 0);

struct QLResult {
  Verdict verdict;
  std::vector<std::vector<long>> offending;  // monomials of total degree >= 2
  bool heuristic = false;                    // sampled path (finite differences)
};

// Bounded first and second partials.  Polynomial path is exact: pass iff every
// Q_j has total degree <= 1.  Sampled path estimates finite-difference partial
// sups on the grid and is flagged heuristic.
QLResult check_QL(const std::vector<MatFunc>& Qs, const GridSpec& grid);

// Block matrices Q(x)_{r,l} = Q_r^*(x) Q_l(x) and Q^{(*)}(x)_{r,l} =
// Q_r(x) Q_l^*(x) from the m coefficient values at a point; both Hermitian PSD.
std::pair<Matrix, Matrix> assemble_blocks(const std::vector<Matrix>& q_values);

struct ComparabilityResult {
  Verdict verdict;
  double c = 0.0;  // sup of the per-point bound
  std::optional<std::vector<double>> witness_x;
  Curve ray_curve;  // columns: radius, sup over rays
};

// (QQ): smallest c1 with c1^{-1} Q(x) <= Q^{(*)}(x) <= c1 Q(x) over the grid;
// fails when a point admits no such constant or the sup grows along rays.
ComparabilityResult check_QQ(const std::vector<MatFunc>& Qs, const GridSpec& grid,
                             double tol = 1e-10);

// (QI): c2 = sup over the grid of lambda_max(Q(x)); fails on ray growth.
ComparabilityResult check_QI(const std::vector<MatFunc>& Qs, const GridSpec& grid);

struct DominationResult {
  Verdict verdict;
  double c = 0.0;  // sup of |P2| / (1 + |P1|)
  Curve ray_curve;
  std::optional<long> divergent_ray;  // index into grid.ray_directions
};

// (diffdomin): |P2(z)| <= c (1 + |P1(z)|) over the grid and rays; fails with a
// divergent-ray report when the ray values grow instead of stabilizing.
DominationResult check_poly_domination(const PolyMatrix& P1, const PolyMatrix& P2,
                                       const GridSpec& grid);

}  // namespace opdomain::diffop
