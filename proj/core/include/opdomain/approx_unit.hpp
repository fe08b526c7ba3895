#pragma once

// Approximate-unit families for a selfadjoint diagonal S = diag(c_k) and the
// commutator-norm machinery around them: per-n commutator sup-norm curves,
// the resolvent-power norm inequality, WOT convergence probes, adjoint
// symmetry of commutator norms, and domination estimates.

#include <vector>

#include "opdomain/core.hpp"
#include "opdomain/linalg.hpp"
#include "opdomain/report.hpp"

namespace opdomain::approx_unit {

using core::cplx;
using core::DiagonalSpec;
using core::Matrix;
using core::OperatorSpec;
using core::Window;
using linalg::NormEstimate;
using report::Curve;
using report::Outcome;
using report::Verdict;

enum class UnitKind { ResolventPower, SpectralProjection };

struct UnitFamily {
  UnitKind kind = UnitKind::ResolventPower;
  DiagonalSpec c;
  long m = 1;  // resolvent power
  std::vector<long> n_values = {1, 2, 4, 8, 16, 32, 64, 128, 256};
};

// Diagonal entries of the unit T_n on the window.
//   resolvent-power:     t_k = (n / (n - i c_k))^m   (modulus n^m / |c_k - i n|^m)
//   spectral-projection: t_k = 1 if |c_k| <= n else 0
Eigen::VectorXcd build_unit(UnitKind kind, const DiagonalSpec& c, long m, long n,
                            const Window& w);

// Exact section of ad(T, A) = TA - AT for diagonal T: entry (j,l) is
// (t_j - t_l) a_{j,l}; no padding needed since diagonal T preserves the window.
Matrix commutator_section(const Eigen::VectorXcd& t, const OperatorSpec& a, const Window& w);

struct CommutatorPoint {
  long n = 0;
  double norm = 0.0;
  long window = 0;     // window size at which the estimate was accepted
  bool converged = false;
};

struct CommutatorCurve {
  std::vector<CommutatorPoint> points;
  double sup = 0.0;  // max of per-n values
  Outcome bounded = Outcome::Inconclusive;
  std::string detail;
  Curve curve() const;  // columns: n, window, norm, converged
};

// Per-n commutator norms ||ad(T_n, A)|| on a window ladder; a per-n estimate
// is accepted when two successive windows agree to 1%.
CommutatorCurve komintro_check(const UnitFamily& family, const OperatorSpec& a,
                               const std::vector<Window>& ladder, double tol = 1e-10,
                               long max_iter = 10000, unsigned seed = 0);

struct Sqrt3Result {
  Verdict verdict;
  double max_ratio = 0.0;
  long violations = 0;
};

// Verifies n/(|ni - c_k| |ni - c_l|) <= sqrt(3)/(1 + |c_k| + |c_l|) on the
// full sample grid (n, k, l) in [1, n_max] x [1, k_max] x [1, l_max].
Sqrt3Result sqrt3_inequality_check(const DiagonalSpec& c, long n_max, long k_max, long l_max);

struct LemmaBoundResult {
  Verdict verdict;
  double lhs = 0.0;   // ||ad((S-z)^{-m}, A)||
  double rhs = 0.0;   // m ||(S-z)^{-1}||^{m-1} ||ad((S-z)^{-1}, A)||
  double slack = 0.0; // rhs - lhs
};

LemmaBoundResult lemma_bound_check(const OperatorSpec& a, const DiagonalSpec& c, cplx z, long m,
                                   const std::vector<Window>& windows, double tol = 1e-10,
                                   unsigned seed = 0);

using SparseVec = std::vector<std::pair<long, cplx>>;  // finitely supported

struct WotResult {
  std::vector<std::pair<long, double>> deviations;  // (n, max pairwise deviation)
  Verdict verdict;  // decays to <= 1e-6 by the largest n
};

WotResult wot_convergence_check(const UnitFamily& family,
                                const std::vector<SparseVec>& test_vectors, const Window& w);

// Finite shadow of the adjoint-commutator equivalence:
// ||ad(T,A)|| = ||ad(T^H, A^H)|| within 1e-10 relative on sections.
Verdict komcond_adjoint_symmetry(const Matrix& T, const Matrix& A, double tol = 1e-10,
                                 long max_iter = 10000, unsigned seed = 0);

struct DominationEstimate {
  double c = 0.0;     // max of ||ad(S,A) f|| / (||f|| + ||S f||) over the sample
  bool stabilized = false;
  Curve curve;        // window size -> estimate
};

// Estimates the smallest domination constant on basis vectors supported in the
// window interiors; reports whether the estimate stabilizes as windows grow.
DominationEstimate domination_check(const DiagonalSpec& c, const OperatorSpec& a,
                                    const std::vector<Window>& windows);

}  // namespace opdomain::approx_unit
