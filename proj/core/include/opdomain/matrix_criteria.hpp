#pragma once

// Hypothesis checks and the decision pipeline for essential H-selfadjointness
// of infinite band-matrix operators: the (h1)-(h4) pairing conditions, the
// (AG) symmetry identity, the (M1)/(M2) boundedness evidence, the (modakl)
// entry-growth shortcut, and the combined certificate.

#include <variant>
#include <vector>

#include "opdomain/core.hpp"
#include "opdomain/linalg.hpp"
#include "opdomain/report.hpp"

namespace opdomain::matrix_criteria {

using core::cplx;
using core::DiagonalSpec;
using core::EntryGen;
using core::Matrix;
using core::OperatorSpec;
using core::PairingSpec;
using core::Window;
using report::Curve;
using report::Outcome;
using report::Verdict;

struct CriteriaConfig {
  std::vector<long> sizes = {64, 128, 256, 512, 1024, 2048, 4096};  // window ladder
  double flatness = 0.01;      // norm-curve convergence threshold (last doubling)
  double tol = 1e-10;
  long max_iter = 10000;
  unsigned seed = 0;
  std::vector<long> n_values = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  bool schur_certificate = true;
};

struct HConditionsResult {
  Verdict h1, h2, h3, h4;
  double s_g_estimate = 0.0;
  Curve h_norm_curve;  // window size -> op_norm of H sections
  std::vector<Verdict> all() const { return {h1, h2, h3, h4}; }
};

HConditionsResult check_h_conditions(const PairingSpec& pair, const std::vector<Window>& windows,
                                     const CriteriaConfig& cfg = {});

// Residual of the H-symmetry identity
//   sum_{q=-p}^{p} a_{k,l+q} g_{l+q,l} = sum_{q=-p}^{p} g_{k,k+q} conj(a_{l,k+q})
// evaluated exactly on the window (finite sums of width 2p+1).
Verdict check_AG(const OperatorSpec& a, const PairingSpec& pair, const Window& w);

struct BoundednessEvidence {
  Verdict verdict;
  Curve norm_curve;  // columns: size, norm, converged
  std::optional<linalg::SchurBound> schur;
};

// Kernel |a_{k,l+q}| / (1 + |c_l|^m), with a_{k,r} := 0 for r <= 0.
BoundednessEvidence check_M1(const OperatorSpec& a, const DiagonalSpec& c, long m, long q,
                             const std::vector<long>& sizes, const CriteriaConfig& cfg = {});

// Kernel |a_{k,l}| |c_k - c_l| / (1 + |c_k| + |c_l|).
BoundednessEvidence check_M2(const OperatorSpec& a, const DiagonalSpec& c,
                             const std::vector<long>& sizes, const CriteriaConfig& cfg = {});

struct ModaklResult {
  Verdict verdict;
  long suggested_m = 0;     // smallest integer > s + 3/2
  double rowsum_slope = 0;  // log-log slope of column sums of |a|^2
};

// Entrywise check |a_{k,l}| <= d(1+k+l)/|k-l|^alpha (k != l), d(k+1)^s (k = l),
// plus a row-sum growth fit.  Requires alpha > 2.
ModaklResult check_modakl(const OperatorSpec& a, double d, double s, double alpha,
                          const Window& w);

struct ModaklParams {
  double d = 1, s = 0, alpha = 3;
};

struct HSAResult {
  std::vector<Verdict> verdicts;  // (h1)..(h4), (AG), (M1 q), (M2) or (modakl), (komintro)
  std::vector<Curve> curves;
  long suggested_m = 0;
  Outcome overall = Outcome::Inconclusive;
  std::string conclusion;
};

// Full pipeline: pairing conditions, (AG), boundedness of (M1) for q = -p..p
// and (M2) (or the (modakl) shortcut), then the commutator sup-norm check with
// resolvent-power units built on c.
HSAResult certify_h_selfadjoint(const OperatorSpec& a, const PairingSpec& pair,
                                const DiagonalSpec& c,
                                const std::variant<long, ModaklParams>& m_or_modakl,
                                const CriteriaConfig& cfg = {});

}  // namespace opdomain::matrix_criteria
