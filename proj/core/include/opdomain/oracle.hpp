#pragma once

// Independent desk-scale verifiers that cross-check the criteria on concrete
// instances: the exact H-symmetry residual, the classical Jacobi limit-point
// probe, graph-norm ratio probes, and resolvent-commutation decay.

#include <functional>
#include <optional>
#include <vector>

#include "opdomain/core.hpp"
#include "opdomain/linalg.hpp"
#include "opdomain/report.hpp"

namespace opdomain::oracle {

using core::cplx;
using core::DiagonalSpec;
using core::Matrix;
using core::OperatorSpec;
using core::PairingSpec;
using core::Window;
using report::Curve;
using report::Verdict;

enum class Trend { Bounded, Growing, Decaying };

std::string to_string(Trend t);

struct ProbeResult {
  std::string quantity;
  std::vector<std::pair<double, double>> values;  // (size, value)
  Trend trend = Trend::Bounded;                   // log-log slope thresholds +-0.1
  std::string conclusion;
};

// ||H A - A^H H||_max on the exact interior window; the equivalent matrix
// reformulation of the (AG) identity.
double finite_h_symmetry_residual(const OperatorSpec& a, const PairingSpec& pair,
                                  const Window& w);

// Three-term recurrence offdiag_{k-1} u_{k-1} + diag_k u_k + offdiag_k u_{k+1}
// = z u_k from u_1 = 1; growing partial sums of |u_k|^2 are limit-point
// evidence (classical criterion, outside the scope of the certified
// hypotheses).  Overflow-safe via log-domain rescaling.
ProbeResult jacobi_limit_point_probe(const std::function<double(long)>& diag,
                                     const std::function<double(long)>& offdiag,
                                     cplx z = cplx(0.0, 1.0),
                                     const std::vector<long>& sizes = {256, 1024, 4096, 16384});

struct GraphNormRatios {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::optional<double> q_hat;  // (ratio)^2 when the spread is <= 1 + 1e-8
  bool infinite = false;        // some Af = 0 with A^H f != 0
  std::string conclusion;
};

// Ratios ||A^H f|| / ||A f|| over probe vectors supported in the interior of
// the window; a constant ratio is q-formal-normality evidence.
GraphNormRatios graph_norm_ratio_probe(const OperatorSpec& a, const Window& w,
                                       const std::vector<Eigen::VectorXcd>& vectors);

// ||(A - w_shift)^{-1} (S - z)^{-1} - (S - z)^{-1} (A - w_shift)^{-1}|| on the
// window ladder; decay below 1e-8 is the expected signature of commuting
// resolvents when ad(S, A) vanishes.
ProbeResult resolvent_commute_check(const OperatorSpec& a, const DiagonalSpec& c, cplx z,
                                    cplx w_shift, const std::vector<Window>& ladder);

}  // namespace opdomain::oracle
