#include <doctest.h>

#include <cmath>

#include "opdomain/approx_unit.hpp"

using namespace opdomain::approx_unit;
using opdomain::core::EntryGen;
using opdomain::linalg::op_norm;
using opdomain::report::Outcome;

namespace {

std::vector<Window> ladder(std::vector<long> sizes) {
  std::vector<Window> ws;
  for (long n : sizes) ws.push_back(Window{1, n, 0});
  return ws;
}

}  // namespace

TEST_CASE("build_unit: resolvent power closed form at n = m = 1, c_1 = 1") {
  const auto t = build_unit(UnitKind::ResolventPower, DiagonalSpec::from_expr("k"), 1, 1,
                            Window{1, 1, 0});
  // 1/(1 - i) = 0.5 + 0.5i
  CHECK(t(0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(t(0).imag() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("build_unit: resolvent modulus follows n^m/|c_k - in|^m") {
  const auto c = DiagonalSpec::from_expr("k");
  for (long m : {1L, 2L, 3L}) {
    const auto t = build_unit(UnitKind::ResolventPower, c, m, 4, Window{1, 6, 0});
    for (long i = 0; i < 6; ++i) {
      const double ck = i + 1.0;
      const double expect = std::pow(4.0 / std::hypot(ck, 4.0), m);
      CHECK(std::abs(t(i)) == doctest::Approx(expect).epsilon(1e-13));
      CHECK(std::abs(t(i)) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("build_unit: spectral projection cuts at |c_k| <= n") {
  const auto t = build_unit(UnitKind::SpectralProjection, DiagonalSpec::from_expr("k"), 1, 3,
                            Window{1, 5, 0});
  CHECK(t(0) == cplx(1, 0));
  CHECK(t(2) == cplx(1, 0));
  CHECK(t(3) == cplx(0, 0));
  CHECK(t(4) == cplx(0, 0));
}

TEST_CASE("commutator with a diagonal operator vanishes") {
  const Window w{1, 32, 0};
  const auto t = build_unit(UnitKind::ResolventPower, DiagonalSpec::from_expr("k"), 2, 8, w);
  const Matrix C = commutator_section(t, OperatorSpec(EntryGen::diagonal("k^2")), w);
  CHECK(C.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("commutator with the shift lives on the superdiagonal") {
  const Window w{1, 16, 0};
  const auto t = build_unit(UnitKind::ResolventPower, DiagonalSpec::from_expr("k"), 1, 4, w);
  const OperatorSpec a(EntryGen::shift());
  const Matrix C = commutator_section(t, a, w);
  for (long r = 0; r + 1 < 16; ++r) {
    const cplx expect = (t(r) - t(r + 1)) * 1.0;
    CHECK(std::abs(C(r, r + 1) - expect) <= 1e-16);
  }
  CHECK(std::abs(C(3, 1)) == 0.0);
  // matches the dense formula TA - AT
  Matrix T = t.asDiagonal();
  const Matrix A = truncate(a, w);
  CHECK((C - (T * A - A * T)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("komintro: diagonal operator gives identically zero curve") {
  UnitFamily fam{UnitKind::ResolventPower, DiagonalSpec::from_expr("k"), 1, {1, 2, 4, 8}};
  const auto res = komintro_check(fam, OperatorSpec(EntryGen::diagonal("k")),
                                  ladder({32, 64, 128}));
  CHECK(res.bounded == Outcome::Pass);
  CHECK(res.sup == 0.0);
}

TEST_CASE("komintro: Jacobi commutators satisfy the sqrt(3) x (M2) envelope") {
  // |t_k - t_l| = n|c_k - c_l| / (|n - ic_k||n - ic_l|), so the sqrt(3) bound
  // dominates the commutator entrywise by sqrt(3) x the (M2) kernel
  const OperatorSpec a(EntryGen::jacobi("0", "1"));
  const auto c = DiagonalSpec::from_expr("k");
  const Window w{1, 512, 0};
  Matrix m2(512, 512);
  for (long r = 0; r < 512; ++r)
    for (long col = 0; col < 512; ++col) {
      const double ck = r + 1.0, cl = col + 1.0;
      m2(r, col) = std::abs(a.at(r + 1, col + 1)) * std::abs(ck - cl) / (1.0 + ck + cl);
    }
  const double m2_norm = op_norm(m2).value;
  for (long n : {1L, 4L, 16L}) {
    const auto t = build_unit(UnitKind::ResolventPower, c, 1, n, w);
    const double cn = op_norm(commutator_section(t, a, w)).value;
    CHECK(cn <= std::sqrt(3.0) * m2_norm * (1.0 + 1e-6));
  }
}

TEST_CASE("komintro: growing off-diagonal defeats boundedness") {
  UnitFamily fam{UnitKind::ResolventPower, DiagonalSpec::from_expr("k"), 1,
                 {1, 2, 4, 8, 16, 32, 64}};
  const auto res = komintro_check(fam, OperatorSpec(EntryGen::jacobi("0", "k^2")),
                                  ladder({64, 128, 256, 512}));
  CHECK(res.bounded != Outcome::Pass);
}

TEST_CASE("sqrt3 inequality holds for c_k = k on the sample grid") {
  const auto res = sqrt3_inequality_check(DiagonalSpec::from_expr("k"), 16, 32, 32);
  CHECK(res.verdict.outcome == Outcome::Pass);
  CHECK(res.violations == 0);
  CHECK(res.max_ratio <= 1.0 + 1e-12);
}

TEST_CASE("lemma bound: m = 1 is an identity") {
  const auto res = lemma_bound_check(OperatorSpec(EntryGen::jacobi("0", "1")),
                                     DiagonalSpec::from_expr("k"), cplx(0, 2), 1,
                                     ladder({64, 128}));
  CHECK(res.verdict.outcome == Outcome::Pass);
  CHECK(res.lhs == doctest::Approx(res.rhs).epsilon(1e-10));
}

TEST_CASE("lemma bound: m = 2 leaves slack on a Jacobi instance") {
  const auto res = lemma_bound_check(OperatorSpec(EntryGen::jacobi("k", "1")),
                                     DiagonalSpec::from_expr("k"), cplx(0, 2), 2,
                                     ladder({64, 128}));
  CHECK(res.verdict.outcome == Outcome::Pass);
  CHECK(res.slack >= 0.0);
}

TEST_CASE("lemma bound: diagonal operators give 0 on both sides") {
  const auto res = lemma_bound_check(OperatorSpec(EntryGen::diagonal("k")),
                                     DiagonalSpec::from_expr("k"), cplx(0, 1), 3, ladder({32}));
  CHECK(res.verdict.outcome == Outcome::Pass);
  CHECK(res.lhs == 0.0);
  CHECK(res.rhs == 0.0);
}

TEST_CASE("lemma bound validates its arguments") {
  const OperatorSpec a(EntryGen::shift());
  const auto c = DiagonalSpec::from_expr("k");
  CHECK_THROWS_AS(lemma_bound_check(a, c, cplx(0, 1), 0, ladder({8})), std::invalid_argument);
  CHECK_THROWS_AS(lemma_bound_check(a, c, cplx(2, 0), 1, ladder({8})), std::invalid_argument);
}

TEST_CASE("WOT convergence: resolvent units approach the identity on e_1") {
  UnitFamily fam{UnitKind::ResolventPower, DiagonalSpec::from_expr("k"), 1,
                 {1, 4, 16, 64, 256, 1024, 4096, 16384, 65536, 262144, 1048576}};
  const SparseVec e1 = {{1, cplx(1, 0)}};
  const auto res = wot_convergence_check(fam, {e1}, Window{1, 8, 0});
  CHECK(res.verdict.outcome == Outcome::Pass);
  // closed-form deviation |1 - t_1| where |t_1| = n/sqrt(n^2+1)
  const double n = 4.0;
  const double dev = std::abs(1.0 - cplx(n, 0.0) / cplx(n, -1.0));
  CHECK(res.deviations[1].second == doctest::Approx(dev).epsilon(1e-12));
}

TEST_CASE("WOT convergence: spectral projections are exact once n covers the support") {
  UnitFamily fam{UnitKind::SpectralProjection, DiagonalSpec::from_expr("k"), 1, {8, 16}};
  const SparseVec v = {{2, cplx(1, 0)}, {5, cplx(0, -2)}};
  const auto res = wot_convergence_check(fam, {v}, Window{1, 8, 0});
  CHECK(res.verdict.outcome == Outcome::Pass);
  CHECK(res.deviations[0].second == 0.0);
}

TEST_CASE("WOT convergence rejects support outside the window") {
  UnitFamily fam{UnitKind::ResolventPower, DiagonalSpec::from_expr("k"), 1, {4}};
  CHECK_THROWS_AS(wot_convergence_check(fam, {{{9, cplx(1, 0)}}}, Window{1, 8, 0}),
                  std::invalid_argument);
}

TEST_CASE("adjoint symmetry of commutator norms on random sections") {
  const Window w{1, 24, 0};
  const auto t = build_unit(UnitKind::ResolventPower, DiagonalSpec::from_expr("k"), 2, 4, w);
  Matrix T = t.asDiagonal();
  const Matrix A = truncate(EntryGen::expression("1/(1+(k-l)^2) + i*k/(1+l)"), w);
  CHECK(komcond_adjoint_symmetry(T, A).outcome == Outcome::Pass);
  CHECK(komcond_adjoint_symmetry(Matrix::Zero(4, 4), Matrix::Identity(4, 4)).outcome ==
        Outcome::Pass);
}

TEST_CASE("domination estimate: diagonal operator needs no domination") {
  const auto res = domination_check(DiagonalSpec::from_expr("k"),
                                    OperatorSpec(EntryGen::diagonal("k")), ladder({32, 64}));
  CHECK(res.c == 0.0);
  CHECK(res.stabilized);
}

TEST_CASE("domination estimate: shift against c_k = k is uniformly small") {
  // ad(S_diag, shift) has entries c_k - c_{k+1} = -1; ratio 1/(1+k) decays
  const auto res = domination_check(DiagonalSpec::from_expr("k"),
                                    OperatorSpec(EntryGen::shift()), ladder({32, 64, 128}));
  CHECK(res.c <= 1.0 + 1e-12);
  CHECK(res.stabilized);
}

TEST_CASE("domination estimate grows for strongly coupled off-diagonals") {
  // offdiag k^2 against c_k = k^3: commutator column norms outpace 1 + |c_k|
  const auto res = domination_check(DiagonalSpec::from_expr("k^3"),
                                    OperatorSpec(EntryGen::jacobi("0", "k^2")),
                                    ladder({32, 64, 128, 256}));
  CHECK(res.c > 1.0);
  CHECK(!res.stabilized);
}
