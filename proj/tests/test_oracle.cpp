#include <doctest.h>

#include <cmath>

#include "opdomain/oracle.hpp"

using namespace opdomain::oracle;
using opdomain::core::EntryGen;

namespace {

PairingSpec identity_pairing() {
  return PairingSpec{EntryGen::identity(), EntryGen::identity(), 0, 1.0};
}

}  // namespace

TEST_CASE("h-symmetry residual vanishes for symmetric matrices with H = I") {
  const OperatorSpec a(EntryGen::jacobi("k", "k^2"));
  CHECK(finite_h_symmetry_residual(a, identity_pairing(), Window{1, 64, 1}) == 0.0);
}

TEST_CASE("h-symmetry residual vanishes for the pairswap construction") {
  const PairingSpec pair{EntryGen::antidiagonal_blocks({2}, {1}),
                         EntryGen::antidiagonal_blocks({2}, {1}), 1, 1.0};
  const OperatorSpec a(EntryGen::pairswap_jacobi("k", "1"), 2);
  CHECK(finite_h_symmetry_residual(a, pair, Window{1, 64, 2}) <= 1e-12);
}

TEST_CASE("h-symmetry residual is linear in a single perturbation") {
  auto small = EntryGen::jacobi("0", "1");
  small.perturb(3, 4, cplx(0.1, 0.0));
  auto big = EntryGen::jacobi("0", "1");
  big.perturb(3, 4, cplx(0.4, 0.0));
  const double r1 =
      finite_h_symmetry_residual(OperatorSpec(std::move(small)), identity_pairing(),
                                 Window{1, 32, 4});
  const double r4 = finite_h_symmetry_residual(OperatorSpec(std::move(big)), identity_pairing(),
                                               Window{1, 32, 4});
  CHECK(r1 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r4 == doctest::Approx(4.0 * r1).epsilon(1e-12));
}

TEST_CASE("h-symmetry residual requires a banded operator") {
  const OperatorSpec dense(EntryGen::power_band(1, 0, 3));
  CHECK_THROWS_AS(finite_h_symmetry_residual(dense, identity_pairing(), Window{1, 16, 0}),
                  std::invalid_argument);
}

TEST_CASE("limit-point probe: free Jacobi matrix gives growing sums") {
  const auto res = jacobi_limit_point_probe([](long) { return 0.0; }, [](long) { return 1.0; },
                                            cplx(0, 1), {256, 1024, 4096});
  CHECK(res.trend == Trend::Growing);
  CHECK(res.values.size() == 3);
  CHECK(res.conclusion.find("limit-point") != std::string::npos);
}

TEST_CASE("limit-point probe: diag k with unit offdiagonal grows") {
  const auto res = jacobi_limit_point_probe([](long k) { return static_cast<double>(k); },
                                            [](long) { return 1.0; }, cplx(0, 1),
                                            {256, 1024, 4096});
  CHECK(res.trend == Trend::Growing);
}

TEST_CASE("limit-point probe: offdiag k(k+1) is the classical limit-circle example") {
  const auto res = jacobi_limit_point_probe(
      [](long) { return 0.0; }, [](long k) { return static_cast<double>(k) * (k + 1); },
      cplx(0, 1), {256, 1024, 4096});
  CHECK(res.trend != Trend::Growing);
  CHECK(res.conclusion.find("limit-circle") != std::string::npos);
}

TEST_CASE("limit-point probe is scaling-covariant") {
  // (lambda J, lambda z) has the same solution u as (J, z): identical trend
  const double lam = 7.0;
  const auto a = jacobi_limit_point_probe([](long k) { return static_cast<double>(k); },
                                          [](long) { return 1.0; }, cplx(0, 1), {256, 1024});
  const auto b = jacobi_limit_point_probe(
      [lam](long k) { return lam * static_cast<double>(k); }, [lam](long) { return lam; },
      cplx(0, lam), {256, 1024});
  CHECK(a.trend == b.trend);
  CHECK(a.values[0].second == doctest::Approx(b.values[0].second).epsilon(1e-9));
}

TEST_CASE("limit-point probe rejects vanishing off-diagonals") {
  CHECK_THROWS_AS(jacobi_limit_point_probe([](long) { return 0.0; }, [](long) { return 0.0; },
                                           cplx(0, 1), {64}),
                  std::invalid_argument);
}

TEST_CASE("graph-norm probe: complex diagonal is exactly formally normal") {
  const OperatorSpec a(EntryGen::diagonal("k + i*k^2"), 0);
  std::vector<Eigen::VectorXcd> vecs;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(32);
  v(4) = cplx(1, 0);
  v(7) = cplx(0, 2);
  vecs.push_back(v);
  const auto res = graph_norm_ratio_probe(a, Window{1, 32, 0}, vecs);
  REQUIRE(res.q_hat.has_value());
  CHECK(*res.q_hat == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("graph-norm probe: scaled shift has unit ratio on interior vectors") {
  const OperatorSpec a(EntryGen::shift());
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(32);
  v(10) = cplx(1, 0);
  v(11) = cplx(2, 0);
  const auto res = graph_norm_ratio_probe(a, Window{1, 32, 0}, {v});
  REQUIRE(res.q_hat.has_value());
  CHECK(*res.q_hat == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("graph-norm probe: real symmetric operators give q_hat = 1") {
  const OperatorSpec a(EntryGen::jacobi("k", "3*k"));
  std::vector<Eigen::VectorXcd> vecs;
  for (long s : {5L, 9L, 14L}) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(40);
    v(s) = cplx(1, 0);
    v(s + 1) = cplx(-1, 1);
    vecs.push_back(v);
  }
  const auto res = graph_norm_ratio_probe(a, Window{1, 40, 0}, vecs);
  REQUIRE(res.q_hat.has_value());
  CHECK(*res.q_hat == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("graph-norm probe: one-sided kernel vectors break normality") {
  // single entry a_{5,6} = 1: A e_5 = 0 while A^H e_5 = e_6
  auto gen = EntryGen::table({{{5, 6}, cplx(1, 0)}});
  const OperatorSpec a(std::move(gen));
  Eigen::VectorXcd v1 = Eigen::VectorXcd::Zero(16), v2 = Eigen::VectorXcd::Zero(16);
  v1(5) = cplx(1, 0);  // index 6: ||A f|| = 1, ||A^H f|| = 0
  v2(4) = cplx(1, 0);  // index 5: ||A f|| = 0, ||A^H f|| = 1 -> infinite ratio
  const auto res = graph_norm_ratio_probe(a, Window{1, 16, 0}, {v1, v2});
  CHECK(res.infinite);
  CHECK(!res.q_hat.has_value());
}

TEST_CASE("graph-norm probe rejects support near the window edge") {
  const OperatorSpec a(EntryGen::jacobi("0", "1"));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v(15) = cplx(1, 0);  // last index: A f leaks outside the window
  CHECK_THROWS_AS(graph_norm_ratio_probe(a, Window{1, 16, 0}, {v}), std::invalid_argument);
}

TEST_CASE("resolvent commutation: diagonal operators commute exactly") {
  const OperatorSpec a(EntryGen::diagonal("2*k"), 0);
  const auto res = resolvent_commute_check(a, opdomain::core::DiagonalSpec::from_expr("k"),
                                           cplx(0, 1), cplx(0, 2),
                                           {Window{1, 64, 0}, Window{1, 128, 0}});
  for (const auto& [sz, val] : res.values) CHECK(val <= 1e-12);
  CHECK(res.conclusion.find("commuting-resolvent") != std::string::npos);
}

TEST_CASE("resolvent commutation: block instance decays, control does not") {
  // block-constant c over 2x2 blocks commutes with the antidiagonal block matrix
  const OperatorSpec blocks(EntryGen::antidiagonal_blocks({2}, {1}), 1);
  const auto c2 = opdomain::core::DiagonalSpec::from_block_expr("k", 2);
  const auto good = resolvent_commute_check(blocks, c2, cplx(0, 1), cplx(0, 2),
                                            {Window{1, 128, 0}, Window{1, 256, 0},
                                             Window{1, 512, 0}});
  CHECK(good.values.back().second <= 1e-8);
  CHECK(good.conclusion.find("commuting-resolvent") != std::string::npos);

  // control: ad(S, A) != 0, so the commutator stays at unit scale
  const OperatorSpec control(EntryGen::jacobi("0", "1"), 1);
  const auto bad = resolvent_commute_check(control, opdomain::core::DiagonalSpec::from_expr("k"),
                                           cplx(0, 1), cplx(0, 2),
                                           {Window{1, 128, 0}, Window{1, 256, 0}});
  CHECK(bad.values.back().second > 1e-8);
  CHECK(bad.conclusion.find("violated") != std::string::npos);
}
