#include <benchmark/benchmark.h>

#include "opdomain/approx_unit.hpp"
#include "opdomain/core.hpp"
#include "opdomain/linalg.hpp"

namespace {

using namespace opdomain;

void BM_op_norm_banded(benchmark::State& state) {
  const long n = state.range(0);
  auto a = core::OperatorSpec(core::EntryGen::jacobi("0", "k"), 1, core::Symmetry::Real);
  const core::Matrix M = core::truncate(a, core::Window{1, n, 0});
  for (auto _ : state) benchmark::DoNotOptimize(linalg::op_norm(M).value);
}
BENCHMARK(BM_op_norm_banded)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_op_norm_dense(benchmark::State& state) {
  const long n = state.range(0);
  auto a = core::OperatorSpec(core::EntryGen::power_band(1.0, 0.5, 3.0));
  const core::Matrix M = core::truncate(a, core::Window{1, n, 0});
  for (auto _ : state) benchmark::DoNotOptimize(linalg::op_norm(M).value);
}
BENCHMARK(BM_op_norm_dense)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_truncate(benchmark::State& state) {
  const long n = state.range(0);
  auto gen = core::EntryGen::expression("1 / (1 + (k - l)^2)");
  for (auto _ : state) benchmark::DoNotOptimize(core::truncate(gen, core::Window{1, n, 0}));
}
BENCHMARK(BM_truncate)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_commutator_section(benchmark::State& state) {
  const long n = state.range(0);
  auto a = core::OperatorSpec(core::EntryGen::jacobi("k", "k"), 1, core::Symmetry::Real);
  auto c = core::DiagonalSpec::from_expr("k");
  const core::Window w{1, n, 0};
  const auto t = approx_unit::build_unit(approx_unit::UnitKind::ResolventPower, c, 1, 16, w);
  for (auto _ : state) benchmark::DoNotOptimize(approx_unit::commutator_section(t, a, w));
}
BENCHMARK(BM_commutator_section)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
