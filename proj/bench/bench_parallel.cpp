// Serial reference vs OpenMP kernels. Arg 0 selects Execution::serial,
// 1 Execution::parallel; both produce identical results (see unit tests).

#include <benchmark/benchmark.h>

#include "dncone/dn_cone.hpp"
#include "dncone/matrix_calculus.hpp"
#include "dncone/prober.hpp"
#include "dncone/scalar_calculus.hpp"

using namespace dncone;

namespace {

Execution mode(const benchmark::State& st) { return st.range(0) ? Execution::parallel : Execution::serial; }

void BM_EvaluateTrials(benchmark::State& st) {
  ProbeOptions po;
  po.exec = mode(st);
  const ScalarFunc f = ScalarFunc::power(2.75);
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_trials(5, f, 7, 0, 512, po));
  st.SetItemsProcessed(st.iterations() * 512);
}

void BM_ExceptionalSetScan(benchmark::State& st) {
  const std::vector<double> alphas = alpha_grid(0.0, 6.0, 10);
  for (auto _ : st) benchmark::DoNotOptimize(exceptional_set_scan(1.0, 1.0, 5, alphas, {}, mode(st)));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(alphas.size()));
}

void BM_QuadraturePower(benchmark::State& st) {
  const SymMatrix a = sample_dn({5, SamplerStrategy::gram_nonneg, 3, 1.0}) + 0.05 * SymMatrix::identity(5);
  const QuadratureSpec spec = QuadratureSpec::for_exponent(2.7);
  for (auto _ : st) benchmark::DoNotOptimize(quadrature_power(a, spec, kDefaultPsdTol, mode(st)));
}

}  // namespace

BENCHMARK(BM_EvaluateTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExceptionalSetScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuadraturePower)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
