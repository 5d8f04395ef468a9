#include "qsens/qsens.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace qsens;

void BM_OatState(benchmark::State& st) {
  const double j = static_cast<double>(st.range(0));
  const OneAxisTwisting oat(j);
  for (auto _ : st) benchmark::DoNotOptimize(oat.state(0.94 / std::sqrt(j)));
}
BENCHMARK(BM_OatState)->Arg(25)->Arg(100);

void BM_ReducedStats(benchmark::State& st) {
  const double j = static_cast<double>(st.range(0));
  const OneAxisTwisting oat(j);
  const QuantumState state = oat.state(0.94 / std::sqrt(j));
  for (auto _ : st) benchmark::DoNotOptimize(reduced_projector_stats(state, oat.spin().jz, oat.jy_basis()));
}
BENCHMARK(BM_ReducedStats)->Arg(25)->Arg(100);

void BM_MomentData(benchmark::State& st) {
  const double j = static_cast<double>(st.range(0));
  const OneAxisTwisting oat(j);
  const QuantumState state = oat.state(0.94 / std::sqrt(j));
  const ReducedStats stats = reduced_projector_stats(state, oat.spin().jz, oat.jy_basis());
  const OperatorFamily family = OperatorFamily::generator_and_projectors(oat.spin().jz, oat.jy_basis(), stats.active);
  for (auto _ : st) benchmark::DoNotOptimize(moment_data(state, family));
}
BENCHMARK(BM_MomentData)->Arg(25)->Arg(100);

void BM_QuantumFisherMixed(benchmark::State& st) {
  InstanceSampler rng(1);
  const auto dim = static_cast<Eigen::Index>(st.range(0));
  const QuantumState state = QuantumState::mixed(rng.random_density(dim, dim));
  const HermitianOperator h(rng.gue(dim));
  for (auto _ : st) benchmark::DoNotOptimize(quantum_fisher(state, h));
}
BENCHMARK(BM_QuantumFisherMixed)->Arg(8)->Arg(64);

void BM_Sweep(benchmark::State& st) {
  const double j = static_cast<double>(st.range(0));
  const auto taus = scaled_tau_grid(j, 0.0, 3.0, 300);
  for (auto _ : st) benchmark::DoNotOptimize(sensitivity_sweep(j, taus, 0.0, SweepOptions{1}));
}
BENCHMARK(BM_Sweep)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_FindTauOpt(benchmark::State& st) {
  const double j = static_cast<double>(st.range(0));
  const OneAxisTwisting oat(j);
  for (auto _ : st) benchmark::DoNotOptimize(find_tau_opt(oat, 0.0));
}
BENCHMARK(BM_FindTauOpt)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
