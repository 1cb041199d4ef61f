#include <benchmark/benchmark.h>

#include "latfade/channels.hpp"
#include "latfade/codebook.hpp"
#include "latfade/forms.hpp"
#include "latfade/lattice.hpp"
#include "latfade/numfield.hpp"
#include "latfade/parallel.hpp"
#include "latfade/sim.hpp"

using namespace latfade;

namespace {

const Lattice& ring16() {
  static const Lattice l = normalize_volume(embed_ring(cyclotomic_field(16)));
  return l;
}

const Lattice& ring8() {
  static const Lattice l = normalize_volume(embed_ring(cyclotomic_field(8)));
  return l;
}

ExperimentConfig experiment() {
  return ExperimentConfig{carve(ring8(), 1.0, 4.0, CVector::Zero(2)),
                          make_channel(ChannelKind::iid_rayleigh_diag, 2), 20000, 11};
}

CVector probe() {
  CVector x(4);
  x << Complex(0.9, 0.3), Complex(-0.4, 1.1), Complex(0.2, -0.7), Complex(1.3, 0.1);
  return x;
}

void BM_enumerate_ball(benchmark::State& state) {
  const CVector c = CVector::Zero(4);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_ball(ring16(), 2.2, c));
}

void BM_enumerate_ball_reference(benchmark::State& state) {
  const CVector c = CVector::Zero(4);
  for (auto _ : state) benchmark::DoNotOptimize(reference::enumerate_ball(ring16(), 2.2, c));
}

void BM_find_shift(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_shift(ring8(), 0.8, 4.0, 32, 5));
}

void BM_find_shift_reference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::find_shift(ring8(), 0.8, 4.0, 32, 5));
}

void BM_reduced_norm_numeric(benchmark::State& state) {
  const auto g = make_group(GroupKind::mimo2_block, 4);
  const CVector x = probe();
  for (auto _ : state) benchmark::DoNotOptimize(reduced_norm_sq_numeric(g, x, 200));
}

void BM_reduced_norm_numeric_reference(benchmark::State& state) {
  const auto g = make_group(GroupKind::mimo2_block, 4);
  const CVector x = probe();
  for (auto _ : state) benchmark::DoNotOptimize(reference::reduced_norm_sq_numeric(g, x, 200));
}

void BM_run_experiment(benchmark::State& state) {
  const auto cfg = experiment();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}

void BM_run_experiment_reference(benchmark::State& state) {
  const auto cfg = experiment();
  for (auto _ : state) benchmark::DoNotOptimize(reference::run_experiment(cfg));
}

void BM_estimate_mu(benchmark::State& state) {
  const auto m = make_channel(ChannelKind::iid_rayleigh_diag, 4);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_mu(m, 100000, 3));
}

void BM_estimate_mu_reference(benchmark::State& state) {
  const auto m = make_channel(ChannelKind::iid_rayleigh_diag, 4);
  for (auto _ : state) benchmark::DoNotOptimize(reference::estimate_mu(m, 100000, 3));
}

}  // namespace

BENCHMARK(BM_enumerate_ball)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_enumerate_ball_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_find_shift)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_find_shift_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_reduced_norm_numeric)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_reduced_norm_numeric_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_experiment)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_experiment_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_estimate_mu)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_estimate_mu_reference)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  apply_thread_cap();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
