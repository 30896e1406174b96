#include <benchmark/benchmark.h>

#include "lzs/config.hpp"
#include "lzs/master.hpp"
#include "lzs/sweep.hpp"

namespace {

using namespace lzs;

TlsParams bench_tls() {
  TlsParams tls;
  tls.delta = 3.359315568e-4;
  tls.i_p = 0.720760;
  tls.lambda_f = 4.5287;
  tls.lambda_ch = 2.938e-4;
  tls.lambda_cc = 4.134e-3;
  return tls;
}

OhmicBath bench_bath() {
  OhmicBath b;
  b.tag = "main";
  return b;
}

DrivenModel bench_model() {
  const double f_omega = 0.003 / (4.0 * pi * bench_tls().i_p);
  return build_tls_model(bench_tls(), 4.05 * f_omega, 0.003, 0.003,
                         {{PauliAxis::z, 1.0, "main"}});
}

void bm_junction_build(benchmark::State& state) {
  for (auto _ : state) {
    FqParams p;
    benchmark::DoNotOptimize(build_junction_operators(p));
  }
}
BENCHMARK(bm_junction_build);

void bm_junction_spectrum(benchmark::State& state) {
  FqParams p;
  const JunctionOperators ops = build_junction_operators(p);
  for (auto _ : state) {
    const Mat h = build_fq_hamiltonian_detuned(ops, 0.0);
    benchmark::DoNotOptimize(diagonalize_static(h, 6));
  }
}
BENCHMARK(bm_junction_spectrum);

void bm_monodromy_tls(benchmark::State& state) {
  const DrivenModel model = bench_model();
  for (auto _ : state) benchmark::DoNotOptimize(propagate_one_period(model, 4096));
}
BENCHMARK(bm_monodromy_tls);

void bm_floquet_states_tls(benchmark::State& state) {
  const DrivenModel model = bench_model();
  for (auto _ : state) benchmark::DoNotOptimize(floquet_states(model));
}
BENCHMARK(bm_floquet_states_tls);

void bm_matrix_elements(benchmark::State& state) {
  const DrivenModel model = bench_model();
  const FloquetBasis basis = floquet_states(model);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_elements(basis, model.couplings[0].op));
}
BENCHMARK(bm_matrix_elements);

void bm_generator_tls(benchmark::State& state) {
  const DrivenModel model = bench_model();
  const FloquetBasis basis = floquet_states(model);
  const std::vector<TaggedElements> elems = {{"main", matrix_elements(basis, model.couplings[0].op)}};
  const std::vector<OhmicBath> baths = {bench_bath()};
  for (auto _ : state) {
    const RateTensor rates = rate_tensor(basis, elems, baths);
    benchmark::DoNotOptimize(build_generator(basis, rates));
  }
}
BENCHMARK(bm_generator_tls);

void bm_full_point_tls_steady(benchmark::State& state) {
  SweepSpec spec;
  spec.mode = RunMode::steady_state;
  spec.derive_tls = false;
  spec.tls = bench_tls();
  const double f_omega = 0.003 / (4.0 * pi * spec.tls.i_p);
  spec.f_dc = {4.05 * f_omega};
  spec.baths = {bench_bath()};
  spec.couplings = {{"long", "main", CouplingKind::sigma_z, 1.0, false}};
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec));
}
BENCHMARK(bm_full_point_tls_steady);

void bm_full_point_multilevel(benchmark::State& state) {
  SweepSpec spec;
  spec.mode = RunMode::finite_time;
  spec.model_kind = ModelKind::multilevel;
  spec.times_tau = {1000.0};
  const double f_omega = 0.003 / (4.0 * pi * bench_tls().i_p);
  spec.f_dc = {2.7 * f_omega};
  spec.f_ac = {0.002};
  spec.baths = {bench_bath()};
  spec.couplings = {{"flux", "main", CouplingKind::flux, 1.0, false}};
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec));
}
BENCHMARK(bm_full_point_multilevel);

}  // namespace

BENCHMARK_MAIN();
