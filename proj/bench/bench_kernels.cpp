// Copyright 2026 The Shadow Distill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP versions. Arguments: N_U, N_S.
//
//   OMP_NUM_THREADS=8 ./build/bench/shadow_bench

#include <benchmark/benchmark.h>

#include "shadow/shadows/shadow.hpp"
#include "shadow/stats/stats.hpp"

using namespace shadow;

namespace {

std::vector<MeasurementRecord> make_records(int n_qubits, int n_u, int n_s) {
    auto rho = depolarized_state(haar_random_state(n_qubits, 3), 0.1);
    OutcomeSampler sampler(rho, 0.0);
    return sample_records(sampler, sample_settings(n_qubits, n_u, 4), n_s, 5);
}

template <double (*Kernel)(const ShadowEnsemble &, const Observable &, bool)>
void run(benchmark::State &state, int n_qubits, const char *observable, bool parallel) {
    const ShadowEnsemble ens(make_records(n_qubits, static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
    ens.coefficients(0);  // build caches outside the timed loop
    ens.averaged_snapshot(0);
    const auto o = Observable::parse(observable);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(ens, o, parallel));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1));
}

void BM_PauliSumSerial(benchmark::State &s) { run<kernels::o2_pauli_sum>(s, 5, "ZZIII", false); }
void BM_PauliSumParallel(benchmark::State &s) { run<kernels::o2_pauli_sum>(s, 5, "ZZIII", true); }
void BM_FactorizedSerial(benchmark::State &s) { run<kernels::o2_factorized>(s, 5, "ZZIII", false); }
void BM_FactorizedParallel(benchmark::State &s) { run<kernels::o2_factorized>(s, 5, "ZZIII", true); }
void BM_DensePairwiseSerial(benchmark::State &s) { run<kernels::o2_dense_pairwise>(s, 4, "ZZII", false); }
void BM_DensePairwiseParallel(benchmark::State &s) { run<kernels::o2_dense_pairwise>(s, 4, "ZZII", true); }

void BM_Resample(benchmark::State &state, bool parallel) {
    auto rho = depolarized_state(haar_random_state(4, 6), 0.1);
    auto pool = build_pool(rho, 2000, 512, 7);
    ResampleOptions opts;
    opts.parallel = parallel;
    const auto o = Observable::parse("ZZII");
    for (auto _ : state) {
        benchmark::DoNotOptimize(resample_delta2(pool, rho, o, static_cast<int>(state.range(0)), 64, 16, 8, opts));
    }
}

}  // namespace

BENCHMARK(BM_PauliSumSerial)->Args({256, 16})->Args({1024, 16});
BENCHMARK(BM_PauliSumParallel)->Args({256, 16})->Args({1024, 16});
BENCHMARK(BM_FactorizedSerial)->Args({256, 16})->Args({1024, 16});
BENCHMARK(BM_FactorizedParallel)->Args({256, 16})->Args({1024, 16});
BENCHMARK(BM_DensePairwiseSerial)->Args({128, 16});
BENCHMARK(BM_DensePairwiseParallel)->Args({128, 16});
BENCHMARK_CAPTURE(BM_Resample, serial, false)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Resample, parallel, true)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
