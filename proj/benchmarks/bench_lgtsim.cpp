// Copyright 2026 The lgtsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Microbenchmarks for the hot paths: gate kernels, the fidelity objective,
// one IPG iteration and a noisy multi-step run.

#include <random>

#include <benchmark/benchmark.h>

#include "lgtsim/ansatz.hpp"
#include "lgtsim/gateset.hpp"
#include "lgtsim/lgtmodel.hpp"
#include "lgtsim/noiselab.hpp"
#include "lgtsim/objective.hpp"
#include "lgtsim/optimizers.hpp"
#include "lgtsim/qstate.hpp"

namespace {

using namespace lgtsim;

void BM_ApplyGate(benchmark::State &st) {
    const int n = static_cast<int>(st.range(0));
    const int k = static_cast<int>(st.range(1));
    std::mt19937_64 rng(1);
    StateVector psi = haar_random_state(n, rng);
    std::vector<int> targets;
    for (int i = 0; i < k; ++i)
        targets.push_back((3 * i + 1) % n);
    const CMatrix m = k == 3   ? target_unitary_C(1.0, 0.4)
                      : k == 2 ? gate_matrix(Gate::make(GateKind::XX, {0, 1}, {0.8}))
                               : gate_matrix(Gate::make(GateKind::RY, {0}, {0.3}));
    for (auto _ : st) {
        psi.apply_unchecked(m, targets);
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_ApplyGate)->Args({12, 1})->Args({12, 2})->Args({12, 3})->Args({18, 2})->Args({18, 3});

void BM_ObjectiveCost(benchmark::State &st) {
    const ObjectiveHandle h(target_unitary_C(1.0, 0.4), hopping_ansatz_full());
    const ParamVector x = random_initial_point(h.dim(), 2);
    for (auto _ : st)
        benchmark::DoNotOptimize(h.cost(x));
}
BENCHMARK(BM_ObjectiveCost);

void BM_ObjectiveGradient(benchmark::State &st) {
    const ObjectiveHandle h(target_unitary_C(1.0, 0.4), hopping_ansatz_full());
    const ParamVector x = random_initial_point(h.dim(), 2);
    for (auto _ : st)
        benchmark::DoNotOptimize(h.gradient(x));
}
BENCHMARK(BM_ObjectiveGradient);

void BM_ObjectiveHessian(benchmark::State &st) {
    const ObjectiveHandle h(target_unitary_C(1.0, 0.4), hopping_ansatz_full());
    const ParamVector x = random_initial_point(h.dim(), 2);
    for (auto _ : st)
        benchmark::DoNotOptimize(h.hessian(x));
}
BENCHMARK(BM_ObjectiveHessian);

void BM_IpgStep(benchmark::State &st) {
    const UnitaryCost f(ObjectiveHandle(target_unitary_C(1.0, 0.4), hopping_ansatz_full()));
    const IpgState s0 = ipg_init(random_initial_point(f.dim(), 3));
    for (auto _ : st)
        benchmark::DoNotOptimize(ipg_step(s0, f));
}
BENCHMARK(BM_IpgStep);

void BM_NoisySteps(benchmark::State &st) {
    const LatticeLayout layout(static_cast<int>(st.range(0)));
    const Circuit step = build_trotter_step(layout, {1.0, 2.0, 0.4, 1, Variant::Direct});
    const NoiseConfig noise{0.005, {}};
    std::mt19937_64 rng(4);
    for (auto _ : st)
        benchmark::DoNotOptimize(
            run_noisy_steps(step, 4, initial_state(layout), noise, 100, {}, rng));
}
BENCHMARK(BM_NoisySteps)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
