// Copyright 2026 The lowtrot Authors
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

#include <benchmark/benchmark.h>

#include <string>

#include "lowtrot/blas.hpp"
#include "lowtrot/formulas.hpp"
#include "lowtrot/linalg.hpp"
#include "lowtrot/models.hpp"

using namespace lowtrot;

namespace {

models::HamiltonianModel model_for(std::int64_t n) {
    return models::heisenberg_chain(static_cast<int>(n));
}

void BM_Eigh(benchmark::State& state) {
    const auto h = model_for(state.range(0)).total();
    for (auto _ : state) {
        benchmark::DoNotOptimize(linalg::eigh(h));
    }
}
BENCHMARK(BM_Eigh)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_Expm(benchmark::State& state) {
    const auto basis = linalg::eigh(model_for(state.range(0)).total());
    for (auto _ : state) {
        benchmark::DoNotOptimize(linalg::expm_hermitian(basis, 0.1));
    }
}
BENCHMARK(BM_Expm)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_SpectralNorm(benchmark::State& state) {
    const auto m = model_for(state.range(0));
    const auto basis = linalg::eigh(m.total());
    const auto bases = formulas::term_bases(m);
    const auto diff = formulas::trotter_evolution(bases, 2, 1.0, 10).matrix() -
                      linalg::Propagator::exact(basis, 1.0).matrix();
    for (auto _ : state) {
        benchmark::DoNotOptimize(linalg::spectral_norm(diff));
    }
}
BENCHMARK(BM_SpectralNorm)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_RealizeStep(benchmark::State& state) {
    const auto m = model_for(6);
    const auto bases = formulas::term_bases(m);
    const auto plan = formulas::suzuki_plan(static_cast<int>(state.range(0)), m.num_terms(), 0.01);
    for (auto _ : state) {
        benchmark::DoNotOptimize(formulas::realize(plan, bases));
    }
    state.SetLabel("p=" + std::to_string(state.range(0)));
}
BENCHMARK(BM_RealizeStep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
    blas::pin_single_thread();
    blas::ensure_reliable_blas(argv);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) {
        return 1;
    }
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
