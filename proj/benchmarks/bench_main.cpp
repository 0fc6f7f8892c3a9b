/* Copyright 2026 The fidspec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fidspec/bcs_thermal.hpp"
#include "fidspec/impurity_bdg.hpp"
#include "fidspec/xx_chain.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace fidspec;

namespace {

DensityMatrix random_state(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = {n(rng), n(rng)};
    }
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityMatrix(rho);
}

void BM_FidelityOpSpectrum(benchmark::State &state) {
    const int dim = static_cast<int>(state.range(0));
    const auto a = random_state(dim, 1);
    const auto b = random_state(dim, 2);
    for (auto _ : state) benchmark::DoNotOptimize(fidelity_op_spectrum(a, b));
}
BENCHMARK(BM_FidelityOpSpectrum)->Arg(4)->Arg(16)->Arg(64);

void BM_XxFidelitySpectrum(benchmark::State &state) {
    const int L = static_cast<int>(state.range(0));
    const xx::MajoranaRep rep(L);
    for (auto _ : state) benchmark::DoNotOptimize(xx::xx_fidelity_spectrum(0.9, 0.89, rep));
}
BENCHMARK(BM_XxFidelitySpectrum)->DenseRange(2, 6, 2);

void BM_BdgSelfConsistent(benchmark::State &state) {
    impurity::LatticeParams p;
    p.nx = p.ny = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(impurity::solve_selfconsistent(p, 1.0));
}
BENCHMARK(BM_BdgSelfConsistent)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_BrillouinMap(benchmark::State &state) {
    bcs::BCSParams a, b;
    a.grid_n = b.grid_n = static_cast<int>(state.range(0));
    b.delta = 0.3;
    for (auto _ : state) benchmark::DoNotOptimize(bcs::brillouin_map(a, b));
}
BENCHMARK(BM_BrillouinMap)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
