// Copyright 2026 The drccmdp Authors
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

#include <benchmark/benchmark.h>

#include "drccmdp/joint_solver.hpp"
#include "drccmdp/kl.hpp"
#include "drccmdp/machine_replacement.hpp"
#include "drccmdp/reformulate.hpp"

using namespace drccmdp;

namespace {

void BM_BuildOccupationPolytope(benchmark::State& state) {
    const auto bench = build_benchmark();
    for (auto _ : state)
        benchmark::DoNotOptimize(build_occupation_polytope(bench.mdp));
}
BENCHMARK(BM_BuildOccupationPolytope);

void BM_AdjustConfidence(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(adjust_confidence(0.8, {0.1}));
}
BENCHMARK(BM_AdjustConfidence);

void BM_InverseAdjust(benchmark::State& state) {
    const double target = adjust_confidence(0.8, {0.1});
    for (auto _ : state)
        benchmark::DoNotOptimize(inverse_adjust(target, {0.1}, 1e-3));
}
BENCHMARK(BM_InverseAdjust);

void BM_IndividualSocp(benchmark::State& state) {
    const auto bench = build_benchmark(0.5);
    const ConicProgram prog =
        build_individual(bench.mdp, bench.constraints, bench.objective);
    for (auto _ : state)
        benchmark::DoNotOptimize(conic_solve(prog));
}
BENCHMARK(BM_IndividualSocp);

void BM_JointSolveBenchmark(benchmark::State& state) {
    const auto bench = build_benchmark(1e-4);
    JointSolveConfig config;
    config.y0 = (Eigen::VectorXd(2) << 0.95, 0.91).finished();
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_joint(bench.mdp, bench.constraints,
                                            bench.objective, bench.epsilon_hat,
                                            config));
}
BENCHMARK(BM_JointSolveBenchmark);

} // namespace

BENCHMARK_MAIN();
