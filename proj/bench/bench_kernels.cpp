// Copyright 2026 The nlotele Authors
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

// Serial vs OpenMP outcome accumulation under full Weyl noise on both of
// Alice's qudits (d^4 Kraus terms per run).

#include <benchmark/benchmark.h>
#include <omp.h>

#include <array>

#include "nlotele/teleportation.hpp"

namespace {

using namespace nlotele;

struct Workload {
    std::size_t d;
    PureState joint;
    std::vector<ComplexMatrix> ops;
    std::vector<MeasurementRow> rows;
    std::array<std::size_t, 3> dims;

    explicit Workload(std::size_t dim)
        : d(dim),
          joint(compose_initial(random_pure_state(dim, 1), bell_state(dim, {}))),
          ops(crosstalk_channel(dim, 0.3, CrosstalkVariant::Weyl).operators()),
          rows(measurement_rows(dim, CrystalConvention::General)),
          dims{dim, dim, dim} {}

    BranchSource source() const {
        return [this](std::size_t t, ComplexVector &out) {
            static constexpr std::array<std::size_t, 1> a1{0};
            static constexpr std::array<std::size_t, 1> a2{1};
            SubsystemLayout on_a1(dims, a1), on_a2(dims, a2);
            const std::size_t n = ops.size();
            out = apply_on_subsystems(ops[t % n], apply_on_subsystems(ops[t / n], joint.amplitudes(), on_a1), on_a2);
            return 1.0;
        };
    }
    std::size_t terms() const { return ops.size() * ops.size(); }
};

void BM_Serial(benchmark::State &state) {
    Workload w(static_cast<std::size_t>(state.range(0)));
    auto src = w.source();
    for (auto _ : state) {
        benchmark::DoNotOptimize(accumulate_outcomes_serial(w.d, w.rows, w.terms(), src));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * w.terms()));
}

void BM_Parallel(benchmark::State &state) {
    Workload w(static_cast<std::size_t>(state.range(0)));
    auto src = w.source();
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(accumulate_outcomes_parallel(w.d, w.rows, w.terms(), src));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * w.terms()));
    state.counters["threads"] = static_cast<double>(state.range(1));
}

BENCHMARK(BM_Serial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)
    ->ArgsProduct({{4, 8}, {1, 2, 4}})
    ->ArgNames({"d", "threads"})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
