// SPDX-License-Identifier: Apache-2.0
//
// otfs-isac-lab: link-level NOMA-assisted OTFS-ISAC simulation
// Copyright (C) 2026 The otfs-isac-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "otfs_isac/array_geometry.hpp"
#include "otfs_isac/channel.hpp"
#include "otfs_isac/dd_signal.hpp"
#include "otfs_isac/noma_alloc.hpp"
#include "otfs_isac/sensing.hpp"

#include <benchmark/benchmark.h>

using namespace otfs_isac;

namespace {

void BM_Modulate(benchmark::State& state)
{
    const auto size = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    const DdGrid dd = qpsk_frame(size, size, double(size * size), rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(modulate(dd));
    state.SetItemsProcessed(state.iterations() * int64_t(size * size));
}
BENCHMARK(BM_Modulate)->RangeMultiplier(2)->Range(32, 1024)->Unit(benchmark::kMicrosecond);

void BM_Demodulate(benchmark::State& state)
{
    const auto size = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    const TimeSeries ts = modulate(qpsk_frame(size, size, double(size * size), rng));
    for (auto _ : state)
        benchmark::DoNotOptimize(demodulate(ts));
    state.SetItemsProcessed(state.iterations() * int64_t(size * size));
}
BENCHMARK(BM_Demodulate)->RangeMultiplier(2)->Range(32, 1024)->Unit(benchmark::kMicrosecond);

// Delay lags limited to 64, as in the simulator.
void BM_MatchedFilterMap(benchmark::State& state)
{
    const auto size = static_cast<std::size_t>(state.range(0));
    const TimeSeries tx = modulate(pilot_frame(size, size, double(size * size)));
    const FrameLayout l = tx.layout();
    Rng rng(3);
    const Path los{cplx(1.0, 0.0), 5.0 * l.delay_bin_s(), 3.0 * l.doppler_bin_hz(), {}, true};
    const TimeSeries rx = apply_comm_channel(tx, PathSet(std::vector<Path>{los}), {}, {1, 1}, 0.0, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(matched_filter_map(rx, tx, 64));
}
BENCHMARK(BM_MatchedFilterMap)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

void BM_Music(benchmark::State& state)
{
    const UpaConfig arrays{8, 8};
    const auto el = Eigen::Index(arrays.elements());
    Rng rng(4);
    const Eigen::VectorXcd a = steering(arrays, Direction(0.3, 0.7)) * std::sqrt(double(el));
    Eigen::MatrixXcd x(el, 64);
    for (Eigen::Index t = 0; t < 64; ++t) {
        x.col(t) = a * complex_gaussian(rng, 1.0);
        for (Eigen::Index i = 0; i < el; ++i)
            x(i, t) += complex_gaussian(rng, 0.01);
    }
    const AngleGrid grid = state.range(0) ? AngleGrid{} : AngleGrid::around(Direction(0.3, 0.7), 0.1);
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_angles(x, 1, arrays, grid));
}
BENCHMARK(BM_Music)->Arg(0)->Arg(1)->ArgNames({"full_scan"})->Unit(benchmark::kMillisecond);

void BM_GridOracle(benchmark::State& state)
{
    const ChannelGains g(0.2, 1.0, 0.05, 0.01, 1.0);
    const auto steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(grid_oracle(g, Objective::sr, {0.5, 0.0}, Bound::lower, steps));
}
BENCHMARK(BM_GridOracle)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ClosedForm(benchmark::State& state)
{
    const ChannelGains g(0.2, 1.0, 0.05, 0.01, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmf_perfect(g));
        benchmark::DoNotOptimize(mmf_imperfect(g, Bound::lower));
    }
}
BENCHMARK(BM_ClosedForm);

} // namespace

BENCHMARK_MAIN();
