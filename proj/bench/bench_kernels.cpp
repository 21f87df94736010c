// Copyright 2026 The qkd2way Authors
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

// Serial reference kernels against their OpenMP counterparts.
//
//   ./build/bench/qkd2way_bench --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include <numbers>

#include "qkd2way/montecarlo.hpp"
#include "qkd2way/photonics.hpp"

namespace {

using namespace qkd2way;

ProtocolConfig batch_config(benchmark::State& state) {
  ProtocolConfig c;
  c.rounds = static_cast<std::uint64_t>(state.range(0));
  c.seed = 1;
  return c;
}

AttackParams nort_attack() {
  AttackParams p{AttackKind::NORT, 1.0};
  p.x = std::numbers::pi / 4;
  return p;
}

void BM_TalliesSerial(benchmark::State& state) {
  const ProtocolConfig c = batch_config(state);
  const auto attack = make_attack(nort_attack());
  for (auto _ : state) benchmark::DoNotOptimize(run_tallies_serial(c, *attack));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TalliesParallel(benchmark::State& state) {
  const ProtocolConfig c = batch_config(state);
  const auto attack = make_attack(nort_attack());
  for (auto _ : state) benchmark::DoNotOptimize(run_tallies_parallel(c, *attack));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
  const LengthGrid grid{0.0, 50.0, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(Objective::SecureGain, Protocol::LM05, grid));
}

void BM_SweepParallel(benchmark::State& state) {
  const LengthGrid grid{0.0, 50.0, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(sweep(Objective::SecureGain, Protocol::LM05, grid));
}

}  // namespace

BENCHMARK(BM_TalliesSerial)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TalliesParallel)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
