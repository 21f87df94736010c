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

// Property suite for the batch runner: seed reproducibility, worker-count
// independence and Wilson interval behaviour.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qkd2way/montecarlo.hpp"

using namespace qkd2way;

namespace {

ProtocolConfig config(std::uint64_t rounds, std::uint64_t seed) {
  ProtocolConfig c;
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

std::vector<AttackParams> attacks() {
  AttackParams nort{AttackKind::NORT, 0.8};
  nort.x = std::numbers::pi / 5;
  AttackParams star{AttackKind::DCNOTStar, 1.0};
  star.chi = 0.3;
  return {AttackParams{}, AttackParams{AttackKind::IR, 0.5}, nort, AttackParams{AttackKind::DCNOT, 1.0}, star};
}

}  // namespace

TEST(MonteCarloProperty, SameSeedSameTallies) {
  for (const AttackParams& p : attacks()) {
    for (std::uint64_t seed : {0ULL, 1ULL, 123456789ULL}) {
      const auto a = run_batch(config(150000, seed), p);
      const auto b = run_batch(config(150000, seed), p);
      EXPECT_EQ(a.tallies, b.tallies) << to_string(p.kind);
    }
  }
}

TEST(MonteCarloProperty, DifferentSeedsDiffer) {
  const AttackParams p{AttackKind::IR, 1.0};
  EXPECT_NE(run_batch(config(100000, 1), p).tallies, run_batch(config(100000, 2), p).tallies);
}

TEST(MonteCarloProperty, WorkerCountDoesNotMatter) {
  for (const AttackParams& p : attacks()) {
    const ProtocolConfig c = config(4 * kChunkRounds + 999, 91);
    const Tallies serial = run_batch(c, p, {Execution::Serial, 0}).tallies;
    for (int w : {1, 2, 5, 16}) {
      EXPECT_EQ(run_batch(c, p, {Execution::Parallel, w}).tallies, serial) << to_string(p.kind) << " w=" << w;
    }
  }
}

TEST(MonteCarloProperty, PrefixRunsShareChunks) {
  // Chunk k draws from the same stream whatever the total, so the first
  // full chunks of a longer run equal a shorter run.
  const auto attack = make_attack({AttackKind::IR, 1.0});
  const Tallies shorter = run_tallies_serial(config(2 * kChunkRounds, 92), *attack);
  const Tallies longer_head = run_chunk(config(7 * kChunkRounds, 92), *attack, 0) +
                              run_chunk(config(7 * kChunkRounds, 92), *attack, 1);
  EXPECT_EQ(shorter, longer_head);
}

TEST(MonteCarloProperty, WilsonCoverage) {
  Rng rng(93);
  for (double p : {0.05, 0.25, 0.5}) {
    int covered = 0;
    for (int rep = 0; rep < 1000; ++rep) {
      Ratio r;
      for (int i = 0; i < 400; ++i) r.record(rng.bernoulli(p));
      covered += wilson_interval(r, kZ95).contains(p);
    }
    EXPECT_GE(covered, 930) << "p = " << p;
  }
}

TEST(MonteCarloProperty, IntervalsInsideUnitAndContainEstimate) {
  for (std::uint64_t n : {1ULL, 2ULL, 7ULL, 100ULL, 1000000ULL}) {
    for (std::uint64_t k = 0; k <= n; k += std::max<std::uint64_t>(1, n / 13)) {
      for (double z : {kZ95, kVerdictSigmas}) {
        const Interval iv = wilson_interval({k, n}, z);
        const double est = static_cast<double>(k) / static_cast<double>(n);
        EXPECT_GE(iv.lo, 0.0);
        EXPECT_LE(iv.hi, 1.0);
        EXPECT_LE(iv.lo, est);
        EXPECT_GE(iv.hi, est);
      }
    }
  }
}

TEST(MonteCarloProperty, EveryRateWithTrialsHasVerdict) {
  for (const AttackParams& p : attacks()) {
    const BatchReport r = run_batch(config(100000, 94), p);
    for (const auto& x : r.rates) {
      if (x.counts.trials > 0 && x.prediction) EXPECT_NE(x.verdict, Verdict::Skipped) << x.name;
      if (x.counts.trials > 0) {
        ASSERT_TRUE(x.ci95.has_value());
        EXPECT_LE(x.band->lo, x.ci95->lo);
        EXPECT_GE(x.band->hi, x.ci95->hi);
      }
      EXPECT_LE(x.counts.errors, x.counts.trials);
    }
  }
}
