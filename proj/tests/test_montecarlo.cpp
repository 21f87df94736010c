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

#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qkd2way/montecarlo.hpp"

using namespace qkd2way;

namespace {

ProtocolConfig config(std::uint64_t rounds, std::uint64_t seed, Protocol p = Protocol::LM05) {
  ProtocolConfig c;
  c.protocol = p;
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

const RateReport& rate(const BatchReport& r, std::string_view name) {
  for (const auto& x : r.rates) {
    if (x.name == name) return x;
  }
  throw std::logic_error("no rate " + std::string(name));
}

}  // namespace

TEST(Wilson, TextbookValue) {
  // 5 successes in 10 trials at 95%: (0.2366, 0.7634).
  const Interval iv = wilson_interval({5, 10}, kZ95);
  EXPECT_NEAR(iv.lo, 0.2366, 1e-4);
  EXPECT_NEAR(iv.hi, 0.7634, 1e-4);
}

TEST(Wilson, ExtremesPinnedToUnitInterval) {
  const Interval zero = wilson_interval({0, 1000}, 5.0);
  EXPECT_EQ(zero.lo, 0.0);
  EXPECT_GT(zero.hi, 0.0);
  const Interval all = wilson_interval({1000, 1000}, 5.0);
  EXPECT_EQ(all.hi, 1.0);
  EXPECT_LT(all.lo, 1.0);
  EXPECT_THROW(wilson_interval({0, 0}, 1.0), std::invalid_argument);
}

TEST(Predictions, ClosedForms) {
  AttackParams nort{AttackKind::NORT, 1.0};
  nort.x = std::numbers::pi / 4;
  const Predictions p = predict_rates(Protocol::LM05, nort);
  EXPECT_NEAR(*p.q1, (1.0 - 1.0 / std::sqrt(2.0)) / 4.0, 1e-15);
  EXPECT_NEAR(*p.q1, 0.073223, 1e-6);
  EXPECT_NEAR(*p.q_be, (2.0 - 1.0 / std::sqrt(2.0)) / 4.0, 1e-15);

  nort.x_prime = 1.0;
  EXPECT_FALSE(predict_rates(Protocol::LM05, nort).q_be.has_value());

  const Predictions none = predict_rates(Protocol::LM05, {});
  EXPECT_EQ(*none.q1, 0.0);
  EXPECT_FALSE(none.q_ae.has_value());

  AttackParams star{AttackKind::DCNOTStar, 0.5};
  star.chi = 0.2;
  EXPECT_DOUBLE_EQ(*predict_rates(Protocol::LM05, star).q_ab, 0.1);
  EXPECT_DOUBLE_EQ(*predict_rates(Protocol::BB84, {AttackKind::IR, 1.0}).q_ae, 0.25);
}

TEST(RunBatch, InterceptResendPasses) {
  const BatchReport r = run_batch(config(1000000, 71), {AttackKind::IR, 1.0});
  EXPECT_EQ(rate(r, "q1").verdict, Verdict::Pass);
  EXPECT_EQ(rate(r, "q_be").verdict, Verdict::Pass);
  EXPECT_EQ(rate(r, "q_ae").verdict, Verdict::Pass);
  EXPECT_EQ(rate(r, "q_ae").counts.errors, 0u);
  std::ostringstream diag;
  EXPECT_EQ(compare(r, diag), 0);
  EXPECT_EQ(diag.str(), "");
}

TEST(RunBatch, NoAttackIsClean) {
  const BatchReport r = run_batch(config(100000, 72), {});
  for (const auto& x : r.rates) EXPECT_EQ(x.counts.errors, 0u) << x.name;
  EXPECT_EQ(rate(r, "q_ae").verdict, Verdict::Skipped);
  EXPECT_EQ(rate(r, "q_be").verdict, Verdict::Skipped);
  EXPECT_EQ(rate(r, "q1").verdict, Verdict::Pass);
}

TEST(RunBatch, NonOrthogonalQuarterTurn) {
  AttackParams p{AttackKind::NORT, 1.0};
  p.x = std::numbers::pi / 4;
  const BatchReport r = run_batch(config(1000000, 73), p);
  EXPECT_EQ(rate(r, "q1").verdict, Verdict::Pass);
  std::ostringstream diag;
  EXPECT_EQ(compare(r, diag), 0) << diag.str();
}

TEST(RunBatch, RejectsAttackTheProtocolCannotHost) {
  EXPECT_THROW(run_batch(config(10, 74, Protocol::BB84), {AttackKind::DCNOT, 1.0}), std::invalid_argument);
  EXPECT_THROW(run_batch(config(0, 74), {}), std::invalid_argument);
}

TEST(Compare, NamesFailingRate) {
  Tallies t;
  t.q1 = {500, 1000};  // far from the IR prediction of 0.25
  t.q_ab = {250, 1000};
  const BatchReport r = make_report(config(1, 0), {AttackKind::IR, 1.0}, t);
  std::ostringstream diag;
  EXPECT_NE(compare(r, diag), 0);
  EXPECT_NE(diag.str().find("q1"), std::string::npos);
  EXPECT_EQ(diag.str().find("q_ab"), std::string::npos);
  // No Eve guesses were counted: skipped, not failed.
  EXPECT_EQ(rate(r, "q_ae").verdict, Verdict::Skipped);
  EXPECT_FALSE(rate(r, "q_ae").ci95.has_value());
}

TEST(Compare, AllSkippedIsSuccess) {
  std::ostringstream diag;
  EXPECT_EQ(compare(make_report(config(1, 0), {}, Tallies{}), diag), 0);
}

TEST(Kernels, ParallelMatchesSerialAcrossWorkerCounts) {
  // Deliberately not a multiple of the chunk size.
  const ProtocolConfig c = config(5 * kChunkRounds + 1234, 75);
  AttackParams p{AttackKind::NORT, 0.6};
  p.x = 0.8;
  p.x_prime = 1.1;
  const auto attack = make_attack(p);
  const Tallies serial = run_tallies_serial(c, *attack);
  for (int w : {1, 2, 3, 4, 8}) EXPECT_EQ(run_tallies_parallel(c, *attack, w), serial) << w << " workers";
}

TEST(Kernels, RecordsReproduceTallies) {
  const ProtocolConfig c = config(2 * kChunkRounds + 77, 76);
  const auto attack = make_attack({AttackKind::IR, 0.5});
  const auto records = run_records(c, *attack);
  ASSERT_EQ(records.size(), c.rounds);
  EXPECT_EQ(tally(records), run_tallies_serial(c, *attack));
}

TEST(Kernels, ChunkSumIsTotal) {
  const ProtocolConfig c = config(3 * kChunkRounds, 77);
  const auto attack = make_attack({AttackKind::DCNOT, 1.0});
  const Tallies total = run_chunk(c, *attack, 0) + run_chunk(c, *attack, 1) + run_chunk(c, *attack, 2);
  EXPECT_EQ(total, run_tallies_serial(c, *attack));
}

TEST(Reports, CsvLayout) {
  const BatchReport r = run_batch(config(20000, 78), {AttackKind::IR, 1.0});
  std::ostringstream out;
  write_report_csv(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "protocol,attack,xi,x,x_prime,chi,c,reveal,rounds,seed,rate,errors,trials,estimate,ci95_low,ci95_high,"
            "prediction,band_low,band_high,verdict");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.rfind("lm05,ir,1,", 0), 0u) << line;
  }
  EXPECT_EQ(rows, 6);
}

TEST(Reports, JsonlRecordsParse) {
  const BatchReport r = run_batch(config(20000, 79), {});
  std::ostringstream out;
  write_report_jsonl(out, r);
  std::istringstream in(out.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("rate"), r.rates[n].name);
    EXPECT_EQ(j.at("trials").get<std::uint64_t>(), r.rates[n].counts.trials);
    EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 79u);
    if (r.rates[n].counts.trials == 0) {
      EXPECT_TRUE(j.at("estimate").is_null());
    }
    EXPECT_FALSE(j.contains("wall_seconds"));
    ++n;
  }
  EXPECT_EQ(n, 6);
}

TEST(Reports, MachineFormatsIgnoreTiming) {
  BatchReport a = run_batch(config(30000, 80), {AttackKind::IR, 0.5});
  BatchReport b = run_batch(config(30000, 80), {AttackKind::IR, 0.5}, {Execution::Serial, 0});
  a.wall_seconds = 1.0;
  b.wall_seconds = 2.0;
  std::ostringstream ca, cb, ja, jb;
  write_report_csv(ca, a);
  write_report_csv(cb, b);
  write_report_jsonl(ja, a);
  write_report_jsonl(jb, b);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(ja.str(), jb.str());
}

TEST(Reports, TableMentionsEveryRate) {
  std::ostringstream out;
  write_report_table(out, run_batch(config(10000, 81), {AttackKind::IR, 1.0}));
  for (const char* name : {"q1", "q_ab", "q_ae", "q_be", "q1_z", "q1_x", "wall time"}) {
    EXPECT_NE(out.str().find(name), std::string::npos) << name;
  }
}
