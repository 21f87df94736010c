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

#ifndef QKD2WAY_MONTECARLO_HPP
#define QKD2WAY_MONTECARLO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qkd2way/attacks.hpp"
#include "qkd2way/protocol.hpp"

namespace qkd2way {

/// Rounds per chunk. Chunk k draws from Rng::stream(seed, k), so merged
/// results do not depend on how chunks are spread over threads.
inline constexpr std::uint64_t kChunkRounds = std::uint64_t{1} << 16;

enum class Execution { Serial, Parallel };

struct RunOptions {
  Execution execution = Execution::Parallel;
  int workers = 0;  // 0: OpenMP default
};

/// Tallies of rounds [begin, end) of chunk `chunk`.
Tallies run_chunk(const ProtocolConfig& config, const AttackStrategy& attack, std::uint64_t chunk);

/// Reference kernel: chunks one after another on the calling thread.
Tallies run_tallies_serial(const ProtocolConfig& config, const AttackStrategy& attack);

/// OpenMP kernel over chunks. Bit-identical to run_tallies_serial.
Tallies run_tallies_parallel(const ProtocolConfig& config, const AttackStrategy& attack, int workers = 0);

/// Every RoundRecord, using the same chunk streams as the tally kernels.
std::vector<RoundRecord> run_records(const ProtocolConfig& config, const AttackStrategy& attack);

struct Interval {
  double lo;
  double hi;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Wilson score interval at z standard deviations, clipped to [0, 1].
/// Trials must be positive.
Interval wilson_interval(const Ratio& r, double z);

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kVerdictSigmas = 5.0;

/// Closed-form expectations of each rate for an attack. Rates conditioned
/// on Eve having guessed (q_ae, q_be) refer to attacked rounds. Empty where
/// no closed form is available.
struct Predictions {
  std::optional<double> q1;
  std::optional<double> q_ab;
  std::optional<double> q_ae;
  std::optional<double> q_be;
  std::optional<double> q1_z;
  std::optional<double> q1_x;
};

Predictions predict_rates(Protocol protocol, const AttackParams& attack);

enum class Verdict { Pass, Fail, Skipped };

std::string_view to_string(Verdict v);

struct RateReport {
  std::string name;
  Ratio counts;
  std::optional<double> prediction;
  std::optional<Interval> ci95;   // empty when trials == 0
  std::optional<Interval> band;   // kVerdictSigmas Wilson interval
  Verdict verdict = Verdict::Skipped;

  double estimate() const { return counts.rate(); }
};

struct BatchReport {
  ProtocolConfig config;
  AttackParams attack;
  Tallies tallies;
  std::vector<RateReport> rates;  // q1, q_ab, q_ae, q_be, q1_z, q1_x
  double wall_seconds = 0.0;
};

/// Builds rate rows, intervals and verdicts from tallies.
BatchReport make_report(const ProtocolConfig& config, const AttackParams& attack, const Tallies& tallies);

/// Runs config.rounds rounds from config.seed and assembles the report.
/// Throws std::invalid_argument for invalid configs or an attack the
/// protocol cannot host.
BatchReport run_batch(const ProtocolConfig& config, const AttackParams& attack, RunOptions options = {});

/// 0 when no rate FAILs; otherwise 1, with the failing rates listed on
/// `diagnostics`. Skipped rates do not count.
int compare(const BatchReport& report, std::ostream& diagnostics);

void write_report_table(std::ostream& out, const BatchReport& report);
void write_report_csv(std::ostream& out, const BatchReport& report);
void write_report_jsonl(std::ostream& out, const BatchReport& report);

}  // namespace qkd2way

#endif  // QKD2WAY_MONTECARLO_HPP
