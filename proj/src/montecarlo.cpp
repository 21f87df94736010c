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

#include "qkd2way/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qkd2way/csv.hpp"

namespace qkd2way {

namespace {

std::uint64_t chunk_count(std::uint64_t rounds) { return (rounds + kChunkRounds - 1) / kChunkRounds; }

void check_runnable(const ProtocolConfig& config, const AttackStrategy& attack) {
  config.validate();
  const Channel channel = config.protocol == Protocol::LM05 ? Channel::TwoWay : Channel::OneWay;
  if (!attack.supports(channel)) {
    throw std::invalid_argument("attack '" + std::string(to_string(attack.params().kind)) + "' cannot run against " +
                                std::string(to_string(config.protocol)));
  }
}

std::pair<std::uint64_t, std::uint64_t> chunk_bounds(const ProtocolConfig& config, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * kChunkRounds;
  return {begin, std::min(config.rounds, begin + kChunkRounds)};
}

bool is_half_pi(double v) { return std::abs(v - std::numbers::pi / 2) < 1e-12; }

std::string cell(const std::optional<double>& v) { return v ? csv::number(*v) : std::string(); }

}  // namespace

Tallies run_chunk(const ProtocolConfig& config, const AttackStrategy& attack, std::uint64_t chunk) {
  const auto [begin, end] = chunk_bounds(config, chunk);
  Rng rng = Rng::stream(config.seed, chunk);
  Tallies t;
  for (std::uint64_t i = begin; i < end; ++i) tally_into(t, run_round(config, attack, rng));
  return t;
}

Tallies run_tallies_serial(const ProtocolConfig& config, const AttackStrategy& attack) {
  check_runnable(config, attack);
  Tallies total;
  for (std::uint64_t k = 0; k < chunk_count(config.rounds); ++k) total += run_chunk(config, attack, k);
  return total;
}

Tallies run_tallies_parallel(const ProtocolConfig& config, const AttackStrategy& attack, int workers) {
  check_runnable(config, attack);
  const auto chunks = static_cast<long>(chunk_count(config.rounds));
  std::vector<Tallies> partial(static_cast<std::size_t>(chunks));
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long k = 0; k < chunks; ++k) partial[k] = run_chunk(config, attack, static_cast<std::uint64_t>(k));
  Tallies total;
  for (const auto& t : partial) total += t;
  return total;
}

std::vector<RoundRecord> run_records(const ProtocolConfig& config, const AttackStrategy& attack) {
  check_runnable(config, attack);
  std::vector<RoundRecord> out;
  out.reserve(config.rounds);
  for (std::uint64_t k = 0; k < chunk_count(config.rounds); ++k) {
    const auto [begin, end] = chunk_bounds(config, k);
    Rng rng = Rng::stream(config.seed, k);
    for (std::uint64_t i = begin; i < end; ++i) out.push_back(run_round(config, attack, rng));
  }
  return out;
}

Interval wilson_interval(const Ratio& r, double z) {
  if (r.trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  const double n = static_cast<double>(r.trials);
  const double p = r.rate();
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (r.errors == 0) iv.lo = 0.0;
  if (r.errors == r.trials) iv.hi = 1.0;
  return iv;
}

Predictions predict_rates(Protocol protocol, const AttackParams& a) {
  Predictions p;
  const double xi = a.xi;
  if (protocol == Protocol::BB84) {
    switch (a.kind) {
      case AttackKind::None:
        p.q1 = p.q_ab = p.q1_z = p.q1_x = 0.0;
        break;
      case AttackKind::IR:
        p.q1 = p.q_ab = p.q1_z = p.q1_x = 0.25 * xi;
        p.q_ae = p.q_be = 0.25;
        break;
      default:
        break;
    }
    return p;
  }

  switch (a.kind) {
    case AttackKind::None:
      p.q1 = p.q_ab = p.q1_z = p.q1_x = 0.0;
      break;
    case AttackKind::IR:
      p.q1 = p.q_ab = p.q1_z = p.q1_x = 0.25 * xi;
      p.q_ae = 0.0;
      p.q_be = 0.25;
      break;
    case AttackKind::NORT: {
      const double s = std::sin(a.x);
      const double sp = std::sin(a.x_prime);
      p.q1 = p.q1_z = p.q1_x = xi * (1.0 - std::cos(a.x)) / 4.0;
      // Mismatched alignment leaves Bob's two branches with coherence
      // cos x cos x'.
      p.q_ab = xi * (1.0 - std::cos(a.x) * std::cos(a.x_prime)) / 4.0;
      // Exactly one of the two ancilla readings wrong.
      p.q_ae = (1.0 - s * sp) / 2.0;
      if (is_half_pi(a.x_prime)) p.q_be = (2.0 - s) / 4.0;
      break;
    }
    case AttackKind::DCNOT:
    case AttackKind::DCNOTStar:
      p.q1 = 0.25 * xi;
      p.q1_z = 0.0;
      p.q1_x = 0.5 * xi;
      p.q_ab = a.kind == AttackKind::DCNOTStar ? xi * a.chi : 0.0;
      p.q_ae = 0.0;
      p.q_be = 0.0;
      break;
  }
  return p;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Skipped: return "SKIP";
  }
  return "?";
}

BatchReport make_report(const ProtocolConfig& config, const AttackParams& attack, const Tallies& tallies) {
  BatchReport report{config, attack, tallies, {}, 0.0};
  const Predictions pred = predict_rates(config.protocol, attack);
  auto add = [&](const char* name, const Ratio& counts, const std::optional<double>& prediction) {
    RateReport r{name, counts, prediction, std::nullopt, std::nullopt, Verdict::Skipped};
    if (counts.trials > 0) {
      r.ci95 = wilson_interval(counts, kZ95);
      r.band = wilson_interval(counts, kVerdictSigmas);
      if (prediction) r.verdict = r.band->contains(*prediction) ? Verdict::Pass : Verdict::Fail;
    }
    report.rates.push_back(std::move(r));
  };
  add("q1", tallies.q1, pred.q1);
  add("q_ab", tallies.q_ab, pred.q_ab);
  add("q_ae", tallies.q_ae, pred.q_ae);
  add("q_be", tallies.q_be, pred.q_be);
  add("q1_z", tallies.q1_z, pred.q1_z);
  add("q1_x", tallies.q1_x, pred.q1_x);
  return report;
}

BatchReport run_batch(const ProtocolConfig& config, const AttackParams& attack, RunOptions options) {
  const auto strategy = make_attack(attack);
  const auto start = std::chrono::steady_clock::now();
  const Tallies tallies = options.execution == Execution::Serial
                              ? run_tallies_serial(config, *strategy)
                              : run_tallies_parallel(config, *strategy, options.workers);
  const auto stop = std::chrono::steady_clock::now();
  BatchReport report = make_report(config, attack, tallies);
  report.wall_seconds = std::chrono::duration<double>(stop - start).count();
  return report;
}

int compare(const BatchReport& report, std::ostream& diagnostics) {
  int status = 0;
  for (const auto& r : report.rates) {
    if (r.verdict != Verdict::Fail) continue;
    diagnostics << "FAIL " << r.name << ": measured " << r.counts.errors << '/' << r.counts.trials << " = "
                << r.estimate() << ", predicted " << *r.prediction << ", " << kVerdictSigmas << "-sigma band ["
                << r.band->lo << ", " << r.band->hi << "]\n";
    status = 1;
  }
  return status;
}

void write_report_table(std::ostream& out, const BatchReport& report) {
  const auto& c = report.config;
  const auto& a = report.attack;
  out << "protocol " << to_string(c.protocol) << ", attack " << to_string(a.kind) << " (xi=" << a.xi
      << ", x=" << a.x << ", x'=" << a.x_prime << ", chi=" << a.chi << "), c=" << c.control_prob
      << ", reveal=" << c.reveal_fraction << ", rounds=" << c.rounds << ", seed=" << c.seed << '\n';
  out << std::left << std::setw(6) << "rate" << std::right << std::setw(10) << "errors" << std::setw(10) << "trials"
      << std::setw(12) << "estimate" << std::setw(26) << "95% Wilson" << std::setw(12) << "predicted"
      << std::setw(8) << "verdict" << '\n';
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::fixed << std::setprecision(6);
  for (const auto& r : report.rates) {
    out << std::left << std::setw(6) << r.name << std::right << std::setw(10) << r.counts.errors << std::setw(10)
        << r.counts.trials;
    if (r.counts.trials > 0) {
      std::ostringstream ci;
      ci << std::fixed << std::setprecision(6) << '[' << r.ci95->lo << ", " << r.ci95->hi << ']';
      out << std::setw(12) << r.estimate() << std::setw(26) << ci.str();
    } else {
      out << std::setw(12) << "-" << std::setw(26) << "-";
    }
    if (r.prediction) {
      out << std::setw(12) << *r.prediction;
    } else {
      out << std::setw(12) << "-";
    }
    out << std::setw(8) << to_string(r.verdict) << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
  out << "wall time " << report.wall_seconds << " s\n";
}

void write_report_csv(std::ostream& out, const BatchReport& report) {
  const auto& c = report.config;
  const auto& a = report.attack;
  out << "protocol,attack,xi,x,x_prime,chi,c,reveal,rounds,seed,rate,errors,trials,estimate,ci95_low,ci95_high,"
         "prediction,band_low,band_high,verdict\n";
  for (const auto& r : report.rates) {
    csv::row(out, {to_string(c.protocol), to_string(a.kind), csv::number(a.xi), csv::number(a.x),
                   csv::number(a.x_prime), csv::number(a.chi), csv::number(c.control_prob),
                   csv::number(c.reveal_fraction), std::to_string(c.rounds), std::to_string(c.seed), r.name,
                   std::to_string(r.counts.errors), std::to_string(r.counts.trials), csv::number(r.estimate()),
                   r.ci95 ? csv::number(r.ci95->lo) : std::string(), r.ci95 ? csv::number(r.ci95->hi) : std::string(),
                   cell(r.prediction), r.band ? csv::number(r.band->lo) : std::string(),
                   r.band ? csv::number(r.band->hi) : std::string(), to_string(r.verdict)});
  }
}

void write_report_jsonl(std::ostream& out, const BatchReport& report) {
  using nlohmann::json;
  const auto& c = report.config;
  const auto& a = report.attack;
  for (const auto& r : report.rates) {
    json j;
    j["protocol"] = to_string(c.protocol);
    j["attack"] = to_string(a.kind);
    j["xi"] = a.xi;
    j["x"] = a.x;
    j["x_prime"] = a.x_prime;
    j["chi"] = a.chi;
    j["c"] = c.control_prob;
    j["reveal"] = c.reveal_fraction;
    j["rounds"] = c.rounds;
    j["seed"] = c.seed;
    j["rate"] = r.name;
    j["errors"] = r.counts.errors;
    j["trials"] = r.counts.trials;
    j["estimate"] = r.counts.trials > 0 ? json(r.estimate()) : json(nullptr);
    j["ci95"] = r.ci95 ? json::array({r.ci95->lo, r.ci95->hi}) : json(nullptr);
    j["prediction"] = r.prediction ? json(*r.prediction) : json(nullptr);
    j["band"] = r.band ? json::array({r.band->lo, r.band->hi}) : json(nullptr);
    j["verdict"] = to_string(r.verdict);
    out << j.dump() << '\n';
  }
}

}  // namespace qkd2way
