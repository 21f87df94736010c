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

#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "qkd2way/attacks.hpp"
#include "qkd2way/csv.hpp"
#include "qkd2way/infotheory.hpp"
#include "qkd2way/montecarlo.hpp"
#include "qkd2way/photonics.hpp"
#include "qkd2way/protocol.hpp"
#include "qkd2way/types.hpp"

namespace qkd2way::cli {

namespace {

// Raised for flag combinations CLI11 cannot express on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct SimulateArgs {
  std::string protocol = "lm05";
  std::string attack = "none";
  double xi = 1.0;
  double x = AttackParams{}.x;
  double x_prime = AttackParams{}.x_prime;
  double chi = 0.0;
  std::uint64_t rounds = 1000000;
  std::uint64_t seed = 0;
  double c = ProtocolConfig{}.control_prob;
  double reveal = ProtocolConfig{}.reveal_fraction;
  std::string format = "table";
  std::string log;
  int workers = 0;
  bool serial = false;
};

struct CurvesArgs {
  std::string attack;
  std::string model = "identified";
  double grid_step = 0.001;
};

struct ThresholdsArgs {
  std::string model = "identified";
  std::string format = "table";
};

struct LinkArgs {
  LengthGrid grid;
  LinkBudget budget;
};

void add_link_options(CLI::App* sub, LinkArgs& a) {
  sub->add_option("--lmin", a.grid.lmin, "Shortest channel length [km]")->capture_default_str();
  sub->add_option("--lmax", a.grid.lmax, "Longest channel length [km]")->capture_default_str();
  sub->add_option("--lstep", a.grid.lstep, "Length step [km]")->capture_default_str();
  sub->add_option("--eta-d", a.budget.eta_d, "Detector efficiency")->capture_default_str();
  sub->add_option("--gamma-b", a.budget.gamma_b, "Bob's box transmission")->capture_default_str();
  sub->add_option("--gamma-a", a.budget.gamma_a, "Alice's box transmission")->capture_default_str();
  sub->add_option("--atten", a.budget.atten, "Fibre loss, base-10 exponent per km")->capture_default_str();
}

AttackParams attack_params(const SimulateArgs& a, const CLI::App& sub) {
  AttackParams p;
  p.kind = parse_attack_kind(a.attack);
  p.xi = a.xi;
  p.x = a.x;
  p.x_prime = a.x_prime;
  p.chi = a.chi;
  const bool nort = p.kind == AttackKind::NORT;
  if (!nort && (sub.count("--x") > 0 || sub.count("--xprime") > 0)) {
    throw UsageError("--x and --xprime only apply to --attack nort");
  }
  if (p.kind != AttackKind::DCNOTStar && sub.count("--chi") > 0) {
    throw UsageError("--chi only applies to --attack dcnot*");
  }
  if (p.kind == AttackKind::None && sub.count("--xi") > 0) throw UsageError("--xi needs an attack");
  p.validate();
  return p;
}

int do_simulate(const SimulateArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  ProtocolConfig config;
  config.protocol = parse_protocol(a.protocol);
  config.control_prob = a.c;
  config.reveal_fraction = a.reveal;
  config.rounds = a.rounds;
  config.seed = a.seed;
  config.validate();
  const AttackParams attack = attack_params(a, sub);

  RunOptions options;
  options.execution = a.serial ? Execution::Serial : Execution::Parallel;
  options.workers = a.workers;
  const BatchReport report = run_batch(config, attack, options);

  if (a.format == "csv") {
    write_report_csv(out, report);
  } else if (a.format == "jsonl") {
    write_report_jsonl(out, report);
  } else {
    write_report_table(out, report);
  }

  if (!a.log.empty()) {
    std::ofstream log(a.log, std::ios::binary);
    if (!log) throw UsageError("cannot write round log '" + a.log + "'");
    const auto strategy = make_attack(attack);
    write_round_log_csv(log, run_records(config, *strategy));
  }
  return compare(report, err) == 0 ? kExitOk : kExitVerificationFailed;
}

int do_curves(const CurvesArgs& a, std::ostream& out) {
  const EveCurve curve = parse_eve_curve(a.attack);
  write_curve_csv(out, curve_grid(curve, parse_noise_model(a.model), a.grid_step));
  return kExitOk;
}

std::string percent(const ThresholdCell& c) {
  if (!c.q1) return "N/A";
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << 100.0 * *c.q1;
  return s.str();
}

int do_thresholds(const ThresholdsArgs& a, std::ostream& out) {
  const auto rows = threshold_table(parse_noise_model(a.model));
  if (a.format == "csv") {
    out << "attack,lm05_dr,lm05_rr,bb84,lm05_dr_note,lm05_rr_note,bb84_note\n";
    for (const auto& r : rows) {
      auto value = [](const ThresholdCell& c) { return c.q1 ? csv::number(*c.q1) : std::string(); };
      csv::row(out, {r.attack, value(r.lm05_dr), value(r.lm05_rr), value(r.bb84), r.lm05_dr.reason, r.lm05_rr.reason,
                     r.bb84.reason});
    }
    return kExitOk;
  }
  out << "security thresholds on q1 (%), model " << a.model << '\n';
  out << std::left << std::setw(10) << "attack" << std::right << std::setw(9) << "LM05-DR" << std::setw(9)
      << "LM05-RR" << std::setw(9) << "BB84" << '\n';
  std::vector<std::string> notes;
  for (const auto& r : rows) {
    out << std::left << std::setw(10) << r.attack << std::right;
    for (const ThresholdCell* c : {&r.lm05_dr, &r.lm05_rr, &r.bb84}) out << std::setw(9) << percent(*c);
    out << '\n';
    for (const auto& [name, c] : {std::pair{"LM05-DR", &r.lm05_dr}, {"LM05-RR", &r.lm05_rr}, {"BB84", &r.bb84}}) {
      if (!c->q1) notes.push_back(std::string(r.attack) + " " + name + ": " + std::string(c->reason));
    }
  }
  for (const auto& n : notes) out << "N/A " << n << '\n';
  return kExitOk;
}

void check_link(const LinkArgs& a) {
  a.budget.validate();
  a.grid.points();
}

int do_gain(const LinkArgs& a, std::ostream& out) {
  check_link(a);
  write_gain_csv(out, sweep(Objective::SecureGain, Protocol::BB84, a.grid, a.budget), Protocol::BB84,
                 Objective::SecureGain, true);
  write_gain_csv(out, sweep(Objective::SecureGain, Protocol::LM05, a.grid, a.budget), Protocol::LM05,
                 Objective::SecureGain, false);
  return kExitOk;
}

int do_pns(const LinkArgs& a, std::ostream& out) {
  check_link(a);
  write_gain_csv(out, sweep(Objective::PnsMargin, Protocol::BB84, a.grid, a.budget), Protocol::BB84,
                 Objective::PnsMargin, true);
  write_gain_csv(out, sweep(Objective::PnsMargin, Protocol::LM05, a.grid, a.budget), Protocol::LM05,
                 Objective::PnsMargin, false);
  const auto l = find_crossover(a.budget, a.grid.lmin, a.grid.lmax);
  out << "# crossover_km: " << (l ? csv::number(*l) : std::string("none in range")) << '\n';
  return kExitOk;
}

// Splices --config file arguments in right after the subcommand so that
// later command-line flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::string> expanded{args.front()};
  for (auto& a : config_file_args(in)) expanded.push_back(std::move(a));
  expanded.insert(expanded.end(), args.begin() + 1, args.end());
  return expanded;
}

}  // namespace

std::vector<std::string> config_file_args(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::runtime_error("config line " + std::to_string(number) + ": expected key=value");
    }
    std::string key = trim(t.substr(0, eq));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key == "config") throw std::runtime_error("config files cannot include other config files");
    out.push_back("--" + key + "=" + trim(t.substr(eq + 1)));
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-way (LM05) versus BB84 QKD simulator and security analysis", "qkd2way"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  std::string out_path;
  std::string config_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Write results here instead of stdout");
    sub->add_option("--config", config_path, "key=value file; command-line flags override it");
  };

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run compared against closed-form rates");
  simulate->add_option("--protocol", sim.protocol, "lm05 or bb84")->capture_default_str();
  simulate->add_option("--attack", sim.attack, "none, ir, nort, dcnot or dcnot*")->capture_default_str();
  simulate->add_option("--xi", sim.xi, "Fraction of attacked rounds")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--x", sim.x, "Forward ancilla angle [rad]")->check(CLI::Range(0.0, 1.5707963267948966));
  simulate->add_option("--xprime", sim.x_prime, "Backward ancilla angle [rad]")
      ->check(CLI::Range(0.0, 1.5707963267948966));
  simulate->add_option("--chi", sim.chi, "Backward flip probability")->check(CLI::Range(0.0, 0.5));
  simulate->add_option("--rounds", sim.rounds, "Number of rounds")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Base seed")->envname("QKD2WAY_SEED")->capture_default_str();
  simulate->add_option("--c", sim.c, "Control Mode probability")->capture_default_str();
  simulate->add_option("--reveal", sim.reveal, "Share of EM rounds revealed")->capture_default_str();
  simulate->add_option("--format", sim.format, "table, csv or jsonl")
      ->check(CLI::IsMember({"table", "csv", "jsonl"}))
      ->capture_default_str();
  simulate->add_option("--log", sim.log, "Write the per-round log CSV here");
  simulate->add_option("--workers", sim.workers, "OpenMP threads, 0 for the default")->check(CLI::NonNegativeNumber);
  simulate->add_flag("--serial", sim.serial, "Use the single-threaded kernel");
  common(simulate);

  CurvesArgs cur;
  auto* curves = app.add_subcommand("curves", "Mutual information and secrecy capacities versus q1");
  curves->add_option("--attack", cur.attack, "ir, nort, dcnot*, generic, bb84_ir or bb84_opt")->required();
  curves->add_option("--model", cur.model, "identified or fixed:<Q_AB>")->capture_default_str();
  curves->add_option("--grid-step", cur.grid_step, "q1 step")->check(CLI::PositiveNumber)->capture_default_str();
  common(curves);

  ThresholdsArgs thr;
  auto* thresholds = app.add_subcommand("thresholds", "Security thresholds for single-particle attacks");
  thresholds->add_option("--model", thr.model, "identified or fixed:<Q_AB>")->capture_default_str();
  thresholds->add_option("--format", thr.format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();
  common(thresholds);

  LinkArgs gain_args;
  auto* gain = app.add_subcommand("gain", "Optimised secure gain versus channel length");
  add_link_options(gain, gain_args);
  common(gain);

  LinkArgs pns_args;
  auto* pns = app.add_subcommand("pns", "Optimised PNS security margin versus channel length");
  add_link_options(pns, pns_args);
  common(pns);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << out_path << "'\n";
      return kExitUsage;
    }
  }
  std::ostream& sink = out_path.empty() ? out : file;

  try {
    if (simulate->parsed()) return do_simulate(sim, *simulate, sink, err);
    if (curves->parsed()) return do_curves(cur, sink);
    if (thresholds->parsed()) return do_thresholds(thr, sink);
    if (gain->parsed()) return do_gain(gain_args, sink);
    return do_pns(pns_args, sink);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace qkd2way::cli
