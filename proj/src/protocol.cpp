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

#include "qkd2way/protocol.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qkd2way/qsim.hpp"

namespace qkd2way {

namespace {

constexpr int kTravelling = 0;

void write_optional(std::ostream& out, const std::optional<int>& v) {
  if (v) out << *v;
}

}  // namespace

void ProtocolConfig::validate() const {
  if (!(control_prob >= 0.0 && control_prob <= 1.0)) throw std::invalid_argument("c must lie in [0, 1]");
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (!(reveal_fraction > 0.0 && reveal_fraction <= 1.0)) {
    throw std::invalid_argument("reveal fraction must lie in (0, 1]");
  }
}

std::optional<int> RoundRecord::decoded_op() const {
  if (protocol != Protocol::LM05 || mode != Mode::Encoding || !bob_outcome) return std::nullopt;
  return *bob_outcome ^ bob_bit;
}

double Ratio::rate() const {
  if (trials == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(errors) / static_cast<double>(trials);
}

Tallies& Tallies::operator+=(const Tallies& o) {
  q1 += o.q1;
  q_ab += o.q_ab;
  q_ae += o.q_ae;
  q_be += o.q_be;
  q1_z += o.q1_z;
  q1_x += o.q1_x;
  return *this;
}

Tallies operator+(Tallies a, const Tallies& b) { return a += b; }

RoundRecord run_round_lm05(const ProtocolConfig& config, const AttackStrategy& attack, Rng& rng) {
  RoundRecord r;
  r.protocol = Protocol::LM05;
  r.bob_basis = basis_from_bit(rng.bit());
  r.bob_bit = rng.bit();
  StateVector state = prepare(r.bob_basis, r.bob_bit);

  EveRound eve = attack.begin_round(rng);
  r.attacked = eve.attacked;
  if (eve.attacked) state = attack.on_forward(state, eve, rng);

  if (rng.bernoulli(config.control_prob)) {
    // Control Mode: Alice keeps the qubit, Bob sees nothing come back.
    r.mode = Mode::Control;
    r.alice_cm_basis = basis_from_bit(rng.bit());
    r.alice_cm_outcome = measure(state, kTravelling, *r.alice_cm_basis, rng).bit;
    return r;
  }

  r.mode = Mode::Encoding;
  const int op = rng.bit();
  r.alice_op = op;
  if (op) state = apply(state, Gate::spin_flip(kTravelling));
  r.revealed = rng.bernoulli(config.reveal_fraction);

  if (eve.attacked) state = attack.on_backward(state, eve, rng);
  Measurement bob = measure(state, kTravelling, r.bob_basis, rng);
  r.bob_outcome = bob.bit;

  if (eve.attacked) {
    const EveGuesses g = attack.finalize(bob.state, eve, Channel::TwoWay, rng);
    r.eve_alice_guess = g.alice;
    r.eve_bob_guess = g.bob;
  }
  return r;
}

RoundRecord run_round_bb84(const ProtocolConfig&, const AttackStrategy& attack, Rng& rng) {
  if (!attack.supports(Channel::OneWay)) {
    throw std::invalid_argument("attack '" + std::string(to_string(attack.params().kind)) +
                                "' needs a two-way channel and cannot run against BB84");
  }
  RoundRecord r;
  r.protocol = Protocol::BB84;
  r.mode = Mode::Control;
  r.bob_basis = basis_from_bit(rng.bit());
  r.bob_bit = rng.bit();
  StateVector state = prepare(r.bob_basis, r.bob_bit);

  EveRound eve = attack.begin_round(rng);
  r.attacked = eve.attacked;
  if (eve.attacked) state = attack.on_forward(state, eve, rng);

  r.alice_cm_basis = basis_from_bit(rng.bit());
  Measurement receiver = measure(state, kTravelling, *r.alice_cm_basis, rng);
  r.alice_cm_outcome = receiver.bit;

  if (eve.attacked) {
    const EveGuesses g = attack.finalize(receiver.state, eve, Channel::OneWay, rng);
    r.eve_alice_guess = g.alice;
    r.eve_bob_guess = g.bob;
  }
  return r;
}

RoundRecord run_round(const ProtocolConfig& config, const AttackStrategy& attack, Rng& rng) {
  return config.protocol == Protocol::LM05 ? run_round_lm05(config, attack, rng)
                                           : run_round_bb84(config, attack, rng);
}

void tally_into(Tallies& t, const RoundRecord& r) {
  if (r.mode == Mode::Control) {
    if (!r.alice_cm_basis || !r.alice_cm_outcome || *r.alice_cm_basis != r.bob_basis) return;
    const bool error = *r.alice_cm_outcome != r.bob_bit;
    t.q1.record(error);
    (r.bob_basis == Basis::Z ? t.q1_z : t.q1_x).record(error);
    if (r.protocol == Protocol::BB84) {
      t.q_ab.record(error);
      if (r.eve_alice_guess) t.q_ae.record(*r.eve_alice_guess != r.bob_bit);
      if (r.eve_bob_guess) t.q_be.record(*r.eve_bob_guess != *r.alice_cm_outcome);
    }
    return;
  }

  const auto decoded = r.decoded_op();
  if (!decoded || !r.alice_op) return;
  if (r.revealed) t.q_ab.record(*decoded != *r.alice_op);
  if (r.eve_alice_guess) t.q_ae.record(*r.eve_alice_guess != *r.alice_op);
  if (r.eve_bob_guess) t.q_be.record(*r.eve_bob_guess != *decoded);
}

Tallies tally(std::span<const RoundRecord> records) {
  Tallies t;
  for (const auto& r : records) tally_into(t, r);
  return t;
}

void write_round_log_csv(std::ostream& out, std::span<const RoundRecord> records) {
  out << "round,protocol,mode,bob_basis,bob_bit,alice_op,alice_cm_basis,alice_cm_outcome,revealed,"
         "bob_outcome,eve_alice_guess,eve_bob_guess,attacked\n";
  std::uint64_t index = 0;
  for (const auto& r : records) {
    out << index++ << ',' << to_string(r.protocol) << ',' << (r.mode == Mode::Encoding ? "EM" : "CM") << ','
        << to_string(r.bob_basis) << ',' << r.bob_bit << ',';
    write_optional(out, r.alice_op);
    out << ',';
    if (r.alice_cm_basis) out << to_string(*r.alice_cm_basis);
    out << ',';
    write_optional(out, r.alice_cm_outcome);
    out << ',' << (r.revealed ? 1 : 0) << ',';
    write_optional(out, r.bob_outcome);
    out << ',';
    write_optional(out, r.eve_alice_guess);
    out << ',';
    write_optional(out, r.eve_bob_guess);
    out << ',' << (r.attacked ? 1 : 0) << '\n';
  }
}

}  // namespace qkd2way
