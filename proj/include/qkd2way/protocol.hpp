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

#ifndef QKD2WAY_PROTOCOL_HPP
#define QKD2WAY_PROTOCOL_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "qkd2way/attacks.hpp"
#include "qkd2way/rng.hpp"
#include "qkd2way/types.hpp"

namespace qkd2way {

struct ProtocolConfig {
  Protocol protocol = Protocol::LM05;
  double control_prob = 0.25;   // c: probability of a Control Mode round
  std::uint64_t rounds = 1;
  std::uint64_t seed = 0;
  double reveal_fraction = 0.1; // share of EM rounds disclosed to estimate Q_AB

  /// Throws std::invalid_argument.
  void validate() const;
};

enum class Mode { Encoding, Control };

/// Everything that happened in one round.
///
/// LM05: Encoding rounds carry alice_op and bob_outcome; Control rounds carry
/// alice_cm_basis/outcome and Bob registers Lost (bob_outcome empty).
///
/// BB84: the sender's preparation lives in bob_basis/bob_bit and the
/// receiver's random-basis measurement in alice_cm_basis/outcome, mode is
/// Control. This is the same bookkeeping as an LM05 Control round, which is
/// itself a BB84 measurement.
struct RoundRecord {
  Protocol protocol = Protocol::LM05;
  Mode mode = Mode::Encoding;
  Basis bob_basis = Basis::Z;
  int bob_bit = 0;
  std::optional<int> alice_op;
  std::optional<Basis> alice_cm_basis;
  std::optional<int> alice_cm_outcome;
  bool revealed = false;
  std::optional<int> bob_outcome;  // empty = Lost
  std::optional<int> eve_alice_guess;
  std::optional<int> eve_bob_guess;
  bool attacked = false;

  /// Bob's decoded operation (outcome XOR preparation bit); LM05 EM only.
  std::optional<int> decoded_op() const;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct Ratio {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;

  void record(bool error) {
    ++trials;
    errors += error ? 1 : 0;
  }
  /// NaN when trials == 0.
  double rate() const;

  Ratio& operator+=(const Ratio& o) {
    errors += o.errors;
    trials += o.trials;
    return *this;
  }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// QBER counters. q1_z / q1_x split q1 by Bob's preparation basis.
struct Tallies {
  Ratio q1;
  Ratio q_ab;
  Ratio q_ae;
  Ratio q_be;
  Ratio q1_z;
  Ratio q1_x;

  Tallies& operator+=(const Tallies& o);
  friend bool operator==(const Tallies&, const Tallies&) = default;
};

Tallies operator+(Tallies a, const Tallies& b);

RoundRecord run_round_lm05(const ProtocolConfig& config, const AttackStrategy& attack, Rng& rng);

/// Throws std::invalid_argument if the attack needs a two-way channel.
RoundRecord run_round_bb84(const ProtocolConfig& config, const AttackStrategy& attack, Rng& rng);

/// Dispatches on config.protocol.
RoundRecord run_round(const ProtocolConfig& config, const AttackStrategy& attack, Rng& rng);

/// Adds one record to `t`.
void tally_into(Tallies& t, const RoundRecord& r);

/// LM05
///   q1:   matched-basis CM rounds where Alice's outcome != Bob's bit
///   q_ab: revealed EM rounds where Bob's decoded op != alice_op
///   q_ae: EM rounds with an Eve guess, guess != alice_op
///   q_be: EM rounds with an Eve guess, guess != Bob's decoded op
/// BB84 (sifted = receiver basis equals sender basis)
///   q1, q_ab: sifted rounds where receiver outcome != sender bit
///   q_ae: sifted rounds with an Eve guess, guess != sender bit
///   q_be: sifted rounds with an Eve guess, guess != receiver outcome
/// Lost rounds never enter a denominator.
Tallies tally(std::span<const RoundRecord> records);

/// Header plus one row per record; Lost and other absent fields are empty
/// cells.
void write_round_log_csv(std::ostream& out, std::span<const RoundRecord> records);

}  // namespace qkd2way

#endif  // QKD2WAY_PROTOCOL_HPP
