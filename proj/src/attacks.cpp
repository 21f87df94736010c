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

#include "qkd2way/attacks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace qkd2way {

namespace {

constexpr int kTravelling = 0;
constexpr int kForwardAncilla = 1;
constexpr int kBackwardAncilla = 2;

class NoAttack final : public AttackStrategy {
 public:
  NoAttack() : AttackStrategy(AttackParams{AttackKind::None, 0.0}) {}

  StateVector on_forward(const StateVector& s, EveRound&, Rng&) const override { return s; }
  StateVector on_backward(const StateVector& s, EveRound&, Rng&) const override { return s; }
  EveGuesses finalize(const StateVector&, EveRound&, Channel, Rng&) const override { return {}; }
  bool supports(Channel) const override { return true; }
};

/// Measure in a random basis on the way in, again in the same basis on the
/// way back; the XOR of the two readings is Alice's operation.
class InterceptResend final : public AttackStrategy {
 public:
  using AttackStrategy::AttackStrategy;

  StateVector on_forward(const StateVector& s, EveRound& round, Rng& rng) const override {
    round.basis = basis_from_bit(rng.bit());
    Measurement m = measure(s, kTravelling, round.basis, rng);
    round.forward_reading = m.bit;
    return m.state;
  }

  StateVector on_backward(const StateVector& s, EveRound& round, Rng& rng) const override {
    Measurement m = measure(s, kTravelling, round.basis, rng);
    round.backward_reading = m.bit;
    return m.state;
  }

  EveGuesses finalize(const StateVector&, EveRound& round, Channel channel, Rng&) const override {
    if (channel == Channel::OneWay) return {round.forward_reading, round.forward_reading};
    // Her backward reading predicts Bob's outcome and her forward reading
    // stands in for Bob's preparation, so the XOR is her guess of Bob's
    // decoded bit as well as of Alice's operation.
    const int op = round.forward_reading ^ round.backward_reading;
    return {op, op};
  }

  bool supports(Channel) const override { return true; }
};

/// Entangles an ancilla with the travelling qubit on each leg (D = 0 family),
/// aligned with Z or X at random, and reads both ancillae with minimum-error
/// measurements.
class NonOrthogonal final : public AttackStrategy {
 public:
  using AttackStrategy::AttackStrategy;

  StateVector on_forward(const StateVector& s, EveRound& round, Rng& rng) const override {
    round.basis = basis_from_bit(rng.bit());
    return entangle(s.with_ancilla(), round.basis, params().x, kForwardAncilla);
  }

  StateVector on_backward(const StateVector& s, EveRound& round, Rng&) const override {
    return entangle(s.with_ancilla(), round.basis, params().x_prime, kBackwardAncilla);
  }

  EveGuesses finalize(const StateVector& s, EveRound& round, Channel, Rng& rng) const override {
    Measurement first = measure_rotated(s, kForwardAncilla, helstrom_angle(params().x), rng);
    round.forward_reading = first.bit;
    round.backward_reading = discriminate(first.state, kBackwardAncilla, params().x_prime, rng);
    const int op = round.forward_reading ^ round.backward_reading;
    return {op, op};
  }

  bool supports(Channel channel) const override { return channel == Channel::TwoWay; }

 private:
  static StateVector entangle(StateVector s, Basis alignment, double angle, int ancilla) {
    if (alignment == Basis::X) s = apply(s, Gate::hadamard(kTravelling));
    s = apply(s, Gate::ancilla_rotation(angle, kTravelling, ancilla));
    if (alignment == Basis::X) s = apply(s, Gate::hadamard(kTravelling));
    return s;
  }
};

/// CNOT onto a fresh ancilla on the way in, same CNOT on the way back: the
/// ancilla ends up holding Alice's operation and Bob's state is restored.
/// The starred variant then flips the qubit with probability chi.
class DoubleCnot final : public AttackStrategy {
 public:
  using AttackStrategy::AttackStrategy;

  StateVector on_forward(const StateVector& s, EveRound&, Rng&) const override {
    return apply(s.with_ancilla(), Gate::cnot(kTravelling, kForwardAncilla));
  }

  StateVector on_backward(const StateVector& s, EveRound& round, Rng& rng) const override {
    StateVector out = apply(s, Gate::cnot(kTravelling, kForwardAncilla));
    if (params().kind == AttackKind::DCNOTStar) {
      round.flipped = rng.bernoulli(params().chi);
      if (round.flipped) out = apply(out, Gate::spin_flip(kTravelling));
    }
    return out;
  }

  EveGuesses finalize(const StateVector& s, EveRound& round, Channel, Rng& rng) const override {
    round.backward_reading = measure(s, kForwardAncilla, Basis::Z, rng).bit;
    // Her own flip is known to her, so it is folded into the prediction of
    // Bob's decoded bit but not into the guess of Alice's operation.
    return {round.backward_reading, round.backward_reading ^ static_cast<int>(round.flipped)};
  }

  bool supports(Channel channel) const override { return channel == Channel::TwoWay; }
};

void require_kind(const AttackParams& params, std::initializer_list<AttackKind> kinds, const char* who) {
  if (std::find(kinds.begin(), kinds.end(), params.kind) == kinds.end()) {
    throw std::invalid_argument(std::string(who) + ": wrong attack kind " + std::string(to_string(params.kind)));
  }
}

}  // namespace

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::None: return "none";
    case AttackKind::IR: return "ir";
    case AttackKind::NORT: return "nort";
    case AttackKind::DCNOT: return "dcnot";
    case AttackKind::DCNOTStar: return "dcnot*";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "none") return AttackKind::None;
  if (lower == "ir") return AttackKind::IR;
  if (lower == "nort") return AttackKind::NORT;
  if (lower == "dcnot") return AttackKind::DCNOT;
  if (lower == "dcnot*" || lower == "dcnotstar") return AttackKind::DCNOTStar;
  throw std::invalid_argument("unknown attack '" + std::string(text) + "'");
}

void AttackParams::validate() const {
  constexpr double kHalfPi = std::numbers::pi / 2;
  constexpr double kSlack = 1e-12;
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in [0, 1]");
  if (!(x >= 0.0 && x <= kHalfPi + kSlack)) throw std::invalid_argument("x must lie in [0, pi/2]");
  if (!(x_prime >= 0.0 && x_prime <= kHalfPi + kSlack)) throw std::invalid_argument("x' must lie in [0, pi/2]");
  if (!(chi >= 0.0 && chi <= 0.5)) throw std::invalid_argument("chi must lie in [0, 0.5]");
}

EveRound AttackStrategy::begin_round(Rng& rng) const {
  EveRound round;
  round.attacked = rng.bernoulli(params_.kind == AttackKind::None ? 0.0 : params_.xi);
  return round;
}

std::unique_ptr<AttackStrategy> no_attack() { return std::make_unique<NoAttack>(); }

std::unique_ptr<AttackStrategy> ir_attack(const AttackParams& params) {
  require_kind(params, {AttackKind::IR}, "ir_attack");
  params.validate();
  return std::make_unique<InterceptResend>(params);
}

std::unique_ptr<AttackStrategy> nort_attack(const AttackParams& params) {
  require_kind(params, {AttackKind::NORT}, "nort_attack");
  params.validate();
  return std::make_unique<NonOrthogonal>(params);
}

std::unique_ptr<AttackStrategy> dcnot_attack(const AttackParams& params) {
  require_kind(params, {AttackKind::DCNOT, AttackKind::DCNOTStar}, "dcnot_attack");
  params.validate();
  return std::make_unique<DoubleCnot>(params);
}

std::unique_ptr<AttackStrategy> make_attack(const AttackParams& params) {
  switch (params.kind) {
    case AttackKind::None: return no_attack();
    case AttackKind::IR: return ir_attack(params);
    case AttackKind::NORT: return nort_attack(params);
    case AttackKind::DCNOT:
    case AttackKind::DCNOTStar: return dcnot_attack(params);
  }
  throw std::invalid_argument("make_attack: unknown kind");
}

}  // namespace qkd2way
