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

#ifndef QKD2WAY_ATTACKS_HPP
#define QKD2WAY_ATTACKS_HPP

#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "qkd2way/qsim.hpp"
#include "qkd2way/rng.hpp"
#include "qkd2way/types.hpp"

namespace qkd2way {

enum class AttackKind { None, IR, NORT, DCNOT, DCNOTStar };

std::string_view to_string(AttackKind kind);

/// Accepts none, ir, nort, dcnot, dcnot* / dcnotstar (case-insensitive).
AttackKind parse_attack_kind(std::string_view text);

/// Knobs for every attack; fields irrelevant to `kind` are ignored.
struct AttackParams {
  AttackKind kind = AttackKind::None;
  double xi = 1.0;                          // fraction of attacked rounds
  double x = std::numbers::pi / 2;          // forward ancilla angle (NORT)
  double x_prime = std::numbers::pi / 2;    // backward ancilla angle (NORT)
  double chi = 0.0;                         // backward flip probability (DCNOT*)

  /// Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;
};

/// Where a round's qubit travels: BB84 is one-way (forward leg only).
enum class Channel { OneWay, TwoWay };

/// Eve's per-round scratch. Created fresh for every round by begin_round().
struct EveRound {
  bool attacked = false;
  Basis basis = Basis::Z;  // IR measurement basis or NORT alignment
  int forward_reading = 0;
  int backward_reading = 0;
  bool flipped = false;    // DCNOT*: Eve applied iY on the way back
};

struct EveGuesses {
  std::optional<int> alice;  // guess of Alice's operation (or sender bit, BB84)
  std::optional<int> bob;    // guess of Bob's key bit
};

/// An eavesdropper acting at the forward (E1) and backward (E2) points of
/// the channel. Hooks see only the travelling state plus Eve's own ancilla
/// wires; the protocol never hands them Bob's basis, Bob's bit or Alice's
/// operation. Strategies are immutable, so one instance may be shared across
/// threads as long as each thread owns its Rng and EveRound.
class AttackStrategy {
 public:
  explicit AttackStrategy(AttackParams params) : params_(params) {}
  virtual ~AttackStrategy() = default;

  const AttackParams& params() const { return params_; }

  /// Draws the attacked flag (Bernoulli xi). Consumes exactly one draw.
  EveRound begin_round(Rng& rng) const;

  /// Called only on attacked rounds.
  virtual StateVector on_forward(const StateVector& state, EveRound& round, Rng& rng) const = 0;
  /// Called only on attacked two-way rounds that return from Alice.
  virtual StateVector on_backward(const StateVector& state, EveRound& round, Rng& rng) const = 0;
  /// Called only on attacked rounds that reach Bob (LM05 EM) or the BB84
  /// receiver. `state` is the register after the receiver's measurement.
  virtual EveGuesses finalize(const StateVector& state, EveRound& round, Channel channel, Rng& rng) const = 0;

  virtual bool supports(Channel channel) const = 0;

 private:
  AttackParams params_;
};

std::unique_ptr<AttackStrategy> no_attack();
std::unique_ptr<AttackStrategy> ir_attack(const AttackParams& params);
std::unique_ptr<AttackStrategy> nort_attack(const AttackParams& params);
std::unique_ptr<AttackStrategy> dcnot_attack(const AttackParams& params);

/// Validates `params` and dispatches on params.kind.
std::unique_ptr<AttackStrategy> make_attack(const AttackParams& params);

}  // namespace qkd2way

#endif  // QKD2WAY_ATTACKS_HPP
