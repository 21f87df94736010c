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

#include "qkd2way/qsim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qkd2way {

namespace {

using Mat2 = std::array<Amplitude, 4>;  // row-major

constexpr double kInvSqrt2 = 0.70710678118654752440;

Mat2 single_wire_matrix(GateKind kind, double angle) {
  switch (kind) {
    case GateKind::Identity:
      return {1.0, 0.0, 0.0, 1.0};
    case GateKind::PauliX:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::PauliZ:
      return {1.0, 0.0, 0.0, -1.0};
    case GateKind::SpinFlip:
      // iY = ZX: |0> -> -|1>, |1> -> |0>.
      return {0.0, 1.0, -1.0, 0.0};
    case GateKind::Hadamard:
      return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    case GateKind::Rotation:
      return {std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle)};
    case GateKind::CNOT:
    case GateKind::AncillaRotation:
      break;
  }
  throw std::logic_error("single_wire_matrix: controlled gate");
}

/// Target-wire matrix applied when the control reads 1.
Mat2 controlled_block(const Gate& gate) {
  if (gate.kind == GateKind::CNOT) return single_wire_matrix(GateKind::PauliX, 0.0);
  return single_wire_matrix(GateKind::Rotation, gate.angle);
}

void check_wire(const StateVector& state, int wire) {
  if (wire < 0 || wire >= state.num_wires()) {
    throw std::out_of_range("wire " + std::to_string(wire) + " outside register of " +
                            std::to_string(state.num_wires()) + " wires");
  }
}

std::array<Amplitude, 8> apply_local(const StateVector& state, int wire, const Mat2& m, int control) {
  std::array<Amplitude, 8> out{};
  const auto in = state.amplitudes();
  const std::size_t bit = std::size_t{1} << wire;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i & bit) continue;
    const std::size_t j = i | bit;
    if (control >= 0 && !(i & (std::size_t{1} << control))) {
      out[i] = in[i];
      out[j] = in[j];
      continue;
    }
    out[i] = m[0] * in[i] + m[1] * in[j];
    out[j] = m[2] * in[i] + m[3] * in[j];
  }
  return out;
}

StateVector from_array(const std::array<Amplitude, 8>& amps, int num_wires) {
  return StateVector::from_amplitudes(std::span<const Amplitude>(amps.data(), std::size_t{1} << num_wires));
}

/// Keeps only amplitudes with `wire` == bit and renormalizes.
StateVector project(const StateVector& state, int wire, int bit) {
  std::array<Amplitude, 8> out{};
  const auto in = state.amplitudes();
  const std::size_t mask = std::size_t{1} << wire;
  double norm = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (((i & mask) != 0) == (bit != 0)) {
      out[i] = in[i];
      norm += std::norm(in[i]);
    }
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : out) a *= scale;
  return from_array(out, state.num_wires());
}

double probability_of_one(const StateVector& state, int wire) {
  const auto in = state.amplitudes();
  const std::size_t mask = std::size_t{1} << wire;
  double p = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i & mask) p += std::norm(in[i]);
  }
  return p;
}

/// Z measurement of an already-rotated frame.
Measurement measure_computational(const StateVector& state, int wire, Rng& rng) {
  const double p1 = probability_of_one(state, wire);
  const int bit = rng.uniform() < p1 ? 1 : 0;
  return {bit, project(state, wire, bit)};
}

}  // namespace

StateVector::StateVector(int num_wires) : num_wires_(num_wires) {
  if (num_wires < 1 || num_wires > kMaxWires) {
    throw std::length_error("StateVector supports 1.." + std::to_string(kMaxWires) + " wires");
  }
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::span<const Amplitude> amplitudes) {
  int wires = 0;
  while ((std::size_t{1} << wires) < amplitudes.size()) ++wires;
  if ((std::size_t{1} << wires) != amplitudes.size() || wires < 1 || wires > kMaxWires) {
    throw std::invalid_argument("amplitude count must be 2, 4 or 8");
  }
  StateVector s(wires);
  for (std::size_t i = 0; i < amplitudes.size(); ++i) s.amps_[i] = amplitudes[i];
  return s;
}

double StateVector::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amplitudes()) n += std::norm(a);
  return n;
}

StateVector StateVector::with_ancilla() const {
  if (num_wires_ >= kMaxWires) throw std::length_error("register already holds the maximum number of wires");
  StateVector s(num_wires_ + 1);
  // New wire is the most significant bit, so the |0> branch is the low half.
  for (std::size_t i = 0; i < size(); ++i) s.amps_[i] = amps_[i];
  for (std::size_t i = size(); i < s.size(); ++i) s.amps_[i] = 0.0;
  return s;
}

std::vector<Amplitude> gate_matrix(const Gate& gate) {
  if (!gate.is_controlled()) {
    const Mat2 m = single_wire_matrix(gate.kind, gate.angle);
    return {m.begin(), m.end()};
  }
  const Mat2 b = controlled_block(gate);
  return {
      1.0, 0.0, 0.0,  0.0,   //
      0.0, 1.0, 0.0,  0.0,   //
      0.0, 0.0, b[0], b[1],  //
      0.0, 0.0, b[2], b[3],
  };
}

StateVector prepare(Basis basis, int bit) {
  const std::array<Amplitude, 2> amps = basis == Basis::Z
                                            ? (bit ? std::array<Amplitude, 2>{0.0, 1.0} : std::array<Amplitude, 2>{1.0, 0.0})
                                            : std::array<Amplitude, 2>{kInvSqrt2, bit ? -kInvSqrt2 : kInvSqrt2};
  return StateVector::from_amplitudes(amps);
}

StateVector apply(const StateVector& state, const Gate& gate) {
  check_wire(state, gate.target);
  if (!gate.is_controlled()) {
    return from_array(apply_local(state, gate.target, single_wire_matrix(gate.kind, gate.angle), -1),
                      state.num_wires());
  }
  check_wire(state, gate.control);
  if (gate.control == gate.target) throw std::invalid_argument("control and target must differ");
  return from_array(apply_local(state, gate.target, controlled_block(gate), gate.control), state.num_wires());
}

double outcome_probability(const StateVector& state, int wire, Basis basis, int bit) {
  check_wire(state, wire);
  const StateVector frame = basis == Basis::X ? apply(state, Gate::hadamard(wire)) : state;
  const double p1 = probability_of_one(frame, wire);
  return bit ? p1 : 1.0 - p1;
}

Measurement measure(const StateVector& state, int wire, Basis basis, Rng& rng) {
  check_wire(state, wire);
  if (basis == Basis::Z) return measure_computational(state, wire, rng);
  Measurement m = measure_computational(apply(state, Gate::hadamard(wire)), wire, rng);
  m.state = apply(m.state, Gate::hadamard(wire));
  return m;
}

Measurement measure_rotated(const StateVector& state, int wire, double theta, Rng& rng) {
  check_wire(state, wire);
  Measurement m = measure_computational(apply(state, Gate::rotation(wire, -theta)), wire, rng);
  m.state = apply(m.state, Gate::rotation(wire, theta));
  return m;
}

double helstrom_angle(double overlap_angle) { return overlap_angle / 2.0 - std::numbers::pi / 4.0; }

int discriminate(const StateVector& state, int wire, double overlap_angle, Rng& rng) {
  if (!(overlap_angle >= 0.0 && overlap_angle <= std::numbers::pi / 2.0 + 1e-12)) {
    throw std::invalid_argument("discriminate: overlap angle must lie in [0, pi/2]");
  }
  return measure_rotated(state, wire, helstrom_angle(overlap_angle), rng).bit;
}

double overlap(const StateVector& a, const StateVector& b) {
  if (a.num_wires() != b.num_wires()) throw std::invalid_argument("overlap: wire-count mismatch");
  Amplitude sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return std::abs(sum);
}

bool same_ray(const StateVector& a, const StateVector& b, double tol) {
  return a.num_wires() == b.num_wires() && std::abs(overlap(a, b) - 1.0) <= tol;
}

}  // namespace qkd2way
