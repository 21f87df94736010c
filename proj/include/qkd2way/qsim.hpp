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

#ifndef QKD2WAY_QSIM_HPP
#define QKD2WAY_QSIM_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qkd2way/rng.hpp"
#include "qkd2way/types.hpp"

namespace qkd2way {

using Amplitude = std::complex<double>;

/// Dense pure state over at most three qubit wires. Wire w corresponds to bit
/// w of the amplitude index, so wire 0 (the travelling qubit) is the least
/// significant bit and ancillae appended later take higher bits.
class StateVector {
 public:
  static constexpr int kMaxWires = 3;

  /// |0...0> on `num_wires` wires.
  explicit StateVector(int num_wires = 1);

  /// Takes amplitudes as given (length must be a power of two, <= 8). Does not
  /// normalize; callers constructing test fixtures are expected to pass unit
  /// vectors.
  static StateVector from_amplitudes(std::span<const Amplitude> amplitudes);

  int num_wires() const { return num_wires_; }
  std::size_t size() const { return std::size_t{1} << num_wires_; }

  std::span<const Amplitude> amplitudes() const { return {amps_.data(), size()}; }
  Amplitude operator[](std::size_t index) const { return amps_[index]; }

  double norm_squared() const;

  /// Appends one wire in |0>. Throws std::length_error past kMaxWires.
  StateVector with_ancilla() const;

 private:
  std::array<Amplitude, 8> amps_{};
  int num_wires_;
};

enum class GateKind {
  Identity,
  PauliX,
  PauliZ,
  SpinFlip,  // iY = ZX
  Hadamard,
  CNOT,
  AncillaRotation,
  Rotation,  // real rotation by `angle` on one wire
};

/// Single-wire gates use `target`; controlled gates use `control` and
/// `target`. AncillaRotation(x) leaves the target alone when the control is
/// |0> and rotates it by x in the real plane when the control is |1>, so an
/// ancilla starting in |0> ends up in |0> or cos x|0> + sin x|1>. At x = pi/2
/// it acts on |0>-ancillae exactly like a CNOT.
struct Gate {
  GateKind kind = GateKind::Identity;
  int control = -1;
  int target = 0;
  double angle = 0.0;

  static Gate identity(int wire) { return {GateKind::Identity, -1, wire, 0.0}; }
  static Gate pauli_x(int wire) { return {GateKind::PauliX, -1, wire, 0.0}; }
  static Gate pauli_z(int wire) { return {GateKind::PauliZ, -1, wire, 0.0}; }
  static Gate spin_flip(int wire) { return {GateKind::SpinFlip, -1, wire, 0.0}; }
  static Gate hadamard(int wire) { return {GateKind::Hadamard, -1, wire, 0.0}; }
  static Gate rotation(int wire, double angle) { return {GateKind::Rotation, -1, wire, angle}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, control, target, 0.0}; }
  static Gate ancilla_rotation(double x, int control, int target) {
    return {GateKind::AncillaRotation, control, target, x};
  }

  bool is_controlled() const { return kind == GateKind::CNOT || kind == GateKind::AncillaRotation; }
};

/// Row-major local matrix of a gate: 2x2 for single-wire gates, 4x4 for
/// controlled gates in the ordered basis |control target> = 00,01,10,11.
std::vector<Amplitude> gate_matrix(const Gate& gate);

/// One of |0>,|1>,|+>,|->: bit 0 maps to |0>/|+>, bit 1 to |1>/|->.
StateVector prepare(Basis basis, int bit);

/// U|state>. Throws std::out_of_range for a bad wire index and
/// std::invalid_argument when control == target.
StateVector apply(const StateVector& state, const Gate& gate);

/// Born probability of reading `bit` when `wire` is measured in `basis`.
double outcome_probability(const StateVector& state, int wire, Basis basis, int bit);

struct Measurement {
  int bit;
  StateVector state;  // normalized post-measurement state
};

/// Projective measurement of one wire. The returned state is collapsed onto
/// the observed eigenvector; other wires keep their conditional amplitudes.
Measurement measure(const StateVector& state, int wire, Basis basis, Rng& rng);

/// Projective measurement in the real basis {cos t|0> + sin t|1>,
/// -sin t|0> + cos t|1>}; outcome 0 is the first vector.
Measurement measure_rotated(const StateVector& state, int wire, double theta, Rng& rng);

/// Minimum-error guess between the two ancilla states produced by
/// AncillaRotation(x): 0 for |0>, 1 for cos x|0> + sin x|1>. The projective
/// measurement straddles the pair symmetrically, giving error (1 - sin x)/2
/// for either input. Throws std::invalid_argument if x is outside [0, pi/2].
int discriminate(const StateVector& state, int wire, double overlap_angle, Rng& rng);

/// Rotation angle of the minimum-error basis used by discriminate().
double helstrom_angle(double overlap_angle);

/// |<a|b>|, the phase-insensitive overlap. Throws on wire-count mismatch.
double overlap(const StateVector& a, const StateVector& b);

/// States equal up to global phase.
bool same_ray(const StateVector& a, const StateVector& b, double tol = 1e-9);

}  // namespace qkd2way

#endif  // QKD2WAY_QSIM_HPP
