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

#ifndef QKD2WAY_INFOTHEORY_HPP
#define QKD2WAY_INFOTHEORY_HPP

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace qkd2way {

/// Shannon entropy of a Bernoulli(p) variable in bits, with 0 log 0 = 0.
/// Throws std::invalid_argument outside [0, 1].
double binary_entropy(double p);

/// Eve-information curves as functions of the control-mode QBER q1.
enum class EveCurve {
  IR,         // LM05 intercept-resend, I_AE = xi, I_BE = (1 - H(1/4)) xi, xi = 4 q1
  NORT,       // LM05 non-orthogonal ancillae, x' = pi/2
  DCNOTStar,  // LM05 double CNOT, I_AE = I_BE = xi
  Generic,    // entropy bound on any individual attack, clamped to 1
  BB84_IR,    // BB84 intercept-resend, I = 2 q1
  BB84_OPT,   // BB84 optimal individual attack, I = 1 - H(1/2 + sqrt(q1 (1 - q1)))
};

std::string_view to_string(EveCurve curve);

/// Accepts ir, nort, dcnot*, dcnotstar, dcnot, generic, bb84_ir, bb84_opt.
EveCurve parse_eve_curve(std::string_view text);

/// True for the BB84 branches, whose I_AB is always 1 - H(q1).
bool is_bb84(EveCurve curve);

/// Largest admissible q1: 0.25 where the attacked fraction xi = 4 q1 must
/// stay <= 1 (and for NORT, where x reaches pi/2), 0.5 otherwise.
double domain_max(EveCurve curve);

struct EveInfo {
  double i_ae;
  double i_be;
};

/// Throws std::domain_error when q1 is outside [0, domain_max(curve)].
EveInfo eve_curves(EveCurve curve, double q1);

/// Unclamped entropy bound -(1-q) log2(1-q) - q log2(q/3).
double generic_bound_unclamped(double q1);

/// How Q_AB relates to q1.
struct NoiseModel {
  enum class Kind { Identified, Fixed };
  Kind kind = Kind::Identified;
  double fixed_qab = 0.0;

  static NoiseModel identified() { return {}; }
  /// Throws std::invalid_argument outside [0, 0.5].
  static NoiseModel fixed(double qab);

  double qab(double q1) const { return kind == Kind::Identified ? q1 : fixed_qab; }
};

/// Parses "identified" or "fixed:<v>".
NoiseModel parse_noise_model(std::string_view text);

struct InfoPoint {
  double q1;
  double i_ab;
  double i_ae;
  double i_be;
  double c_dr;
  double c_rr;
};

/// I_AB from the noise model (BB84 curves ignore it: their only QBER is q1)
/// and both secrecy capacities. A key is distillable when either capacity is
/// positive.
InfoPoint secrecy(double q1, EveCurve curve, NoiseModel model = NoiseModel::identified());

enum class Reconciliation { Direct, Reverse };

struct Threshold {
  enum class Kind {
    Crossing,          // capacity changes sign inside the domain
    DomainEdge,        // positive on the open domain, zero at its upper end
    SecureEverywhere,  // positive on the whole closed domain
  };
  Kind kind;
  double q1;  // root, or the domain edge for the other two kinds
};

/// Bisection root of the DR or RR capacity on [0, domain_max]. Throws
/// std::domain_error if the capacity is not positive at q1 = 0.
Threshold threshold(EveCurve curve, Reconciliation rec, NoiseModel model = NoiseModel::identified(),
                    double tolerance = 1e-6, int max_iterations = 200);

/// Evenly spaced InfoPoints from 0 to domain_max (inclusive).
std::vector<InfoPoint> curve_grid(EveCurve curve, NoiseModel model, double step = 0.001);

/// Columns q1,I_AB,I_AE,I_BE,C_DR,C_RR.
void write_curve_csv(std::ostream& out, const std::vector<InfoPoint>& points);

/// One cell of the zero-loss threshold table. `q1` is empty for cells that
/// do not apply, with `reason` explaining why.
struct ThresholdCell {
  std::optional<double> q1;
  std::string_view reason;
};

struct ThresholdRow {
  std::string_view attack;
  ThresholdCell lm05_dr;
  ThresholdCell lm05_rr;
  ThresholdCell bb84;
};

/// IR, NORT, DCNOT*, Generic rows. The BB84 column ignores `model`.
std::vector<ThresholdRow> threshold_table(NoiseModel model = NoiseModel::identified());

}  // namespace qkd2way

#endif  // QKD2WAY_INFOTHEORY_HPP
