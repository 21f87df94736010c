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

#include "qkd2way/infotheory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qkd2way/csv.hpp"

namespace qkd2way {

namespace {

// Values this close to the domain edge are treated as on it.
constexpr double kDomainSlack = 1e-12;
// A capacity within this of zero at the domain edge counts as vanishing there.
constexpr double kEdgeZero = 1e-12;
// Coarse scan used to bracket the first sign change before bisecting.
constexpr int kScanPoints = 2000;

double checked_q1(EveCurve curve, double q1) {
  const double hi = domain_max(curve);
  if (!(q1 >= -kDomainSlack && q1 <= hi + kDomainSlack)) {
    throw std::domain_error("q1 = " + std::to_string(q1) + " outside [0, " + std::to_string(hi) + "] for " +
                            std::string(to_string(curve)));
  }
  return std::clamp(q1, 0.0, hi);
}

double capacity(EveCurve curve, Reconciliation rec, NoiseModel model, double q1) {
  const InfoPoint p = secrecy(q1, curve, model);
  return rec == Reconciliation::Direct ? p.c_dr : p.c_rr;
}

ThresholdCell cell_from(const Threshold& t) {
  if (t.kind == Threshold::Kind::SecureEverywhere) return {std::nullopt, "secure over the whole q1 domain"};
  return {t.q1, {}};
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::string_view to_string(EveCurve curve) {
  switch (curve) {
    case EveCurve::IR: return "ir";
    case EveCurve::NORT: return "nort";
    case EveCurve::DCNOTStar: return "dcnot*";
    case EveCurve::Generic: return "generic";
    case EveCurve::BB84_IR: return "bb84_ir";
    case EveCurve::BB84_OPT: return "bb84_opt";
  }
  return "?";
}

EveCurve parse_eve_curve(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "ir") return EveCurve::IR;
  if (lower == "nort") return EveCurve::NORT;
  if (lower == "dcnot*" || lower == "dcnotstar" || lower == "dcnot") return EveCurve::DCNOTStar;
  if (lower == "generic") return EveCurve::Generic;
  if (lower == "bb84_ir") return EveCurve::BB84_IR;
  if (lower == "bb84_opt") return EveCurve::BB84_OPT;
  throw std::invalid_argument("unknown curve '" + std::string(text) + "'");
}

bool is_bb84(EveCurve curve) { return curve == EveCurve::BB84_IR || curve == EveCurve::BB84_OPT; }

double domain_max(EveCurve curve) {
  switch (curve) {
    case EveCurve::IR:
    case EveCurve::NORT:
    case EveCurve::DCNOTStar:
    case EveCurve::BB84_IR:
      return 0.25;
    case EveCurve::Generic:
    case EveCurve::BB84_OPT:
      return 0.5;
  }
  return 0.0;
}

double generic_bound_unclamped(double q1) {
  const double a = q1 < 1.0 ? -(1.0 - q1) * std::log2(1.0 - q1) : 0.0;
  const double b = q1 > 0.0 ? -q1 * std::log2(q1 / 3.0) : 0.0;
  return a + b;
}

EveInfo eve_curves(EveCurve curve, double q1) {
  const double q = checked_q1(curve, q1);
  switch (curve) {
    case EveCurve::IR: {
      const double xi = 4.0 * q;
      return {xi, (1.0 - binary_entropy(0.25)) * xi};
    }
    case EveCurve::NORT: {
      // cos x = 1 - 4 q1, so sin^2 x = 8 q1 (1 - 2 q1).
      const double sin_x = std::min(1.0, std::sqrt(8.0 * q * (1.0 - 2.0 * q)));
      return {1.0 - binary_entropy((1.0 - sin_x) / 2.0), 1.0 - binary_entropy((2.0 - sin_x) / 4.0)};
    }
    case EveCurve::DCNOTStar: {
      const double xi = 4.0 * q;
      return {xi, xi};
    }
    case EveCurve::Generic: {
      const double i = std::min(1.0, generic_bound_unclamped(q));
      return {i, i};
    }
    case EveCurve::BB84_IR:
      return {2.0 * q, 2.0 * q};
    case EveCurve::BB84_OPT: {
      const double p = std::min(1.0, 0.5 + std::sqrt(q * (1.0 - q)));
      const double i = 1.0 - binary_entropy(p);
      return {i, i};
    }
  }
  throw std::logic_error("eve_curves: unknown curve");
}

NoiseModel NoiseModel::fixed(double qab) {
  if (!(qab >= 0.0 && qab <= 0.5)) throw std::invalid_argument("fixed Q_AB must lie in [0, 0.5]");
  return {Kind::Fixed, qab};
}

NoiseModel parse_noise_model(std::string_view text) {
  if (text == "identified") return NoiseModel::identified();
  constexpr std::string_view prefix = "fixed:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string value(text.substr(prefix.size()));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw std::invalid_argument("bad fixed noise value '" + value + "'");
    return NoiseModel::fixed(v);
  }
  throw std::invalid_argument("noise model must be 'identified' or 'fixed:<qab>'");
}

InfoPoint secrecy(double q1, EveCurve curve, NoiseModel model) {
  const EveInfo eve = eve_curves(curve, q1);
  const double q = std::clamp(q1, 0.0, domain_max(curve));
  const double qab = is_bb84(curve) ? q : model.qab(q);
  const double i_ab = 1.0 - binary_entropy(qab);
  return {q, i_ab, eve.i_ae, eve.i_be, i_ab - eve.i_ae, i_ab - eve.i_be};
}

Threshold threshold(EveCurve curve, Reconciliation rec, NoiseModel model, double tolerance, int max_iterations) {
  const double hi_edge = domain_max(curve);
  auto f = [&](double q) { return capacity(curve, rec, model, q); };

  if (!(f(0.0) > 0.0)) throw std::domain_error("capacity is not positive at q1 = 0");

  // First grid cell whose right end is non-positive, ignoring a zero exactly
  // at the domain edge.
  double lo = 0.0;
  for (int k = 1; k <= kScanPoints; ++k) {
    const double q = hi_edge * k / kScanPoints;
    const double v = f(q);
    const bool at_edge = k == kScanPoints;
    if (at_edge ? v < -kEdgeZero : v <= 0.0) {
      double a = lo;
      double b = q;
      for (int it = 0; it < max_iterations && b - a > tolerance; ++it) {
        const double mid = 0.5 * (a + b);
        (f(mid) > 0.0 ? a : b) = mid;
      }
      return {Threshold::Kind::Crossing, 0.5 * (a + b)};
    }
    lo = q;
  }
  if (std::abs(f(hi_edge)) <= kEdgeZero) return {Threshold::Kind::DomainEdge, hi_edge};
  return {Threshold::Kind::SecureEverywhere, hi_edge};
}

std::vector<InfoPoint> curve_grid(EveCurve curve, NoiseModel model, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const double hi = domain_max(curve);
  const auto n = static_cast<long>(std::floor(hi / step + 1e-9));
  std::vector<InfoPoint> out;
  out.reserve(static_cast<std::size_t>(n) + 2);
  for (long i = 0; i <= n; ++i) out.push_back(secrecy(std::min(hi, static_cast<double>(i) * step), curve, model));
  if (out.back().q1 < hi - 1e-12) out.push_back(secrecy(hi, curve, model));
  return out;
}

void write_curve_csv(std::ostream& out, const std::vector<InfoPoint>& points) {
  out << "q1,I_AB,I_AE,I_BE,C_DR,C_RR\n";
  for (const auto& p : points) {
    csv::row(out, {csv::number(p.q1), csv::number(p.i_ab), csv::number(p.i_ae), csv::number(p.i_be),
                   csv::number(p.c_dr), csv::number(p.c_rr)});
  }
}

std::vector<ThresholdRow> threshold_table(NoiseModel model) {
  using R = Reconciliation;
  std::vector<ThresholdRow> rows;
  rows.push_back({"IR", cell_from(threshold(EveCurve::IR, R::Direct, model)),
                  cell_from(threshold(EveCurve::IR, R::Reverse, model)),
                  cell_from(threshold(EveCurve::BB84_IR, R::Direct, model))});
  rows.push_back({"NORT", cell_from(threshold(EveCurve::NORT, R::Direct, model)),
                  cell_from(threshold(EveCurve::NORT, R::Reverse, model)),
                  cell_from(threshold(EveCurve::BB84_OPT, R::Direct, model))});
  rows.push_back({"DCNOT*", cell_from(threshold(EveCurve::DCNOTStar, R::Direct, model)),
                  cell_from(threshold(EveCurve::DCNOTStar, R::Reverse, model)),
                  {std::nullopt, "double CNOT needs the backward leg of a two-way channel"}});
  // The entropy bound holds for BB84 too, where I_AB = 1 - H(q1) always.
  rows.push_back({"Generic", cell_from(threshold(EveCurve::Generic, R::Direct, model)),
                  {std::nullopt, "bound covers Alice's encoding only, i.e. direct reconciliation"},
                  cell_from(threshold(EveCurve::Generic, R::Direct, NoiseModel::identified()))});
  return rows;
}

}  // namespace qkd2way
