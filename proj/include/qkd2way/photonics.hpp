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

#ifndef QKD2WAY_PHOTONICS_HPP
#define QKD2WAY_PHOTONICS_HPP

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "qkd2way/types.hpp"

namespace qkd2way {

/// Weak-coherent-pulse link. Defaults are the fibre setup used for the
/// BB84/LM05 comparison: eta_d = 0.12, Gamma_B = 0.4, Gamma_A = 0.45 and a
/// channel transmission of 10^(-0.02 L).
struct LinkBudget {
  double mu = 0.1;
  double length_km = 0.0;
  double eta_d = 0.12;
  double gamma_b = 0.4;
  double gamma_a = 0.45;
  double atten = 0.02;  // base-10 exponent per km

  /// Throws std::invalid_argument.
  void validate() const;

  /// Gamma_QC(L) = 10^(-atten L).
  double channel_transmission() const;

  LinkBudget at(double mu_value, double length) const {
    LinkBudget b = *this;
    b.mu = mu_value;
    b.length_km = length;
    return b;
  }
};

/// mu^n e^-mu / n!. Throws std::invalid_argument for n < 0 or mu < 0.
double poisson_pmf(int n, double mu);

/// Eve's beam-splitting information. BB84: min(mu, 1) (reflectivity ~ 1);
/// LM05: (1 - e^(-mu/2))^2, the two-splitter optimum at R1 = 1/2, R2 = 1.
double bs_eve_info(Protocol protocol, double mu);

/// Joint success of the two beam splitters in the LM05 attack,
/// (1 - e^(-R1 mu)) (1 - e^(-R2 (1 - R1) mu)).
double bs_two_splitter_success(double r1, double r2, double mu);

/// Detection probability at Bob. LM05 crosses the channel twice and Alice's
/// box twice.
double raw_gain(Protocol protocol, const LinkBudget& budget);

/// raw_gain * (1 - bs_eve_info).
double secure_gain(Protocol protocol, const LinkBudget& budget);

/// Multi-photon emission probability exploitable by photon-number splitting:
/// BB84 any n >= 2; LM05 n >= 3 minus the half of the n = 3 pulses for which
/// Eve's three-photon measurement is inconclusive.
double pns_probability(Protocol protocol, double mu);

/// raw_gain - pns_probability; positive means inside the security region.
double pns_margin(Protocol protocol, const LinkBudget& budget);

enum class Objective { SecureGain, PnsMargin };

std::string_view to_string(Objective objective);

struct GainPoint {
  double length_km;
  double mu_star;
  double value;
};

/// Search bracket and tolerance for the mean photon number.
struct MuSearch {
  double lo = 1e-5;
  double hi = 2.0;
  double tolerance = 1e-7;
};

/// Golden-section maximisation of the objective over mu at `length_km`,
/// other link parameters taken from `base`. A non-positive value means no
/// mu makes the link secure at this distance.
GainPoint optimize_mu(Objective objective, Protocol protocol, double length_km, const LinkBudget& base = {},
                      MuSearch search = {});

struct LengthGrid {
  double lmin = 0.0;
  double lmax = 50.0;
  double lstep = 0.25;

  /// lmin, lmin + lstep, ... up to lmax (inclusive within 1e-9).
  std::vector<double> points() const;
};

/// Optimised curve over the grid. Distances are evaluated in parallel with
/// OpenMP; sweep_serial is the single-threaded reference.
std::vector<GainPoint> sweep(Objective objective, Protocol protocol, const LengthGrid& grid,
                             const LinkBudget& base = {});
std::vector<GainPoint> sweep_serial(Objective objective, Protocol protocol, const LengthGrid& grid,
                                    const LinkBudget& base = {});

/// Distance in [lo, hi] where the optimised PNS margins of BB84 and LM05
/// cross, LM05 being ahead below it. Bisection to `tolerance` km. Empty if
/// there is no such sign change in the range.
std::optional<double> find_crossover(const LinkBudget& base, double lo, double hi, double tolerance = 0.01);

/// find_crossover over [0, 100] km; throws std::runtime_error when the
/// parameters produce no crossing.
double crossover_distance(const LinkBudget& base = {});

/// Rows L_km,mu_star,value,log10_value,protocol,objective. log10_value is an
/// empty cell where value <= 0.
void write_gain_csv(std::ostream& out, const std::vector<GainPoint>& points, Protocol protocol,
                    Objective objective, bool header = true);

}  // namespace qkd2way

#endif  // QKD2WAY_PHOTONICS_HPP
