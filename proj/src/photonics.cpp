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

#include "qkd2way/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qkd2way/csv.hpp"

namespace qkd2way {

namespace {

double objective_value(Objective objective, Protocol protocol, const LinkBudget& budget) {
  return objective == Objective::SecureGain ? secure_gain(protocol, budget) : pns_margin(protocol, budget);
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void LinkBudget::validate() const {
  if (!(mu >= 0.0)) throw std::invalid_argument("mu must be non-negative");
  if (!(length_km >= 0.0)) throw std::invalid_argument("channel length must be non-negative");
  if (!in_unit_interval(eta_d)) throw std::invalid_argument("eta_d must lie in [0, 1]");
  if (!in_unit_interval(gamma_b)) throw std::invalid_argument("gamma_B must lie in [0, 1]");
  if (!in_unit_interval(gamma_a)) throw std::invalid_argument("gamma_A must lie in [0, 1]");
  if (!(atten >= 0.0)) throw std::invalid_argument("attenuation must be non-negative");
}

double LinkBudget::channel_transmission() const { return std::pow(10.0, -atten * length_km); }

double poisson_pmf(int n, double mu) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  if (!(mu >= 0.0)) throw std::invalid_argument("mean photon number must be non-negative");
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
}

double bs_two_splitter_success(double r1, double r2, double mu) {
  return -std::expm1(-r1 * mu) * -std::expm1(-r2 * (1.0 - r1) * mu);
}

double bs_eve_info(Protocol protocol, double mu) {
  if (protocol == Protocol::BB84) return std::min(mu, 1.0);
  const double half = -std::expm1(-mu / 2.0);
  return half * half;
}

double raw_gain(Protocol protocol, const LinkBudget& b) {
  const double g = b.channel_transmission();
  const double transmission = protocol == Protocol::BB84 ? g * b.gamma_b : g * g * b.gamma_b * b.gamma_a * b.gamma_a;
  return -std::expm1(-b.mu * b.eta_d * transmission);
}

double secure_gain(Protocol protocol, const LinkBudget& budget) {
  return raw_gain(protocol, budget) * (1.0 - bs_eve_info(protocol, budget.mu));
}

double pns_probability(Protocol protocol, double mu) {
  const double mu2 = mu * mu;
  const double kept = protocol == Protocol::BB84 ? 1.0 + mu : 1.0 + mu + mu2 / 2.0 + mu2 * mu / 12.0;
  return 1.0 - std::exp(-mu) * kept;
}

double pns_margin(Protocol protocol, const LinkBudget& budget) {
  return raw_gain(protocol, budget) - pns_probability(protocol, budget.mu);
}

std::string_view to_string(Objective objective) {
  return objective == Objective::SecureGain ? "secure_gain" : "pns_margin";
}

GainPoint optimize_mu(Objective objective, Protocol protocol, double length_km, const LinkBudget& base,
                      MuSearch search) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double mu) { return objective_value(objective, protocol, base.at(mu, length_km)); };

  double a = search.lo;
  double b = search.hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > search.tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  // The objective can still be rising at the edge of the range.
  GainPoint best{length_km, 0.5 * (a + b), 0.0};
  best.value = f(best.mu_star);
  for (double edge : {search.lo, search.hi}) {
    const double v = f(edge);
    if (v > best.value) best = {length_km, edge, v};
  }
  return best;
}

std::vector<double> LengthGrid::points() const {
  if (!(lstep > 0.0)) throw std::invalid_argument("length step must be positive");
  if (!(lmax >= lmin) || lmin < 0.0) throw std::invalid_argument("length range must satisfy 0 <= lmin <= lmax");
  const auto n = static_cast<long>(std::floor((lmax - lmin) / lstep + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) out.push_back(lmin + static_cast<double>(i) * lstep);
  return out;
}

std::vector<GainPoint> sweep_serial(Objective objective, Protocol protocol, const LengthGrid& grid,
                                    const LinkBudget& base) {
  base.validate();
  std::vector<GainPoint> out;
  for (double l : grid.points()) out.push_back(optimize_mu(objective, protocol, l, base));
  return out;
}

std::vector<GainPoint> sweep(Objective objective, Protocol protocol, const LengthGrid& grid,
                             const LinkBudget& base) {
  base.validate();
  const std::vector<double> lengths = grid.points();
  std::vector<GainPoint> out(lengths.size());
  const auto n = static_cast<long>(lengths.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = optimize_mu(objective, protocol, lengths[i], base);
  return out;
}

std::optional<double> find_crossover(const LinkBudget& base, double lo, double hi, double tolerance) {
  base.validate();
  auto diff = [&](double l) {
    return optimize_mu(Objective::PnsMargin, Protocol::BB84, l, base).value -
           optimize_mu(Objective::PnsMargin, Protocol::LM05, l, base).value;
  };
  if (!(diff(lo) < 0.0 && diff(hi) > 0.0)) return std::nullopt;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (diff(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double crossover_distance(const LinkBudget& base) {
  const auto l = find_crossover(base, 0.0, 100.0);
  if (!l) throw std::runtime_error("no BB84/LM05 PNS crossover in [0, 100] km for these link parameters");
  return *l;
}

void write_gain_csv(std::ostream& out, const std::vector<GainPoint>& points, Protocol protocol,
                    Objective objective, bool header) {
  if (header) out << "L_km,mu_star,value,log10_value,protocol,objective\n";
  for (const auto& p : points) {
    csv::row(out, {csv::number(p.length_km), csv::number(p.mu_star), csv::number(p.value),
                   p.value > 0.0 ? csv::number(std::log10(p.value)) : std::string(), to_string(protocol),
                   to_string(objective)});
  }
}

}  // namespace qkd2way
