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

#include <gtest/gtest.h>

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qkd2way/photonics.hpp"

using namespace qkd2way;

namespace {

// P_n built from the recurrence P_n = P_{n-1} mu / n.
double pmf_oracle(int n, double mu) {
  double p = std::exp(-mu);
  for (int k = 1; k <= n; ++k) p *= mu / k;
  return p;
}

double tail_oracle(int from, double mu) {
  double s = 0.0;
  for (int n = 400; n >= from; --n) s += pmf_oracle(n, mu);
  return s;
}

// 1 - exp(-mu eta Gamma_B [Gamma_A^2 Gamma_QC^2 | Gamma_QC]), factor by factor.
double raw_gain_oracle(Protocol p, double mu, double l) {
  const LinkBudget b;
  const double fibre = std::pow(10.0, -b.atten * l);
  double t = mu * b.eta_d * b.gamma_b;
  if (p == Protocol::LM05) {
    t *= fibre * fibre * b.gamma_a * b.gamma_a;
  } else {
    t *= fibre;
  }
  return 1.0 - std::exp(-t);
}

}  // namespace

TEST(Poisson, Values) {
  EXPECT_NEAR(poisson_pmf(0, 0.1), std::exp(-0.1), 1e-16);
  EXPECT_NEAR(poisson_pmf(0, 0.1), 0.904837, 1e-6);
  EXPECT_NEAR(poisson_pmf(2, 0.1), pmf_oracle(2, 0.1), 1e-15);
  EXPECT_NEAR(poisson_pmf(2, 0.1), 0.00452419, 1e-8);
  double sum = 0.0;
  for (int n = 0; n <= 50; ++n) sum += poisson_pmf(n, 1.0);
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(poisson_pmf(0, 0.0), 1.0);
  EXPECT_EQ(poisson_pmf(3, 0.0), 0.0);
  EXPECT_THROW(poisson_pmf(-1, 0.1), std::invalid_argument);
  EXPECT_THROW(poisson_pmf(1, -0.1), std::invalid_argument);
}

TEST(BeamSplitting, Bb84LeakIsMu) {
  EXPECT_DOUBLE_EQ(bs_eve_info(Protocol::BB84, 0.1), 0.1);
  EXPECT_DOUBLE_EQ(bs_eve_info(Protocol::BB84, 3.0), 1.0);
}

TEST(BeamSplitting, Lm05LeakMatchesTwoSplitterSampling) {
  const double mu = 0.1;
  const double closed = bs_eve_info(Protocol::LM05, mu);
  EXPECT_NEAR(closed, 0.0023785690345315543, 1e-15);
  EXPECT_DOUBLE_EQ(closed, bs_two_splitter_success(0.5, 1.0, mu));

  // Each photon goes to the first splitter's tap with probability 1/2; the
  // second splitter (R2 = 1) takes everything left. Eve needs both taps.
  std::mt19937_64 gen(61);
  std::poisson_distribution<int> photons(mu);
  const int n = 4000000;
  int success = 0;
  for (int i = 0; i < n; ++i) {
    const int k = photons(gen);
    if (k < 2) continue;
    const int first = std::binomial_distribution<int>(k, 0.5)(gen);
    success += first >= 1 && k - first >= 1;
  }
  const double sd = std::sqrt(closed * (1 - closed) / n);
  EXPECT_NEAR(static_cast<double>(success) / n, closed, 5 * sd);
}

TEST(BeamSplitting, Lm05LeakVanishesQuadratically) {
  for (double mu : {1e-2, 1e-3, 1e-4}) EXPECT_NEAR(bs_eve_info(Protocol::LM05, mu) / (mu * mu), 0.25, 0.01);
}

TEST(RawGain, ProductOfFactors) {
  EXPECT_NEAR(raw_gain(Protocol::LM05, LinkBudget{}.at(0.1, 0.0)), raw_gain_oracle(Protocol::LM05, 0.1, 0.0), 1e-17);
  EXPECT_NEAR(raw_gain(Protocol::LM05, LinkBudget{}.at(0.1, 0.0)), 9.715277610178319e-4, 1e-12);
  for (double l : {0.0, 5.0, 30.0}) {
    for (double mu : {0.01, 0.3, 1.5}) {
      for (Protocol p : {Protocol::BB84, Protocol::LM05}) {
        EXPECT_NEAR(raw_gain(p, LinkBudget{}.at(mu, l)), raw_gain_oracle(p, mu, l), 1e-15);
      }
    }
  }
}

TEST(RawGain, OneWayBeatsTwoWayAndSaturates) {
  for (double l : {0.5, 10.0, 50.0}) {
    EXPECT_GT(raw_gain(Protocol::BB84, LinkBudget{}.at(0.2, l)), raw_gain(Protocol::LM05, LinkBudget{}.at(0.2, l)));
  }
  EXPECT_NEAR(raw_gain(Protocol::BB84, LinkBudget{}.at(1e4, 0.0)), 1.0, 1e-12);
  EXPECT_NEAR(raw_gain(Protocol::LM05, LinkBudget{}.at(1e5, 0.0)), 1.0, 1e-12);
}

TEST(SecureGain, Limits) {
  EXPECT_EQ(secure_gain(Protocol::BB84, LinkBudget{}.at(0.0, 0.0)), 0.0);
  EXPECT_EQ(secure_gain(Protocol::LM05, LinkBudget{}.at(0.0, 0.0)), 0.0);
  EXPECT_EQ(secure_gain(Protocol::BB84, LinkBudget{}.at(1.0, 0.0)), 0.0);
  EXPECT_EQ(secure_gain(Protocol::LM05, LinkBudget{}.at(100.0, 0.0)), 0.0);
}

TEST(Pns, ClosedFormsMatchPoissonSeries) {
  EXPECT_NEAR(pns_probability(Protocol::BB84, 0.1), 0.00467884, 1e-8);
  EXPECT_NEAR(pns_probability(Protocol::LM05, 0.1), 1.0 - std::exp(-0.1) * (1.105 + 0.001 / 12.0), 1e-15);
  for (int k = 1; k <= 200; ++k) {
    const double mu = 0.01 * k;
    EXPECT_NEAR(pns_probability(Protocol::BB84, mu), tail_oracle(2, mu), 1e-10) << mu;
    EXPECT_NEAR(pns_probability(Protocol::LM05, mu), tail_oracle(3, mu) - 0.5 * pmf_oracle(3, mu), 1e-10) << mu;
    EXPECT_LT(pns_probability(Protocol::LM05, mu), pns_probability(Protocol::BB84, mu)) << mu;
  }
}

TEST(OptimizeMu, MatchesDenseGrid) {
  const MuSearch s;
  for (double l : {0.0, 10.0, 50.0}) {
    for (Objective obj : {Objective::SecureGain, Objective::PnsMargin}) {
      for (Protocol p : {Protocol::BB84, Protocol::LM05}) {
        double best = -1e300;
        for (int i = 0; i <= 10000; ++i) {
          const double mu = s.lo + (s.hi - s.lo) * i / 10000;
          const LinkBudget b = LinkBudget{}.at(mu, l);
          best = std::max(best, obj == Objective::SecureGain ? secure_gain(p, b) : pns_margin(p, b));
        }
        const GainPoint g = optimize_mu(obj, p, l);
        EXPECT_NEAR(g.value, best, 1e-6) << to_string(obj) << " " << to_string(p) << " L=" << l;
        EXPECT_GE(g.value, best - 1e-12) << std::setprecision(17) << g.value - best << " mu=" << g.mu_star << " " << to_string(obj) << to_string(p) << l;
        EXPECT_EQ(g.length_km, l);
      }
    }
  }
}

TEST(OptimizeMu, Bb84MarginNearSmallMuPrediction) {
  const LinkBudget b;
  const double t = b.eta_d * b.gamma_b;
  EXPECT_NEAR(optimize_mu(Objective::PnsMargin, Protocol::BB84, 0.0).mu_star, t, 0.2 * t);
}

TEST(OptimizeMu, Lm05MarginNegativeFarAway) {
  EXPECT_LT(optimize_mu(Objective::PnsMargin, Protocol::LM05, 400.0).value, 0.0);
}

TEST(SplitterOptimum, EqualSplitIsBest) {
  for (double mu : {0.05, 0.1, 0.5, 1.0}) {
    double best_r = 0.0;
    double best = -1.0;
    for (int i = 0; i <= 100000; ++i) {
      const double r = i / 100000.0;
      const double v = bs_two_splitter_success(r, 1.0, mu);
      if (v > best) {
        best = v;
        best_r = r;
      }
    }
    EXPECT_NEAR(best_r, 0.5, 1e-4) << mu;
  }
}

TEST(SplitterOptimum, TwoSplitterBound) {
  for (double mu : {0.05, 0.1, 0.5, 1.0, 2.0}) {
    const double bound = bs_eve_info(Protocol::LM05, mu);
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) EXPECT_LE(bs_two_splitter_success(i / 100.0, j / 100.0, mu), bound + 1e-15);
    }
  }
}

TEST(Sweep, OneWayGainDominatesAndDecays) {
  const LengthGrid grid;
  const auto bb84 = sweep(Objective::SecureGain, Protocol::BB84, grid);
  const auto lm05 = sweep(Objective::SecureGain, Protocol::LM05, grid);
  ASSERT_EQ(bb84.size(), 201u);
  ASSERT_EQ(lm05.size(), bb84.size());
  for (std::size_t i = 0; i < bb84.size(); ++i) {
    EXPECT_GE(bb84[i].value, lm05[i].value) << bb84[i].length_km;
    if (i > 0) {
      EXPECT_LT(bb84[i].value, bb84[i - 1].value);
      EXPECT_LT(lm05[i].value, lm05[i - 1].value);
    }
  }
}

TEST(Sweep, ParallelEqualsSerial) {
  const LengthGrid grid{0.0, 20.0, 0.5};
  for (Objective obj : {Objective::SecureGain, Objective::PnsMargin}) {
    const auto a = sweep(obj, Protocol::LM05, grid);
    const auto b = sweep_serial(obj, Protocol::LM05, grid);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].mu_star, b[i].mu_star);
      EXPECT_EQ(a[i].value, b[i].value);
    }
  }
}

TEST(Sweep, ValuesAreProbabilityScaled) {
  for (Objective obj : {Objective::SecureGain, Objective::PnsMargin}) {
    for (const GainPoint& g : sweep(obj, Protocol::BB84, LengthGrid{0, 100, 5})) {
      EXPECT_GE(g.value, -1.0);
      EXPECT_LE(g.value, 1.0);
    }
  }
}

TEST(LengthGridTest, Points) {
  const auto p = LengthGrid{}.points();
  EXPECT_EQ(p.size(), 201u);
  EXPECT_EQ(p.back(), 50.0);
  EXPECT_EQ(LengthGrid({1.0, 1.0, 0.5}).points().size(), 1u);
  EXPECT_THROW(LengthGrid({0.0, 1.0, 0.0}).points(), std::invalid_argument);
  EXPECT_THROW(LengthGrid({2.0, 1.0, 0.5}).points(), std::invalid_argument);
}

TEST(Crossover, DefaultLink) {
  const double l = crossover_distance();
  EXPECT_GE(l, 2.0);
  EXPECT_LE(l, 3.0);
  EXPECT_NEAR(l, 2.6399, 0.01);
  // LM05 ahead below, BB84 ahead above.
  EXPECT_GT(optimize_mu(Objective::PnsMargin, Protocol::LM05, l - 0.1).value,
            optimize_mu(Objective::PnsMargin, Protocol::BB84, l - 0.1).value);
  EXPECT_LT(optimize_mu(Objective::PnsMargin, Protocol::LM05, l + 0.1).value,
            optimize_mu(Objective::PnsMargin, Protocol::BB84, l + 0.1).value);
}

TEST(Crossover, LosslessAliceMovesItOut) {
  LinkBudget b;
  b.gamma_a = 1.0;
  EXPECT_GT(crossover_distance(b), crossover_distance());
}

TEST(Crossover, NoFibreLossNoCrossing) {
  LinkBudget b;
  b.atten = 0.0;
  EXPECT_FALSE(find_crossover(b, 0.0, 100.0).has_value());
  EXPECT_THROW(crossover_distance(b), std::runtime_error);
  EXPECT_FALSE(find_crossover(LinkBudget{}, 10.0, 50.0).has_value());
}

TEST(LinkBudgetTest, Validation) {
  LinkBudget b;
  EXPECT_NO_THROW(b.validate());
  b.eta_d = 1.5;
  EXPECT_THROW(b.validate(), std::invalid_argument);
  b = LinkBudget{};
  b.atten = -0.1;
  EXPECT_THROW(b.validate(), std::invalid_argument);
  EXPECT_DOUBLE_EQ(LinkBudget{}.at(0.1, 50.0).channel_transmission(), 0.1);
}

TEST(GainCsv, Layout) {
  std::ostringstream out;
  write_gain_csv(out, {{0.0, 0.5, 0.25}, {1.0, 0.1, -0.5}}, Protocol::LM05, Objective::PnsMargin);
  EXPECT_EQ(out.str(),
            "L_km,mu_star,value,log10_value,protocol,objective\n"
            "0,0.5,0.25,-0.6020599913279624,lm05,pns_margin\n"
            "1,0.1,-0.5,,lm05,pns_margin\n");
}
