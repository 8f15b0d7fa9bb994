// Copyright 2026 The accept Authors.
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

#include "accept/game.hpp"
#include "accept/game_io.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace accept {
namespace {

using testing::kBL;
using testing::kBR;
using testing::kTL;
using testing::kTR;

StochasticGame constant_game(double c) {
  StochasticGame g;
  g.num_players = 1;
  g.state_names = {"only"};
  g.action_names = {{"stay"}};
  g.payoff = {{{c}}};
  g.transition = {{{1.0}}};
  return g;
}

TEST(Validate, WellFormedSingleState) { EXPECT_TRUE(validate_game(constant_game(0.3)).empty()); }

TEST(Validate, ShortTransitionMass) {
  StochasticGame g = constant_game(0.3);
  g.transition[0][0][0] = 0.9;
  const auto report = validate_game(g);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_NE(report[0].find("transition mass 0.9 at (only,stay)"), std::string::npos) << report[0];
}

TEST(Validate, PayoffOutOfRange) {
  StochasticGame g = constant_game(1.5);
  EXPECT_EQ(validate_game(g).size(), 1u);
  g.payoff_bound = 2.0;
  EXPECT_TRUE(validate_game(g).empty());
}

TEST(Validate, SorinFileIsClean) {
  const StochasticGame g = testing::sorin_game();
  EXPECT_TRUE(validate_game(g).empty());
  EXPECT_EQ(g.num_states(), 3);
  EXPECT_EQ(g.profile_key(kBR), "B/R");
}

TEST(GameIo, RoundTrip) {
  const StochasticGame g = testing::sorin_game();
  const StochasticGame h = game_from_json(game_to_json(g));
  EXPECT_EQ(h.payoff, g.payoff);
  EXPECT_EQ(h.transition, g.transition);
  EXPECT_EQ(h.payoff_bound, 2.0);
}

TEST(GameIo, ErrorsCarryLocation) {
  nlohmann::json j = game_to_json(testing::sorin_game());
  j["payoffs"]["s0"].erase("B/R");
  try {
    game_from_json(j);
    FAIL() << "expected a format error";
  } catch (const GameFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("$.payoffs.s0"), std::string::npos) << e.what();
  }
  j = game_to_json(testing::sorin_game());
  j["transitions"]["s0"]["T/L"]["nowhere"] = 1;
  EXPECT_THROW(game_from_json(j), GameFormatError);
}

TEST(Extend, PointMassAndLinearity) {
  const StochasticGame g = testing::sorin_game();
  const int s0 = testing::kSorinS0;
  EXPECT_EQ(extend_transition(g, s0, point_mass(4, kTL)), (Distribution{1, 0, 0}));
  EXPECT_EQ(extend_payoff(g, s0, point_mass(4, kTL)), (PayoffVector{1, 0}));
  EXPECT_EQ(extend_payoff(g, s0, point_mass(4, kBR)), (PayoffVector{2, 0}));
  const Distribution half{0.5, 0.5, 0, 0};
  EXPECT_EQ(extend_payoff(g, s0, half), (PayoffVector{0.5, 0.5}));
  const Distribution mix{0, 0, 0.5, 0.5};
  EXPECT_EQ(extend_transition(g, s0, mix), (Distribution{0, 0.5, 0.5}));
  EXPECT_THROW(extend_payoff(g, s0, Distribution{0.5, 0.4, 0, 0}), std::invalid_argument);
}

TEST(Extend, LinearOnRandomMixtures) {
  std::mt19937_64 rng(7);
  const StochasticGame g = testing::random_game(rng, {.players = 2, .states = 4, .actions = 3});
  for (int rep = 0; rep < 20; ++rep) {
    const Distribution a = testing::random_distribution(rng, g.num_profiles());
    const Distribution b = testing::random_distribution(rng, g.num_profiles());
    const double w = std::uniform_real_distribution<double>(0, 1)(rng);
    Distribution m(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) m[k] = w * a[k] + (1 - w) * b[k];
    for (int s = 0; s < g.num_states(); ++s) {
      const auto pa = extend_payoff(g, s, a), pb = extend_payoff(g, s, b), pm = extend_payoff(g, s, m);
      for (int i = 0; i < 2; ++i) EXPECT_NEAR(pm[i], w * pa[i] + (1 - w) * pb[i], 1e-12);
      const auto qa = extend_transition(g, s, a), qb = extend_transition(g, s, b),
                 qm = extend_transition(g, s, m);
      for (int t = 0; t < g.num_states(); ++t) EXPECT_NEAR(qm[t], w * qa[t] + (1 - w) * qb[t], 1e-12);
    }
  }
}

TEST(Discounted, ConstantStream) {
  const StochasticGame g = constant_game(0.3);
  StationaryProfile x{{{{1.0}}}};
  for (double lambda : {0.0, 0.5, 0.99}) {
    EXPECT_NEAR(discounted_payoff_stationary(g, 0, x, lambda)[0], 0.3, 1e-12);
  }
  EXPECT_THROW(discounted_payoff_stationary(g, 0, x, 1.0), std::invalid_argument);
}

TEST(Discounted, SorinImmediateAbsorption) {
  const StochasticGame g = testing::sorin_game();
  StationaryProfile x;
  for (int s = 0; s < 3; ++s) x.mixed.push_back({{0, 1}, {1, 0}});  // (B, L)
  const auto v = discounted_payoff_stationary(g, testing::kSorinS0, x, 0.5);
  // Hand recursion: stage 1 pays (0,1), then (0,1) forever.
  EXPECT_NEAR(v[0], 0.0, 1e-12);
  EXPECT_NEAR(v[1], 1.0, 1e-12);
}

TEST(Discounted, SorinFixedEquilibriumTendsToOneThird) {
  const StochasticGame g = testing::sorin_game();
  StationaryProfile x;
  for (int s = 0; s < 3; ++s) x.mixed.push_back({{1, 0}, {2.0 / 3, 1.0 / 3}});
  double prev = 1.0;
  for (double lambda : {0.9, 0.99, 0.999}) {
    const double p2 = discounted_payoff_stationary(g, testing::kSorinS0, x, lambda)[1];
    EXPECT_NEAR(p2, 1.0 / 3.0, 1e-12);  // (T, .) never leaves s0
    prev = p2;
  }
  EXPECT_NEAR(prev, 1.0 / 3.0, 1e-9);
}

TEST(Discounted, OneStepBellmanConsistency) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const StochasticGame g = testing::random_game(rng, {.players = 2, .states = 4, .actions = 2});
    const StationaryCorrelated tau = to_correlated(g, testing::random_profile(rng, g));
    const double lambda = 0.9;
    const Eigen::MatrixXd v = discounted_payoff_all(g, tau, lambda);
    for (int s = 0; s < g.num_states(); ++s) {
      const auto u = extend_payoff(g, s, tau.joint[s]);
      const auto q = extend_transition(g, s, tau.joint[s]);
      for (int i = 0; i < 2; ++i) {
        double rhs = (1 - lambda) * u[i];
        for (int t = 0; t < g.num_states(); ++t) rhs += lambda * q[t] * v(t, i);
        EXPECT_NEAR(v(s, i), rhs, 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace accept
