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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "accept/accept.hpp"
#include "accept/report_json.hpp"
#include "test_support.hpp"

namespace accept {
namespace {

using testing::random_game;
using testing::RandomGameOptions;

StationaryCorrelated sorin_limit_profile() {
  // Player 1 plays T, player 2 plays [2/3 L, 1/3 R] in s0.
  StationaryCorrelated x;
  x.joint = {{2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0}, point_mass(4, 0), point_mass(4, 0)};
  return x;
}

ValueTable constant_w(const StochasticGame& g, double c) {
  return ValueTable(g.num_players, std::vector<double>(g.num_states(), c));
}

TEST(DiscountedPayoff, StationaryAutomatonMatchesDirectSolve) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RandomGameOptions o;
    o.states = 4;
    const auto g = random_game(seed, o);
    const auto x = to_correlated(g, testing::random_profile(rng, g));
    const auto m = stationary_automaton(g, x);
    for (double lambda : {0.0, 0.5, 0.9, 0.999}) {
      for (int s = 0; s < g.num_states(); ++s) {
        const auto a = exact_discounted_payoff_automaton(g, m, s, lambda);
        const auto b = discounted_payoff_stationary(g, s, x, lambda);
        for (int i = 0; i < g.num_players; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
      }
    }
  }
}

TEST(DiscountedPayoff, ConstantGame) {
  StochasticGame g;
  g.num_players = 2;
  g.state_names = {"only"};
  g.action_names = {{"a", "b"}, {"c"}};
  g.payoff = {{{0.3, 0.7}, {0.3, 0.7}}};
  g.transition = {{{1.0}, {1.0}}};
  StationaryCorrelated x;
  x.joint = {{0.4, 0.6}};
  const auto m = stationary_automaton(g, x);
  for (double lambda : {0.1, 0.9, 0.99999}) {
    const auto p = exact_discounted_payoff_automaton(g, m, 0, lambda);
    EXPECT_NEAR(p[0], 0.3, 1e-12);
    EXPECT_NEAR(p[1], 0.7, 1e-12);
  }
}

// Oracle: truncated series sum_n (1 - lambda) lambda^n P^n r on the product chain.
TEST(DiscountedPayoff, SynthesizedAutomatonMatchesSeries) {
  const auto g = load_game(testing::data_path("random_2p_a.json"));
  const auto s = synthesize(g);
  const auto& m = s.profile.automaton;
  const auto pc = product_chain(g, m);
  const double lambda = 0.9;
  Eigen::MatrixXd term = pc.reward, sum = Eigen::MatrixXd::Zero(m.size(), g.num_players);
  double w = 1.0 - lambda;
  for (int n = 0; n < 400; ++n, w *= lambda) {
    sum += w * term;
    term = pc.transition * term;
  }
  const auto v = discounted_payoff_memory(g, m, lambda);
  EXPECT_LE((v - sum).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DiscountedPayoff, MonteCarloAgrees) {
  const auto g = load_game(testing::data_path("random_2p_a.json"));
  const auto s = synthesize(g);
  const auto& m = s.profile.automaton;
  for (int s1 = 0; s1 < g.num_states(); ++s1) {
    const auto exact = exact_discounted_payoff_automaton(g, m, s1, 0.99);
    const auto est = simulate_discounted(g, m, s1, 0.99, 2000, 11);
    for (int i = 0; i < g.num_players; ++i) {
      EXPECT_LE(std::abs(est.mean[i] - exact[i]), 4 * est.std_error[i] + 1e-12) << "state " << s1 << " player " << i;
    }
  }
}

TEST(Acceptability, TrivialFloorAlwaysPasses) {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = random_game(seed, RandomGameOptions{});
    const auto x = to_correlated(g, testing::random_profile(rng, g));
    const auto r = check_w_acceptable(g, stationary_automaton(g, x), constant_w(g, -g.payoff_bound - 1));
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.pass_full_grid);
  }
}

TEST(Acceptability, SorinLimitProfileFails) {
  const auto g = testing::sorin_game();
  const auto v1 = solve_minmax(g).uniform_values();
  const auto x = sorin_limit_profile();
  const auto lim = limit_payoff_memory(g, stationary_automaton(g, x));
  EXPECT_NEAR(lim(testing::kSorinS0, 1), 1.0 / 3.0, 1e-3);
  const auto r = check_minmax_acceptable(g, x, v1, 0.05);
  EXPECT_FALSE(r.pass);
  bool flagged = false;
  for (const auto& e : r.entries) flagged = flagged || (e.state == testing::kSorinS0 && e.player == 1 && !e.pass);
  EXPECT_TRUE(flagged);
}

TEST(Acceptability, SynthesizedProfilesPass) {
  for (const char* name : {"sorin.json", "mdp_3state.json", "random_2p_a.json", "random_2p_b.json"}) {
    const auto g = load_game(testing::data_path(name));
    const auto s = synthesize(g);
    ASSERT_TRUE(s.profile.complete) << name;
    const auto r = check_minmax_acceptable(g, s.profile.automaton, s.v1, 0.05);
    EXPECT_TRUE(r.pass) << name;
    EXPECT_TRUE(check_minmax_acceptable(g, s.profile.automaton, s.v1, 0.05, default_lambda_grid(), true).pass) << name;
  }
}

TEST(Acceptability, LambdaZeroIsTheFirstPassingSuffix) {
  // Margins -1, +1, +1 on a three-point grid: lambda0 is the second point.
  StochasticGame g;
  g.num_players = 1;
  g.state_names = {"start", "good"};
  g.action_names = {{"go"}};
  g.payoff = {{{-1.0}}, {{1.0}}};
  g.transition = {{{0.0, 1.0}}, {{0.0, 1.0}}};
  StationaryCorrelated x;
  x.joint = {{1.0}, {1.0}};
  // gamma^lambda(start) = -(1 - lambda) + lambda = 2 lambda - 1.
  const auto r = check_w_acceptable(g, stationary_automaton(g, x), {{0.5, 0.0}}, {0.7, 0.8, 0.9});
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.pass_full_grid);
  EXPECT_EQ(r.entries[0].lambda0, 1);
}

TEST(Acceptability, BadGridRejected) {
  const auto g = testing::sorin_game();
  const auto m = stationary_automaton(g, sorin_limit_profile());
  EXPECT_THROW(check_w_acceptable(g, m, constant_w(g, 0.0), {0.9, 0.9}), std::invalid_argument);
  EXPECT_THROW(check_w_acceptable(g, m, constant_w(g, 0.0), {0.5, 1.0}), std::invalid_argument);
}

TEST(AverageLimit, UnichainValuesCoincide) {
  const auto g = load_game(testing::data_path("mdp_3state.json"));
  const auto s = synthesize(g);
  const auto& m = s.profile.automaton;
  const auto lim = limit_payoff_memory(g, m);
  const auto r = check_average_limit_acceptable(g, m, shift_values(s.v1, 0.05));
  EXPECT_TRUE(r.limit_pass);
  EXPECT_TRUE(r.average_pass);
  for (const auto& e : r.entries) {
    EXPECT_NEAR(e.average.back(), e.limit, 1e-3);
    const auto d = exact_discounted_payoff_automaton(g, m, e.state, 0.99999);
    EXPECT_NEAR(d[e.player], e.limit, 1e-3);
  }
}

TEST(IndividualRationality, StationaryEquilibriumOfRepeatedDilemma) {
  // One state, defect/defect forever: every deviation has continuation value 1.
  StochasticGame g;
  g.num_players = 2;
  g.state_names = {"s"};
  g.action_names = {{"C", "D"}, {"C", "D"}};
  g.payoff = {{{3, 3}, {0, 4}, {4, 0}, {1, 1}}};
  g.transition = {{{1.0}, {1.0}, {1.0}, {1.0}}};
  const auto v1 = solve_minmax(g).uniform_values();
  EXPECT_NEAR(v1[0][0], 1.0, 1e-9);
  StationaryCorrelated x;
  x.joint = {point_mass(4, 3)};
  const auto r = check_individual_rationality(g, x, v1, 0.05);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.worst_excess, 0.0, 1e-9);
}

TEST(IndividualRationality, SorinProfileFlagsTheDeviationToB) {
  const auto g = testing::sorin_game();
  const auto s = synthesize(g);
  const auto r = check_individual_rationality(g, s.profile.automaton, s.v1, 0.05);
  EXPECT_FALSE(r.pass_relaxed);
  ASSERT_GE(r.worst_entry, 0);
  const auto& e = r.entries[r.worst_entry];
  EXPECT_EQ(e.player, 0);
  EXPECT_EQ(e.best_action, 1);  // B
}

TEST(Submartingale, SynthesizedProfilesHaveNoNegativeDrift) {
  for (const char* name : {"sorin.json", "mdp_3state.json", "random_2p_a.json", "random_2p_b.json"}) {
    const auto g = load_game(testing::data_path(name));
    const auto s = synthesize(g);
    const auto r = check_submartingale(g, s.profile, s.v1);
    EXPECT_TRUE(r.pass) << name << " drift " << r.min_drift;
    for (const auto& e : r.entries) EXPECT_NEAR(e.stop_mass, 1.0, 1e-9) << name;
  }
}

TEST(SizeAudit, SynthesizedProfilesWithinBound) {
  for (const char* name : {"sorin.json", "random_2p_a.json", "random_2p_b.json", "three_player.json"}) {
    const auto g = load_game(testing::data_path(name));
    const auto s = synthesize(g);
    const auto a = automaton_size_audit(g, s.profile.automaton);
    EXPECT_EQ(a.bound, g.num_states() * g.num_players);
    EXPECT_TRUE(a.within) << name << " size " << a.joint_size;
  }
}

TEST(Reports, IdenticalRunsGiveIdenticalBytes) {
  auto run = [] {
    const auto g = load_game(testing::data_path("random_2p_b.json"));
    const auto s = synthesize(g);
    json out = to_json(g, s);
    out["acceptability"] = to_json(g, check_minmax_acceptable(g, s.profile.automaton, s.v1, 0.05));
    out["simulation"] = to_json(simulate_discounted(g, s.profile.automaton, 0, 0.99, 50, 3));
    return out.dump(2);
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace accept
