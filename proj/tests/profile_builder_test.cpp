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
#include "test_support.hpp"

namespace accept {
namespace {

using testing::kSorinAbs01;
using testing::kSorinAbs20;
using testing::kSorinS0;

// x: "stay" pays (1,0), "go" moves to y for (0,0). y: "stay" pays (0,1),
// "go" moves back. Player 2 is a dummy.
StochasticGame commute_game() {
  StochasticGame g;
  g.num_players = 2;
  g.state_names = {"x", "y"};
  g.action_names = {{"stay", "go"}, {"-"}};
  g.payoff = {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 1.0}, {0.0, 0.0}}};
  g.transition = {{{1.0, 0.0}, {0.0, 1.0}}, {{0.0, 1.0}, {1.0, 0.0}}};
  return g;
}

// Same thing on one state: player 1 picks the payoff vector.
StochasticGame one_state_game() {
  StochasticGame g;
  g.num_players = 2;
  g.state_names = {"s"};
  g.action_names = {{"L", "R"}, {"-"}};
  g.payoff = {{{1.0, 0.0}, {0.0, 1.0}}};
  g.transition = {{{1.0}, {1.0}}};
  return g;
}

const ValueTable kFakeValues2 = {{0.4, 0.4}, {0.4, 0.4}};

SetPlan manual_type_a(const StochasticGame& g, const StateSet& c, const PayoffVector& target) {
  SetPlan sp;
  sp.type = SetType::kA;
  sp.plan_a = type_a_feasibility(g, c, target);
  return sp;
}

// Absorption law over memory states outside the block, from the entry of s.
Eigen::RowVectorXd absorption_from(const StochasticGame& g, const SynthesizedProfile& p, int s) {
  const auto pc = product_chain(g, p.automaton);
  std::vector<bool> stop(p.automaton.size());
  for (int q = 0; q < p.automaton.size(); ++q) stop[q] = p.block_of_memory[q] < 0;
  return markov::first_stop_distribution(pc.transition, stop).row(p.automaton.initial[s]);
}

// ---- solve_eta ---------------------------------------------------------------

TEST(SolveEta, SingleExitUsesTheScale) {
  const auto sol = solve_eta({1.0}, 0.1);
  ASSERT_EQ(sol.eta.size(), 1u);
  EXPECT_DOUBLE_EQ(sol.eta[0], 0.1);
  EXPECT_NEAR(first_exit_distribution(sol.eta)[0], 1.0, 1e-15);
}

TEST(SolveEta, SymmetricPairClosedForm) {
  const double p = 0.1;
  const auto sol = solve_eta({0.5, 0.5}, p);
  EXPECT_NEAR(sol.eta[0], 0.5 * p, 1e-15);
  EXPECT_NEAR(sol.eta[1], 0.5 * p / (1.0 - 0.5 * p), 1e-15);
  const auto f = first_exit_distribution(sol.eta);
  EXPECT_NEAR(f[0], 0.5, 1e-12);
  EXPECT_NEAR(f[1], 0.5, 1e-12);
}

TEST(SolveEta, RandomRoundTrip) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 6;
    const auto beta = testing::random_distribution(rng, n);
    std::vector<double> m(n);
    for (double& x : m) x = mass(rng);
    const double scale = trial % 2 ? 0.1 : 0.95;  // the large one forces bisection
    const auto sol = solve_eta(beta, m, scale);
    for (double e : sol.eta) {
      EXPECT_GE(e, 0.0);
      EXPECT_LE(e, 1.0);
    }
    const auto f = first_exit_distribution(sol.eta, m);
    for (int l = 0; l < n; ++l) EXPECT_NEAR(f[l], beta[l], 1e-10) << "trial " << trial;
  }
}

TEST(SolveEta, SimulatedFirstExitMatches) {
  const std::vector<double> beta = {0.2, 0.5, 0.3};
  const auto sol = solve_eta(beta, 0.1);
  const long trials = 1000000;
  const auto count = simulate_first_exit(sol.eta, trials, 2024);
  for (std::size_t l = 0; l < beta.size(); ++l) {
    const double p = static_cast<double>(count[l]) / trials;
    const double se = std::sqrt(beta[l] * (1 - beta[l]) / trials);
    EXPECT_LE(std::abs(p - beta[l]), 3 * se) << "exit " << l;
  }
}

// ---- type B ----------------------------------------------------------------

TEST(TypeB, TwoOppositeExitsSplitEvenly) {
  ExitList list;
  for (int k = 0; k < 2; ++k) {
    Exit e;
    e.state = 0;
    e.profile = k;
    e.leave_mass = 1.0;
    e.leave_value = k == 0 ? PayoffVector{1.0, 0.0} : PayoffVector{0.0, 1.0};
    e.u_star = e.leave_value;
    e.companion = 2;
    e.deviator = 0;
    list.exits.push_back(e);
  }
  list.min_exit_mass = 1.0;
  const auto plan = type_b_feasibility(list, {0.4, 0.4}, 0.0, 2);
  ASSERT_TRUE(plan.has_value());
  EXPECT_NEAR(plan->beta[0], 0.5, 1e-12);
  EXPECT_NEAR(plan->beta[1], 0.5, 1e-12);
  EXPECT_NEAR(plan->slack, 0.1, 1e-12);
  EXPECT_FALSE(type_b_feasibility(list, {0.6, 0.6}, 0.0, 2).has_value());
}

TEST(TypeB, SorinSetIsTypeB) {
  const auto g = testing::sorin_game();
  const auto s = synthesize(g);
  const int k = s.decomposition.set_of[kSorinS0];
  ASSERT_GE(k, 0);
  const SetPlan& sp = s.profile.plans[k];
  EXPECT_EQ(sp.type, SetType::kB);
  EXPECT_NEAR(sp.slack_a, -1.0 / 12.0, 1e-6);
  EXPECT_NEAR(sp.slack_b, 1.0 / 9.0, 1e-6);
  ASSERT_TRUE(sp.plan_b.has_value());
  for (std::size_t l = 0; l < sp.plan_b->exits.size(); ++l) {
    const Exit& e = sp.plan_b->exits[l];
    const int target = g.transition[kSorinS0][e.profile][kSorinAbs01] > 0 ? kSorinAbs01 : kSorinAbs20;
    EXPECT_NEAR(sp.plan_b->beta[l], target == kSorinAbs01 ? 11.0 / 18.0 : 7.0 / 18.0, 1e-6);
    // Exits are one unilateral switch away from the stay profile T/x.
    EXPECT_EQ(e.deviator, 0);
  }
}

TEST(TypeB, SorinAutomatonExitLawIsBeta) {
  const auto g = testing::sorin_game();
  const auto s = synthesize(g);
  const int k = s.decomposition.set_of[kSorinS0];
  const SetPlan& sp = s.profile.plans[k];
  const auto prof = build_type_b_automaton(g, s.decomposition.sets[k], *sp.plan_b);
  ASSERT_TRUE(prof.complete);
  const auto h = absorption_from(g, prof, kSorinS0);
  EXPECT_NEAR(h.sum(), 1.0, 1e-12);  // nothing leaks
  double to01 = 0.0, to20 = 0.0;
  for (int q = 0; q < prof.automaton.size(); ++q) {
    if (prof.automaton.game_state[q] == kSorinAbs01) to01 += h(q);
    if (prof.automaton.game_state[q] == kSorinAbs20) to20 += h(q);
  }
  double b01 = 0.0, b20 = 0.0;
  for (std::size_t l = 0; l < sp.plan_b->exits.size(); ++l) {
    (g.transition[kSorinS0][sp.plan_b->exits[l].profile][kSorinAbs01] > 0 ? b01 : b20) += sp.plan_b->beta[l];
  }
  EXPECT_NEAR(to01, b01, 1e-9);
  EXPECT_NEAR(to20, b20, 1e-9);
}

TEST(TypeB, SorinLimitPayoff) {
  const auto g = testing::sorin_game();
  const auto s = synthesize(g);
  ASSERT_TRUE(s.profile.complete);
  const auto lim = limit_payoff_memory(g, s.profile.automaton);
  const int q = s.profile.automaton.initial[kSorinS0];
  EXPECT_NEAR(lim(q, 0), 7.0 / 9.0, 1e-6);
  EXPECT_NEAR(lim(q, 1), 11.0 / 18.0, 1e-6);
}

// ---- type A ----------------------------------------------------------------

// Each cycle spends beta_l / delta steps on loop l and one step commuting, so
// the limit payoff is beta / (1 + 2 delta).
TEST(TypeA, CommuteLimitFollowsDelta) {
  const auto g = commute_game();
  const auto cs = make_communicating_set(g, {0, 1}, kFakeValues2);
  const auto plan = type_a_feasibility(g, {0, 1}, {0.4, 0.4});
  ASSERT_TRUE(plan.has_value());
  ASSERT_EQ(plan->atoms.size(), 2u);
  for (double delta : {0.1, 0.01, 0.001}) {
    const auto prof = build_type_a_automaton(g, cs, *plan, delta);
    ASSERT_TRUE(prof.complete);
    const auto lim = limit_payoff_memory(g, prof.automaton);
    for (int s = 0; s < 2; ++s) {
      const int q = prof.automaton.initial[s];
      EXPECT_NEAR(lim(q, 0), 0.5 / (1 + 2 * delta), 1e-9) << "delta " << delta;
      EXPECT_NEAR(lim(q, 1), 0.5 / (1 + 2 * delta), 1e-9) << "delta " << delta;
    }
  }
}

TEST(TypeA, CommuteFrequencyCloseToTarget) {
  const auto g = commute_game();
  const auto cs = make_communicating_set(g, {0, 1}, kFakeValues2);
  const auto plan = type_a_feasibility(g, {0, 1}, {0.4, 0.4});
  const auto prof = build_type_a_automaton(g, cs, *plan, 0.001);
  // Frequency of (x, stay) summed over memory.
  const auto pc = product_chain(g, prof.automaton);
  const auto ls = markov::limit_structure(pc.transition);
  double stay_x = 0.0;
  const int q0 = prof.automaton.initial[0];
  for (int q = 0; q < prof.automaton.size(); ++q) {
    if (prof.automaton.game_state[q] == 0) stay_x += ls.limit(q0, q) * prof.automaton.output[q][0];
  }
  EXPECT_NEAR(stay_x, 0.5, 0.01);
}

TEST(TypeA, DeltaSearchPicksFirstHalvingThatMeetsTarget) {
  const auto g = commute_game();
  const auto cs = make_communicating_set(g, {0, 1}, kFakeValues2);
  BuildOptions o;  // epsilon 0.05: need 0.5 / (1 + 2 delta) >= 0.5 - 0.0125
  const auto prof = single_set_profile(g, cs, manual_type_a(g, {0, 1}, {0.4, 0.4}), o);
  ASSERT_TRUE(prof.complete);
  // 0.25 halved until delta <= 1/78: 0.0078125.
  EXPECT_DOUBLE_EQ(prof.plans[0].delta, 0.0078125);
}

TEST(TypeA, SizeStaysWithinBound) {
  const auto g = commute_game();
  const auto cs = make_communicating_set(g, {0, 1}, kFakeValues2);
  const auto plan = type_a_feasibility(g, {0, 1}, {0.4, 0.4});
  const auto prof = build_type_a_automaton(g, cs, *plan, 0.01);
  EXPECT_LE(prof.automaton.size(), g.num_states() * g.num_players);
  EXPECT_TRUE(validate_automaton(g, prof.automaton).empty());
}

// ---- correlated stationary ----------------------------------------------------

Decomposition one_set(const StochasticGame& g, const CommunicatingSet& cs) {
  Decomposition d;
  d.set_of.assign(g.num_states(), 0);
  d.transient_choice.assign(g.num_states(), -1);
  d.transient_mixed.assign(g.num_states(), {});
  d.sets.push_back(cs);
  return d;
}

TEST(Correlated, SingleStateTypeAIsExact) {
  const auto g = one_state_game();
  const ValueTable v1 = {{0.4}, {0.4}};
  const auto cs = make_communicating_set(g, {0}, v1);
  const auto d = one_set(g, cs);
  const auto cb = build_correlated_stationary(g, d, {manual_type_a(g, {0}, {0.4, 0.4})}, v1, BuildOptions{});
  ASSERT_TRUE(cb.complete);
  EXPECT_NEAR(cb.tau.joint[0][0], 0.5, 1e-12);
  EXPECT_NEAR(cb.tau.joint[0][1], 0.5, 1e-12);
}

TEST(Correlated, SorinExitRatioIsBeta) {
  const auto g = testing::sorin_game();
  const auto s = synthesize(g);
  const auto cb = synthesize_correlated(g, s);
  ASSERT_TRUE(cb.complete);
  const auto& tau = cb.tau.joint[kSorinS0];
  EXPECT_NEAR(tau[testing::kBL] / (tau[testing::kBL] + tau[testing::kBR]), 11.0 / 18.0, 1e-9);
  const auto lim = payoff_of_frequency(g, stationary_frequency(g, cb.tau, kSorinS0));
  EXPECT_NEAR(lim[0], 7.0 / 9.0, 1e-9);
  EXPECT_NEAR(lim[1], 11.0 / 18.0, 1e-9);
}

}  // namespace
}  // namespace accept
