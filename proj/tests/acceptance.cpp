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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "accept/accept.hpp"
#include "brute_force.hpp"
#include "test_support.hpp"

namespace accept {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("C%-2d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... T>
std::string fmt(const char* f, T... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// The generated suite: 60 two-player games, 2..5 states, two actions each.
std::vector<StochasticGame> suite() {
  std::vector<StochasticGame> out;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    testing::RandomGameOptions o;
    o.states = 2 + static_cast<int>(seed % 4);
    out.push_back(testing::random_game(seed, o));
  }
  return out;
}

bool is_unclassified(const SynthesizedProfile& p) {
  return std::any_of(p.plans.begin(), p.plans.end(),
                     [](const SetPlan& sp) { return sp.type == SetType::kUnclassifiable; });
}

void c1_sorin_values() {
  const auto t0 = Clock::now();
  const auto g = testing::sorin_game();
  const auto v1 = solve_minmax(g).uniform_values();
  const double e1 = std::abs(v1[0][testing::kSorinS0] - 2.0 / 3.0);
  const double e2 = std::abs(v1[1][testing::kSorinS0] - 0.5);
  const double dt = seconds_since(t0);
  report(1, e1 <= 1e-3 && e2 <= 1e-3 && dt < 5.0,
         fmt("v1(s0) = (%.6f, %.6f), errors %.2e %.2e, %.3f s", v1[0][0], v1[1][0], e1, e2, dt));
}

void c2_sorin_failure() {
  const auto g = testing::sorin_game();
  const auto v1 = solve_minmax(g).uniform_values();
  StationaryCorrelated x;
  x.joint = {{2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0}, point_mass(4, 0), point_mass(4, 0)};
  const auto m = stationary_automaton(g, x);
  const double lim = limit_payoff_memory(g, m)(testing::kSorinS0, 1);
  const auto r = check_minmax_acceptable(g, m, v1, 0.05);
  report(2, std::abs(lim - 1.0 / 3.0) <= 1e-3 && !r.pass,
         fmt("player 2 limit %.6f, acceptability %s", lim, r.pass ? "passes" : "fails"));
}

struct SuiteRun {
  std::vector<Synthesis> synth;
  std::vector<CorrelatedBuild> corr;
  double seconds = 0.0;
};

void c3_automaton_profiles(const std::vector<StochasticGame>& games, SuiteRun& run) {
  const auto t0 = Clock::now();
  int classified = 0, pass = 0, full = 0, sized = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& g : games) {
    run.synth.push_back(synthesize(g));
    const Synthesis& s = run.synth.back();
    const bool ok_class = s.profile.complete && !is_unclassified(s.profile);
    classified += ok_class;
    if (!ok_class) continue;
    const auto r = check_minmax_acceptable(g, s.profile.automaton, s.v1, 0.05);
    pass += r.pass;
    full += r.pass_full_grid;
    worst = std::min(worst, r.worst_limit_margin);
    sized += automaton_size_audit(g, s.profile.automaton).within;
  }
  run.seconds = seconds_since(t0);
  const int n = static_cast<int>(games.size());
  report(3, classified == n && pass == n && sized == n && run.seconds < 600.0,
         fmt("%d games: classified %d, acceptable %d (all grid points %d), size bound %d, worst limit margin %.3g, "
             "%.1f s",
             n, classified, pass, full, sized, worst, run.seconds));
}

void c4_correlated_strategies(const std::vector<StochasticGame>& games, SuiteRun& run) {
  int built = 0, pass = 0, full = 0, sized = 0;
  for (std::size_t k = 0; k < games.size(); ++k) {
    const auto& g = games[k];
    run.corr.push_back(synthesize_correlated(g, run.synth[k]));
    const auto& cb = run.corr.back();
    if (!cb.complete) continue;
    ++built;
    const auto m = stationary_automaton(g, cb.tau);
    const auto r = check_minmax_acceptable(g, m, run.synth[k].v1, 0.05);
    pass += r.pass;
    full += r.pass_full_grid;
    sized += m.size() <= g.num_states();
  }
  const int n = static_cast<int>(games.size());
  report(4, built == n && pass == n && sized == n,
         fmt("%d games: built %d, acceptable %d (all grid points %d), size <= |S| %d", n, built, pass, full, sized));
}

// Optimal long-run average reward of a one-player game by relative value
// iteration on the lazy chain (same gains, aperiodic).
std::vector<double> optimal_gain(const StochasticGame& g) {
  const int n = g.num_states();
  std::vector<double> v(n, 0.0), gain(n, 0.0);
  for (int it = 0; it < 200000; ++it) {
    std::vector<double> nv(n);
    for (int s = 0; s < n; ++s) {
      double best = -1e300;
      for (int a = 0; a < g.num_profiles(); ++a) {
        double q = g.payoff[s][a][0] + 0.5 * v[s];
        for (int t = 0; t < n; ++t) q += 0.5 * g.transition[s][a][t] * v[t];
        best = std::max(best, q);
      }
      nv[s] = best;
    }
    double change = 0.0;
    for (int s = 0; s < n; ++s) {
      const double d = nv[s] - v[s];
      change = std::max(change, std::abs(d - gain[s]));
      gain[s] = d;
    }
    // Keep the iterates bounded; gains are differences so a shift is harmless.
    const double shift = *std::min_element(nv.begin(), nv.end());
    for (double& x : nv) x -= shift;
    v = nv;
    if (it > 100 && change < 1e-13) break;
  }
  return gain;
}

void c5_blackwell() {
  int pure = 0, match = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    testing::RandomGameOptions o;
    o.players = 1;
    o.actions = 3;
    o.states = 3 + static_cast<int>(seed % 3);
    const auto g = testing::random_game(1000 + seed, o);
    const auto s = synthesize(g);
    const auto& m = s.profile.automaton;
    bool is_pure = s.profile.complete && !m.public_coin && m.size() == g.num_states();
    for (const auto& out : m.output) is_pure = is_pure && *std::max_element(out.begin(), out.end()) == 1.0;
    pure += is_pure;
    const auto lim = limit_payoff_memory(g, m);
    const auto gain = optimal_gain(g);
    double err = 0.0;
    for (int st = 0; st < g.num_states(); ++st) err = std::max(err, std::abs(lim(m.initial[st], 0) - gain[st]));
    worst = std::max(worst, err);
    match += err <= 1e-6;
  }
  report(5, pure == 20 && match == 20,
         fmt("20 MDPs: pure stationary %d, payoff within 1e-6 of value iteration %d, worst gap %.2e", pure, match, worst));
}

void c6_frequency(const std::vector<StochasticGame>& games) {
  std::mt19937_64 rng(606);
  int ok = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto& g = games[k % games.size()];
    const auto x = testing::random_profile(rng, g);
    double err = 0.0;
    for (int s = 0; s < g.num_states(); ++s) {
      const auto lim = payoff_of_frequency(g, stationary_frequency(g, x, s));
      const auto disc = discounted_payoff_stationary(g, s, x, 0.9999);
      for (int i = 0; i < g.num_players; ++i) err = std::max(err, std::abs(lim[i] - disc[i]));
    }
    worst = std::max(worst, err);
    ok += err <= 0.02;
  }
  report(6, ok == 100, fmt("100 profiles: within 0.02 %d, worst gap %.2e", ok, worst));
}

StationaryCorrelated mostly_pure(std::mt19937_64& rng, const StochasticGame& g) {
  std::uniform_int_distribution<int> pick(0, g.num_profiles() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StationaryCorrelated x;
  for (int s = 0; s < g.num_states(); ++s) {
    if (u(rng) < 0.7) {
      x.joint.push_back(point_mass(g.num_profiles(), pick(rng)));
    } else {
      x.joint.push_back(testing::random_distribution(rng, g.num_profiles()));
    }
  }
  return x;
}

void c7_oracles(const std::vector<StochasticGame>& games, const SuiteRun& run) {
  std::mt19937_64 rng(707);
  int decomp = 0, irreducible = 0, points = 0, checked = 0;
  for (std::size_t k = 0; k < games.size(); ++k) {
    const auto& g = games[k];
    if (g.num_states() > 5) continue;
    ++checked;
    const Synthesis& s = run.synth[k];
    std::vector<StateSet> got;
    for (const auto& cs : s.decomposition.sets) got.push_back(cs.states);
    std::sort(got.begin(), got.end());
    decomp += got == brute::maximal_communicating_sets(g, s.equilibria, s.v1, s.decomposition.tol_v);

    bool irr = true;
    for (int t = 0; t < 5; ++t) {
      const auto x = mostly_pure(rng, g);
      auto a = irreducible_sets(g, x);
      std::sort(a.begin(), a.end());
      irr = irr && a == brute::minimal_closed_sets(g, x);
    }
    irreducible += irr;

    StateSet all;
    for (int st = 0; st < g.num_states(); ++st) all.push_back(st);
    const auto pts = enumerate_recurrent_points(g, all);
    const auto oracle = brute::recurrent_points(g);
    bool same = pts.size() == oracle.size();
    for (const auto& p : pts) {
      std::vector<int> acts;
      for (int st : p.support) acts.push_back(p.profile[st]);
      const auto it = oracle.find({p.support, acts});
      same = same && it != oracle.end();
      if (!same) break;
      for (int i = 0; i < g.num_players; ++i) same = same && std::abs(p.payoff[i] - it->second.payoff[i]) <= 1e-9;
    }
    points += same;
  }
  report(7, decomp == checked && irreducible == checked && points == checked,
         fmt("%d games: decomposition %d, irreducible sets %d, recurrent points %d", checked, decomp, irreducible,
             points));
}

void c8_exit_tuning() {
  std::mt19937_64 rng(808);
  double worst_round = 0.0, worst_z = 0.0;
  int round_ok = 0, sim_ok = 0;
  const long trials = 100000;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 4;
    const auto beta = testing::random_distribution(rng, n);
    const auto sol = solve_eta(beta);
    const auto f = first_exit_distribution(sol.eta);
    double err = 0.0;
    for (int l = 0; l < n; ++l) err = std::max(err, std::abs(f[l] - beta[l]));
    worst_round = std::max(worst_round, err);
    round_ok += err <= 1e-10;
    const auto count = simulate_first_exit(sol.eta, trials, 8000 + k);
    double z = 0.0;
    for (int l = 0; l < n; ++l) {
      const double se = std::sqrt(beta[l] * (1 - beta[l]) / trials);
      if (se > 0) z = std::max(z, std::abs(static_cast<double>(count[l]) / trials - beta[l]) / se);
    }
    worst_z = std::max(worst_z, z);
    sim_ok += z <= 3.0;
  }
  report(8, round_ok == 100 && sim_ok == 100,
         fmt("100 instances: round trip <= 1e-10 %d (worst %.2e), simulation within 3 SE %d (worst %.2f SE)", round_ok,
             worst_round, sim_ok, worst_z));
}

void c9_shapley(const std::vector<StochasticGame>& games) {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(-3.0, 3.0), lam(0.0, 0.999), up(0.0, 1.0);
  int contraction = 0, monotone = 0;
  double worst = -1e300;
  for (int k = 0; k < 100; ++k) {
    const auto& g = games[k % games.size()];
    const int player = k % 2;
    const double lambda = lam(rng);
    ValueVector v(g.num_states()), w(g.num_states()), hi(g.num_states());
    for (int s = 0; s < g.num_states(); ++s) {
      v[s] = u(rng);
      w[s] = u(rng);
      hi[s] = v[s] + up(rng);
    }
    const auto tv = shapley_operator(g, player, v, lambda);
    const auto tw = shapley_operator(g, player, w, lambda);
    const auto th = shapley_operator(g, player, hi, lambda);
    double lhs = 0.0, rhs = 0.0;
    bool mono = true;
    for (int s = 0; s < g.num_states(); ++s) {
      lhs = std::max(lhs, std::abs(tv[s] - tw[s]));
      rhs = std::max(rhs, std::abs(v[s] - w[s]));
      mono = mono && th[s] >= tv[s] - 1e-12;
    }
    worst = std::max(worst, lhs - lambda * rhs);
    contraction += lhs <= lambda * rhs + 1e-12;
    monotone += mono;
  }
  report(9, contraction == 100 && monotone == 100,
         fmt("100 pairs: contraction %d (max excess %.2e), monotone %d", contraction, worst, monotone));
}

void c10_ir_and_drift(const std::vector<StochasticGame>& games, const SuiteRun& run) {
  int ir_ok = 0, ir_strict = 0, drift_ok = 0, n = 0;
  double worst_excess = -1e300, worst_drift = 1e300;
  int worst_game = -1;
  for (std::size_t k = 0; k < games.size(); ++k) {
    const Synthesis& s = run.synth[k];
    if (!s.profile.complete) continue;
    ++n;
    const auto ir = check_individual_rationality(games[k], s.profile.automaton, s.v1, 0.05);
    ir_ok += ir.pass_relaxed;
    ir_strict += ir.pass;
    if (ir.worst_excess > worst_excess) worst_excess = ir.worst_excess, worst_game = static_cast<int>(k) + 1;
    const auto sub = check_submartingale(games[k], s.profile, s.v1, 1e-6);
    drift_ok += sub.pass;
    worst_drift = std::min(worst_drift, sub.min_drift);
  }
  // Sorin's game on its own, for the record.
  const auto g = testing::sorin_game();
  const auto s = synthesize(g);
  const auto ir = check_individual_rationality(g, s.profile.automaton, s.v1, 0.05);
  report(10, ir_ok == n && drift_ok == n,
         fmt("%d games: IR slack <= 2eps %d (<= eps %d), worst %.4f (seed %d); drift >= -1e-6 %d, worst %.2e; "
             "Sorin IR excess %.4f",
             n, ir_ok, ir_strict, worst_excess, worst_game, drift_ok, worst_drift, ir.worst_excess));
}

}  // namespace
}  // namespace accept

int main() {
  using namespace accept;
  c1_sorin_values();
  c2_sorin_failure();
  const auto games = suite();
  SuiteRun run;
  c3_automaton_profiles(games, run);
  c4_correlated_strategies(games, run);
  c5_blackwell();
  c6_frequency(games);
  c7_oracles(games, run);
  c8_exit_tuning();
  c9_shapley(games);
  c10_ir_and_drift(games, run);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
