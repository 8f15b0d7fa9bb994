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

#pragma once

// Exact checks on automaton profiles. Everything runs on the product chain
// over memory states (each memory state fixes its game state), so histories
// collapse to finitely many cases and all numbers come from linear solves.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "accept/automaton.hpp"
#include "accept/game.hpp"
#include "accept/markov.hpp"
#include "accept/one_shot.hpp"
#include "accept/profile_builder.hpp"
#include "accept/structure.hpp"

namespace accept {

inline std::vector<double> default_lambda_grid() { return {0.9, 0.99, 0.999, 0.9999, 0.99999}; }

inline void require_grid(const std::vector<double>& grid) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0 && grid[k] < 1.0)) throw std::invalid_argument("lambda grid points must lie in (0, 1)");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw std::invalid_argument("lambda grid must be strictly increasing");
  }
}

// Q x players.
inline Eigen::MatrixXd discounted_payoff_memory(const StochasticGame& g, const JointAutomaton& m, double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("discount factor must lie in [0, 1)");
  const ProductChain pc = product_chain(g, m);
  return markov::discounted_values(pc.transition, pc.reward, lambda);
}

inline PayoffVector exact_discounted_payoff_automaton(const StochasticGame& g, const JointAutomaton& m, int s1,
                                                      double lambda) {
  const Eigen::MatrixXd v = discounted_payoff_memory(g, m, lambda);
  PayoffVector out(g.num_players);
  for (int i = 0; i < g.num_players; ++i) out[i] = v(m.initial.at(s1), i);
  return out;
}

inline Eigen::MatrixXd limit_payoff_memory(const StochasticGame& g, const JointAutomaton& m) {
  const ProductChain pc = product_chain(g, m);
  return markov::limit_structure(pc.transition).limit * pc.reward;
}

// ---- acceptability ------------------------------------------------------------

struct AcceptabilityEntry {
  int memory = 0;  // start memory state
  int state = 0;
  int player = 0;
  double w = 0.0;
  std::vector<double> payoff;  // per grid point
  std::vector<double> margin;  // payoff - w
  double limit = 0.0;
  double limit_margin = 0.0;
  int lambda0 = -1;  // first grid index from which every later margin and the limit are >= 0
  bool pass = false;
  bool pass_full_grid = false;
  bool deviation_decreasing = true;  // |payoff - limit| shrinks along the grid
};

struct AcceptabilityReport {
  std::vector<double> grid;
  std::string subject = "initial states";
  std::vector<AcceptabilityEntry> entries;
  bool pass = true;
  bool pass_full_grid = true;
  double worst_limit_margin = std::numeric_limits<double>::infinity();
  double worst_grid_margin = std::numeric_limits<double>::infinity();
  double worst_finest_margin = std::numeric_limits<double>::infinity();
};

inline constexpr double kMarginTol = 1e-9;

// w[i][s]. With `every_memory_state`, each reachable memory state counts as
// a start, which covers every history (the subgame-perfect variant).
inline AcceptabilityReport check_w_acceptable(const StochasticGame& g, const JointAutomaton& m, const ValueTable& w,
                                              const std::vector<double>& grid = default_lambda_grid(),
                                              bool every_memory_state = false) {
  require_grid(grid);
  AcceptabilityReport r;
  r.grid = grid;
  std::vector<Eigen::MatrixXd> disc;
  for (double l : grid) disc.push_back(discounted_payoff_memory(g, m, l));
  const Eigen::MatrixXd lim = limit_payoff_memory(g, m);
  std::vector<int> starts;
  if (every_memory_state) {
    r.subject = "reachable memory states";
    const auto seen = reachable_memory(g, m);
    for (int q = 0; q < m.size(); ++q) {
      if (seen[q]) starts.push_back(q);
    }
  } else {
    starts = m.initial;
  }
  for (int q : starts) {
    const int s = m.game_state[q];
    for (int i = 0; i < g.num_players; ++i) {
      AcceptabilityEntry e;
      e.memory = q;
      e.state = s;
      e.player = i;
      e.w = w[i][s];
      e.limit = lim(q, i);
      e.limit_margin = e.limit - e.w;
      double prev_dev = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < grid.size(); ++k) {
        e.payoff.push_back(disc[k](q, i));
        e.margin.push_back(disc[k](q, i) - e.w);
        const double dev = std::abs(disc[k](q, i) - e.limit);
        if (dev > prev_dev + 1e-9) e.deviation_decreasing = false;
        prev_dev = dev;
      }
      const bool limit_ok = e.limit_margin >= -kMarginTol;
      if (limit_ok) {
        int k = static_cast<int>(grid.size());
        while (k > 0 && e.margin[k - 1] >= -kMarginTol) --k;
        if (k < static_cast<int>(grid.size()) || grid.empty()) e.lambda0 = k;
      }
      e.pass = e.lambda0 >= 0;
      e.pass_full_grid = e.lambda0 == 0;
      r.pass = r.pass && e.pass;
      r.pass_full_grid = r.pass_full_grid && e.pass_full_grid;
      r.worst_limit_margin = std::min(r.worst_limit_margin, e.limit_margin);
      for (double mg : e.margin) r.worst_grid_margin = std::min(r.worst_grid_margin, mg);
      if (!e.margin.empty()) r.worst_finest_margin = std::min(r.worst_finest_margin, e.margin.back());
      r.entries.push_back(std::move(e));
    }
  }
  return r;
}

inline ValueTable shift_values(const ValueTable& v1, double eps) {
  ValueTable w = v1;
  for (auto& row : w)
    for (double& x : row) x -= eps;
  return w;
}

inline AcceptabilityReport check_minmax_acceptable(const StochasticGame& g, const JointAutomaton& m,
                                                   const ValueTable& v1, double eps,
                                                   const std::vector<double>& grid = default_lambda_grid(),
                                                   bool every_memory_state = false) {
  return check_w_acceptable(g, m, shift_values(v1, eps), grid, every_memory_state);
}

inline AcceptabilityReport check_minmax_acceptable(const StochasticGame& g, const StationaryCorrelated& tau,
                                                   const ValueTable& v1, double eps,
                                                   const std::vector<double>& grid = default_lambda_grid()) {
  return check_minmax_acceptable(g, stationary_automaton(g, tau), v1, eps, grid);
}

// ---- average and limit acceptability -------------------------------------------------

struct AverageLimitEntry {
  int state = 0;
  int player = 0;
  double w = 0.0;
  std::vector<double> average;  // at each checkpoint horizon
  double limit = 0.0;
  bool average_pass = false;
  bool limit_pass = false;
};

struct AverageLimitReport {
  std::vector<long> horizons;
  std::vector<AverageLimitEntry> entries;
  bool average_pass = true;
  bool limit_pass = true;
};

// n-stage averages by propagating the state distribution; checkpoints grow
// tenfold up to `max_horizon`. Average acceptability uses the same "from some
// checkpoint on" rule as the discounted check.
inline AverageLimitReport check_average_limit_acceptable(const StochasticGame& g, const JointAutomaton& m,
                                                         const ValueTable& w, long max_horizon = 100000) {
  AverageLimitReport r;
  for (long h = 10; h <= max_horizon; h *= 10) r.horizons.push_back(h);
  const ProductChain pc = product_chain(g, m);
  const Eigen::MatrixXd lim = markov::limit_structure(pc.transition).limit * pc.reward;
  const int nq = m.size();
  const int ns = g.num_states();
  // One row per initial state, propagated together.
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(ns, nq);
  for (int s = 0; s < ns; ++s) dist(s, m.initial[s]) = 1.0;
  Eigen::MatrixXd cum = Eigen::MatrixXd::Zero(ns, g.num_players);
  std::vector<Eigen::MatrixXd> at;
  std::size_t next = 0;
  for (long n = 1; next < r.horizons.size(); ++n) {
    cum += dist * pc.reward;
    dist = dist * pc.transition;
    if (n == r.horizons[next]) at.push_back(cum / static_cast<double>(n)), ++next;
  }
  for (int s = 0; s < ns; ++s) {
    for (int i = 0; i < g.num_players; ++i) {
      AverageLimitEntry e;
      e.state = s;
      e.player = i;
      e.w = w[i][s];
      e.limit = lim(m.initial[s], i);
      e.limit_pass = e.limit >= e.w - kMarginTol;
      for (const auto& a : at) e.average.push_back(a(s, i));
      e.average_pass = e.limit_pass;
      if (e.average_pass) e.average_pass = e.average.empty() || e.average.back() >= e.w - kMarginTol;
      r.average_pass = r.average_pass && e.average_pass;
      r.limit_pass = r.limit_pass && e.limit_pass;
      r.entries.push_back(std::move(e));
    }
  }
  return r;
}

// ---- individual rationality ---------------------------------------------------------

struct IREntry {
  int memory = 0;
  int state = 0;
  int player = 0;
  int best_action = 0;
  double best_u_star = 0.0;   // max_b u*_i(s, b, tau_{-i})
  double continuation = 0.0;  // limit payoff from this memory state
  double excess = 0.0;        // best_u_star - continuation
};

struct IRReport {
  double epsilon = 0.0;
  std::vector<IREntry> entries;  // one per reachable memory state and player
  double worst_excess = -std::numeric_limits<double>::infinity();
  int worst_entry = -1;
  bool pass = true;          // worst_excess <= eps + 1e-6
  bool pass_relaxed = true;  // worst_excess <= 2 eps + 1e-6
};

// u*_i(s, b, alpha_{-i}) with alpha_{-i} the opponents' part of the
// (possibly correlated) output.
inline IRReport check_individual_rationality(const StochasticGame& g, const JointAutomaton& m,
                                             const ValueTable& v1, double eps) {
  IRReport r;
  r.epsilon = eps;
  const auto idx = g.indexer();
  const Eigen::MatrixXd lim = limit_payoff_memory(g, m);
  const auto seen = reachable_memory(g, m);
  for (int q = 0; q < m.size(); ++q) {
    if (!seen[q]) continue;
    const int s = m.game_state[q];
    for (int i = 0; i < g.num_players; ++i) {
      IREntry e;
      e.memory = q;
      e.state = s;
      e.player = i;
      e.continuation = lim(q, i);
      e.best_u_star = -std::numeric_limits<double>::infinity();
      for (int b = 0; b < idx.num_actions(i); ++b) {
        double u = 0.0;
        for (int a = 0; a < g.num_profiles(); ++a) {
          const double w = m.output[q][a];
          if (w <= 0.0) continue;
          const int dev = idx.with_action(a, i, b);
          for (int t = 0; t < g.num_states(); ++t) u += w * g.transition[s][dev][t] * v1[i][t];
        }
        if (u > e.best_u_star + 1e-15) e.best_u_star = u, e.best_action = b;
      }
      e.excess = e.best_u_star - e.continuation;
      if (e.excess > r.worst_excess) r.worst_excess = e.excess, r.worst_entry = static_cast<int>(r.entries.size());
      r.entries.push_back(e);
    }
  }
  r.pass = r.worst_excess <= eps + 1e-6;
  r.pass_relaxed = r.worst_excess <= 2.0 * eps + 1e-6;
  return r;
}

inline IRReport check_individual_rationality(const StochasticGame& g, const StationaryCorrelated& tau,
                                             const ValueTable& v1, double eps) {
  return check_individual_rationality(g, stationary_automaton(g, tau), v1, eps);
}

// ---- submartingale ---------------------------------------------------------------

struct SubmartingaleEntry {
  int memory = 0;
  int state = 0;
  std::string kind;  // "transient" or "type-B entry"
  PayoffVector drift;  // E[v1 at next block start] - v1(state)
  double min_drift = 0.0;
  double stop_mass = 1.0;  // probability of reaching the next block start
};

struct SubmartingaleReport {
  std::vector<SubmartingaleEntry> entries;
  double min_drift = std::numeric_limits<double>::infinity();
  double tolerance = 1e-6;
  bool pass = true;
};

// Block starts: transient memory states (the next start is one stage later)
// and entries into type-B sets (the next start is the first memory state
// outside the block). Type-A entries end the sequence.
inline SubmartingaleReport check_submartingale(const StochasticGame& g, const SynthesizedProfile& prof,
                                               const ValueTable& v1, double tolerance = 1e-6) {
  SubmartingaleReport r;
  r.tolerance = tolerance;
  const JointAutomaton& m = prof.automaton;
  const ProductChain pc = product_chain(g, m);
  const int nq = m.size();
  auto add = [&](int q, const std::string& kind, const Eigen::RowVectorXd& law) {
    SubmartingaleEntry e;
    e.memory = q;
    e.state = m.game_state[q];
    e.kind = kind;
    e.stop_mass = law.sum();
    e.min_drift = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.num_players; ++i) {
      double ev = 0.0;
      for (int t = 0; t < nq; ++t) ev += law(t) * v1[i][m.game_state[t]];
      e.drift.push_back(ev - v1[i][e.state]);
      e.min_drift = std::min(e.min_drift, e.drift.back());
    }
    // Never reaching the next block start is a failure of its own.
    if (e.stop_mass < 1.0 - 1e-9) e.min_drift = -std::numeric_limits<double>::infinity();
    r.min_drift = std::min(r.min_drift, e.min_drift);
    r.entries.push_back(std::move(e));
  };
  for (int q = 0; q < nq; ++q) {
    if (prof.block_of_memory[q] < 0) add(q, "transient", pc.transition.row(q));
  }
  for (std::size_t k = 0; k < prof.plans.size(); ++k) {
    if (prof.plans[k].type != SetType::kB) continue;
    std::vector<bool> stop(nq);
    for (int q = 0; q < nq; ++q) stop[q] = prof.block_of_memory[q] != static_cast<int>(k);
    const Eigen::MatrixXd h = markov::first_stop_distribution(pc.transition, stop);
    for (int s = 0; s < g.num_states(); ++s) {
      const int q = prof.entry[s];
      if (prof.block_of_memory[q] == static_cast<int>(k)) add(q, "type-B entry", h.row(q));
    }
  }
  r.pass = r.entries.empty() || r.min_drift >= -tolerance;
  return r;
}

// ---- size audit ---------------------------------------------------------------------

struct SizeAudit {
  int joint_size = 0;
  std::vector<int> per_player;  // memory states of each player's copy
  int bound = 0;                // |S| x |I|
  bool within = false;
};

inline SizeAudit automaton_size_audit(const StochasticGame& g, const JointAutomaton& m) {
  SizeAudit a;
  a.joint_size = m.size();
  a.bound = g.num_states() * g.num_players;
  for (int i = 0; i < g.num_players; ++i) a.per_player.push_back(player_view(g, m, i).size());
  a.within = std::all_of(a.per_player.begin(), a.per_player.end(), [&](int x) { return x <= a.bound; });
  return a;
}

}  // namespace accept
