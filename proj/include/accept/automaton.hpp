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

// Strategy automata.
//
// A joint automaton has memory states Q. Each memory state q belongs to one
// game state and emits a correlated mixed action f(q). After profile a is
// played and the game moves to s', memory moves to q' ~ g(q, a, s'). Memory
// transitions are random; every per-player copy draws them from one shared
// public coin, so the copies stay in lockstep. Payoffs are always evaluated on
// the joint automaton, which needs no such assumption.

#include <Eigen/Dense>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "accept/game.hpp"

namespace accept {

struct Branch {
  int next = 0;
  double prob = 1.0;
};

struct JointAutomaton {
  std::vector<int> game_state;    // per memory state
  std::vector<std::string> label;  // per memory state, for reports
  std::vector<Distribution> output;  // f(q), over joint profiles
  // next[q][a][s'] lists the branches of g(q, a, s'); only needed where
  // (a, s') can occur from q.
  std::vector<std::vector<std::vector<std::vector<Branch>>>> next;
  std::vector<int> initial;  // q* for each initial game state
  bool public_coin = false;  // some g(q, a, s') is not deterministic

  int size() const { return static_cast<int>(output.size()); }

  int add_state(int s, std::string name, Distribution out, int num_profiles, int num_states) {
    game_state.push_back(s);
    label.push_back(std::move(name));
    output.push_back(std::move(out));
    next.emplace_back(num_profiles, std::vector<std::vector<Branch>>(num_states));
    return size() - 1;
  }
};

// Per-player view: marginal outputs, shared transitions.
struct PlayerAutomaton {
  int player = 0;
  std::vector<int> game_state;
  std::vector<Distribution> output;  // over A_i
  const JointAutomaton* joint = nullptr;
  int size() const { return static_cast<int>(output.size()); }
};

// True if every output is the product of its marginals (within tol), which
// is what lets players run their own copies with private randomness.
inline bool outputs_are_product(const StochasticGame& g, const JointAutomaton& m, double tol = 1e-12) {
  const auto idx = g.indexer();
  for (const auto& out : m.output) {
    std::vector<Distribution> marg;
    for (int i = 0; i < g.num_players; ++i) marg.push_back(marginal(idx, out, i));
    const Distribution prod = product_action(idx, marg);
    for (int a = 0; a < idx.num_profiles(); ++a) {
      if (std::abs(prod[a] - out[a]) > tol) return false;
    }
  }
  return true;
}

inline PlayerAutomaton player_view(const StochasticGame& g, const JointAutomaton& m, int player) {
  PlayerAutomaton p;
  p.player = player;
  p.game_state = m.game_state;
  p.joint = &m;
  const auto idx = g.indexer();
  for (const auto& out : m.output) p.output.push_back(marginal(idx, out, player));
  return p;
}

// Structural checks; returns a list of problems (empty when valid).
inline std::vector<std::string> validate_automaton(const StochasticGame& g, const JointAutomaton& m) {
  std::vector<std::string> issues;
  if (static_cast<int>(m.initial.size()) != g.num_states()) issues.push_back("initial map must cover every state");
  for (int s = 0; s < static_cast<int>(m.initial.size()); ++s) {
    const int q = m.initial[s];
    if (q < 0 || q >= m.size() || m.game_state[q] != s) issues.push_back("bad initial memory state for " + g.state_names[s]);
  }
  for (int q = 0; q < m.size(); ++q) {
    if (!is_distribution(m.output[q], 1e-9)) issues.push_back("output of " + m.label[q] + " is not a distribution");
    const int s = m.game_state[q];
    for (int a = 0; a < g.num_profiles(); ++a) {
      if (m.output[q][a] <= 0.0) continue;
      for (int t = 0; t < g.num_states(); ++t) {
        if (g.transition[s][a][t] <= 0.0) continue;
        const auto& br = m.next[q][a][t];
        double mass = 0.0;
        for (const Branch& b : br) {
          mass += b.prob;
          if (b.next < 0 || b.next >= m.size() || m.game_state[b.next] != t) {
            issues.push_back("transition of " + m.label[q] + " lands on a memory state of the wrong game state");
          }
        }
        if (std::abs(mass - 1.0) > 1e-9) issues.push_back("transition row of " + m.label[q] + " does not sum to one");
      }
    }
  }
  return issues;
}

// Memory states reachable from the initial states.
inline std::vector<bool> reachable_memory(const StochasticGame& g, const JointAutomaton& m) {
  std::vector<bool> seen(m.size(), false);
  std::vector<int> stack;
  for (int q : m.initial) {
    if (!seen[q]) seen[q] = true, stack.push_back(q);
  }
  while (!stack.empty()) {
    const int q = stack.back();
    stack.pop_back();
    const int s = m.game_state[q];
    for (int a = 0; a < g.num_profiles(); ++a) {
      if (m.output[q][a] <= 0.0) continue;
      for (int t = 0; t < g.num_states(); ++t) {
        if (g.transition[s][a][t] <= 0.0) continue;
        for (const Branch& b : m.next[q][a][t]) {
          if (b.prob > 0.0 && !seen[b.next]) seen[b.next] = true, stack.push_back(b.next);
        }
      }
    }
  }
  return seen;
}

// The automaton of a stationary correlated strategy: one memory state per
// game state.
inline JointAutomaton stationary_automaton(const StochasticGame& g, const StationaryCorrelated& tau) {
  JointAutomaton m;
  const int n = g.num_states();
  for (int s = 0; s < n; ++s) m.add_state(s, "stat:" + g.state_names[s], tau.joint[s], g.num_profiles(), n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < g.num_profiles(); ++a) {
      for (int t = 0; t < n; ++t) m.next[s][a][t] = {Branch{t, 1.0}};
    }
  }
  m.initial.resize(n);
  for (int s = 0; s < n; ++s) m.initial[s] = s;
  return m;
}

// Markov chain on memory states (memory pins down the game state). Row q
// gives the law of the next memory state; reward row q the expected stage
// payoff.
struct ProductChain {
  Eigen::MatrixXd transition;
  Eigen::MatrixXd reward;  // memory states x players
};

inline ProductChain product_chain(const StochasticGame& g, const JointAutomaton& m) {
  const int nq = m.size();
  ProductChain pc{Eigen::MatrixXd::Zero(nq, nq), Eigen::MatrixXd::Zero(nq, g.num_players)};
  for (int q = 0; q < nq; ++q) {
    const int s = m.game_state[q];
    for (int a = 0; a < g.num_profiles(); ++a) {
      const double w = m.output[q][a];
      if (w <= 0.0) continue;
      for (int i = 0; i < g.num_players; ++i) pc.reward(q, i) += w * g.payoff[s][a][i];
      for (int t = 0; t < g.num_states(); ++t) {
        const double p = g.transition[s][a][t];
        if (p <= 0.0) continue;
        for (const Branch& b : m.next[q][a][t]) pc.transition(q, b.next) += w * p * b.prob;
      }
    }
  }
  return pc;
}

}  // namespace accept
