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

// Monte Carlo play of automaton profiles. Randomness is split into streams,
// all derived from one seed:
//   nature       - state transitions,
//   public coin  - memory transitions (every player copy reads the same one),
//   player i     - player i's action draws,
//   device       - draws of correlated (non-product) outputs.
// Uniforms are built from raw 64-bit draws, so runs repeat bit for bit.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "accept/automaton.hpp"
#include "accept/game.hpp"

namespace accept {

namespace sim {

enum Stream : std::uint64_t { kNature = 1, kPublicCoin = 2, kDevice = 3, kPlayerBase = 16 };

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id, std::uint64_t replication = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Inverse-CDF draw; the last positive entry absorbs rounding.
inline int draw(std::mt19937_64& rng, const std::vector<double>& p) {
  const double u = uniform(rng);
  double acc = 0.0;
  int last = -1;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    acc += p[k];
    last = static_cast<int>(k);
    if (u < acc) return last;
  }
  if (last < 0) throw std::invalid_argument("draw: empty distribution");
  return last;
}

inline int draw(std::mt19937_64& rng, const std::vector<Branch>& br) {
  const double u = uniform(rng);
  double acc = 0.0;
  for (const Branch& b : br) {
    acc += b.prob;
    if (u < acc) return b.next;
  }
  return br.back().next;
}

}  // namespace sim

struct PathStep {
  int state = 0;
  int memory = 0;  // joint memory state (all player copies agree)
  int profile = 0;
};

enum class ExecutionMode { kJoint, kPerPlayer };

// One play of `steps` stages from s1. Joint mode runs the joint automaton;
// per-player mode gives every player its own copy (own memory, own action
// stream, its own copy of the public coin stream) and fails loudly if the
// copies ever disagree. With product outputs both modes draw the same numbers.
inline std::vector<PathStep> run_path(const StochasticGame& g, const JointAutomaton& m, int s1, int steps,
                                      std::uint64_t seed, ExecutionMode mode = ExecutionMode::kJoint,
                                      std::uint64_t replication = 0) {
  const auto idx = g.indexer();
  const bool product = outputs_are_product(g, m, 1e-12);
  if (mode == ExecutionMode::kPerPlayer && !product) {
    throw std::invalid_argument("per-player execution needs product outputs");
  }
  auto nature = sim::stream(seed, sim::kNature, replication);
  auto device = sim::stream(seed, sim::kDevice, replication);
  std::vector<std::mt19937_64> action_rng, coin;
  for (int i = 0; i < g.num_players; ++i) {
    action_rng.push_back(sim::stream(seed, sim::kPlayerBase + i, replication));
    coin.push_back(sim::stream(seed, sim::kPublicCoin, replication));
  }
  std::vector<PlayerAutomaton> views;
  if (mode == ExecutionMode::kPerPlayer) {
    for (int i = 0; i < g.num_players; ++i) views.push_back(player_view(g, m, i));
  }
  std::vector<int> mem(g.num_players, m.initial.at(s1));
  int s = s1;
  std::vector<PathStep> path;
  path.reserve(steps);
  for (int n = 0; n < steps; ++n) {
    int a = 0;
    if (!product) {
      a = sim::draw(device, m.output[mem[0]]);
    } else {
      std::vector<int> acts(g.num_players);
      for (int i = 0; i < g.num_players; ++i) {
        const Distribution marg = mode == ExecutionMode::kPerPlayer ? views[i].output[mem[i]]
                                                                    : marginal(idx, m.output[mem[0]], i);
        acts[i] = sim::draw(action_rng[i], marg);
      }
      a = idx.encode(acts);
    }
    path.push_back(PathStep{s, mem[0], a});
    const int t = sim::draw(nature, g.transition[s][a]);
    if (mode == ExecutionMode::kPerPlayer) {
      for (int i = 0; i < g.num_players; ++i) mem[i] = sim::draw(coin[i], m.next[mem[i]][a][t]);
      for (int i = 1; i < g.num_players; ++i) {
        if (mem[i] != mem[0]) throw std::logic_error("player copies lost synchronization");
      }
    } else {
      const int q = sim::draw(coin[0], m.next[mem[0]][a][t]);
      std::fill(mem.begin(), mem.end(), q);
    }
    s = t;
  }
  return path;
}

struct SimulationEstimate {
  PayoffVector mean;
  PayoffVector std_error;
  int replications = 0;
  int horizon = 0;
};

// Discounted payoff estimate; each run is truncated once lambda^n < 1e-12.
inline SimulationEstimate simulate_discounted(const StochasticGame& g, const JointAutomaton& m, int s1, double lambda,
                                              int replications, std::uint64_t seed) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("discount factor must lie in [0, 1)");
  if (replications < 2) throw std::invalid_argument("need at least two replications");
  SimulationEstimate est;
  est.replications = replications;
  est.horizon = lambda == 0.0 ? 1 : static_cast<int>(std::ceil(std::log(1e-12) / std::log(lambda)));
  const int ni = g.num_players;
  std::vector<double> sum(ni, 0.0), sq(ni, 0.0);
  for (int r = 0; r < replications; ++r) {
    const auto path = run_path(g, m, s1, est.horizon, seed, ExecutionMode::kJoint, static_cast<std::uint64_t>(r));
    std::vector<double> total(ni, 0.0);
    double w = 1.0 - lambda;
    for (const PathStep& st : path) {
      for (int i = 0; i < ni; ++i) total[i] += w * g.payoff[st.state][st.profile][i];
      w *= lambda;
    }
    for (int i = 0; i < ni; ++i) sum[i] += total[i], sq[i] += total[i] * total[i];
  }
  for (int i = 0; i < ni; ++i) {
    const double mean = sum[i] / replications;
    const double var = std::max(0.0, (sq[i] - replications * mean * mean) / (replications - 1));
    est.mean.push_back(mean);
    est.std_error.push_back(std::sqrt(var / replications));
  }
  return est;
}

inline SimulationEstimate simulate_discounted(const StochasticGame& g, const StationaryCorrelated& tau, int s1,
                                              double lambda, int replications, std::uint64_t seed) {
  return simulate_discounted(g, stationary_automaton(g, tau), s1, lambda, replications, seed);
}

// The cyclic exit scheme on its own: exit l is tried with probability eta_l in
// turn until one fires. Returns counts per exit.
inline std::vector<long> simulate_first_exit(const std::vector<double>& eta, long trials, std::uint64_t seed) {
  auto rng = sim::stream(seed, sim::kNature);
  std::vector<long> count(eta.size(), 0);
  for (long n = 0; n < trials; ++n) {
    for (std::size_t l = 0;; l = (l + 1) % eta.size()) {
      if (sim::uniform(rng) < eta[l]) {
        ++count[l];
        break;
      }
    }
  }
  return count;
}

}  // namespace accept
