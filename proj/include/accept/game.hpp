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

// Finite multiplayer stochastic games: representation, validation, the
// multilinear extension of payoffs and transitions to correlated actions, and
// exact discounted payoffs of stationary play.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "accept/markov.hpp"

namespace accept {

using Distribution = std::vector<double>;
using PayoffVector = std::vector<double>;

inline constexpr double kDistributionTol = 1e-12;

// Joint action profiles are flattened in mixed radix with player 0 as the most
// significant digit, so profile indices order action tuples lexicographically.
class ProfileIndexer {
 public:
  ProfileIndexer() = default;
  explicit ProfileIndexer(std::vector<int> action_counts)
      : counts_(std::move(action_counts)), stride_(counts_.size()) {
    int s = 1;
    for (int i = static_cast<int>(counts_.size()) - 1; i >= 0; --i) {
      stride_[i] = s;
      s *= counts_[i];
    }
    size_ = s;
  }

  int num_players() const { return static_cast<int>(counts_.size()); }
  int num_profiles() const { return size_; }
  int num_actions(int player) const { return counts_[player]; }
  const std::vector<int>& action_counts() const { return counts_; }

  int action(int profile, int player) const { return (profile / stride_[player]) % counts_[player]; }

  std::vector<int> decode(int profile) const {
    std::vector<int> a(counts_.size());
    for (int i = 0; i < num_players(); ++i) a[i] = action(profile, i);
    return a;
  }

  int encode(const std::vector<int>& actions) const {
    int p = 0;
    for (int i = 0; i < num_players(); ++i) p += actions[i] * stride_[i];
    return p;
  }

  int with_action(int profile, int player, int a) const {
    return profile + (a - action(profile, player)) * stride_[player];
  }

  // Profiles of the other players, flattened the same way with `player` removed.
  int num_opponent_profiles(int player) const { return size_ / counts_[player]; }
  int opponent_index(int profile, int player) const {
    int idx = 0;
    for (int j = 0; j < num_players(); ++j) {
      if (j == player) continue;
      idx = idx * counts_[j] + action(profile, j);
    }
    return idx;
  }
  int combine(int player, int own_action, int opponent_idx) const {
    std::vector<int> a(counts_.size());
    for (int j = num_players() - 1; j >= 0; --j) {
      if (j == player) continue;
      a[j] = opponent_idx % counts_[j];
      opponent_idx /= counts_[j];
    }
    a[player] = own_action;
    return encode(a);
  }

 private:
  std::vector<int> counts_;
  std::vector<int> stride_;
  int size_ = 1;
};

struct StochasticGame {
  int num_players = 0;
  std::vector<std::string> state_names;
  std::vector<std::vector<std::string>> action_names;  // per player
  // Payoffs are validated against [-payoff_bound, payoff_bound].
  double payoff_bound = 1.0;
  // payoff[s][a][i] and transition[s][a][s'] with a a flattened profile.
  std::vector<std::vector<PayoffVector>> payoff;
  std::vector<std::vector<Distribution>> transition;

  int num_states() const { return static_cast<int>(state_names.size()); }
  ProfileIndexer indexer() const {
    std::vector<int> counts;
    for (const auto& a : action_names) counts.push_back(static_cast<int>(a.size()));
    return ProfileIndexer(counts);
  }
  int num_profiles() const { return static_cast<int>(payoff.empty() ? 0 : payoff[0].size()); }

  std::string profile_key(int profile) const {
    const auto idx = indexer().decode(profile);
    std::string key;
    for (int i = 0; i < num_players; ++i) {
      if (i) key += "/";
      key += action_names[i][idx[i]];
    }
    return key;
  }

  // Mass that q(.|s,a) puts on the given state set.
  double mass_on(int s, int a, const std::vector<bool>& in_set) const {
    double m = 0.0;
    for (int t = 0; t < num_states(); ++t) {
      if (in_set[t]) m += transition[s][a][t];
    }
    return m;
  }

  // True if q(.|s,a) is supported inside the set.
  bool stays_in(int s, int a, const std::vector<bool>& in_set) const {
    for (int t = 0; t < num_states(); ++t) {
      if (!in_set[t] && transition[s][a][t] > 0.0) return false;
    }
    return true;
  }
};

// Per-state per-player mixed actions.
struct StationaryProfile {
  std::vector<std::vector<Distribution>> mixed;  // [s][i]
};

// Per-state correlated mixed action over joint profiles.
struct StationaryCorrelated {
  std::vector<Distribution> joint;  // [s]
};

inline std::vector<bool> membership(int n, const std::vector<int>& members) {
  std::vector<bool> in(n, false);
  for (int s : members) in[s] = true;
  return in;
}

inline Distribution point_mass(int size, int index) {
  Distribution d(size, 0.0);
  d[index] = 1.0;
  return d;
}

inline bool is_distribution(const Distribution& d, double tol = kDistributionTol) {
  double sum = 0.0;
  for (double x : d) {
    if (!(x >= -tol)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol * std::max<std::size_t>(1, d.size());
}

// Product distribution over joint profiles.
inline Distribution product_action(const ProfileIndexer& idx, const std::vector<Distribution>& mixed) {
  Distribution out(idx.num_profiles(), 0.0);
  for (int a = 0; a < idx.num_profiles(); ++a) {
    double w = 1.0;
    for (int i = 0; i < idx.num_players() && w != 0.0; ++i) w *= mixed[i][idx.action(a, i)];
    out[a] = w;
  }
  return out;
}

inline Distribution marginal(const ProfileIndexer& idx, const Distribution& joint, int player) {
  Distribution m(idx.num_actions(player), 0.0);
  for (int a = 0; a < idx.num_profiles(); ++a) m[idx.action(a, player)] += joint[a];
  return m;
}

// Marginal of a joint action over the opponents of `player`.
inline Distribution opponent_marginal(const ProfileIndexer& idx, const Distribution& joint,
                                      int player) {
  Distribution m(idx.num_opponent_profiles(player), 0.0);
  for (int a = 0; a < idx.num_profiles(); ++a) m[idx.opponent_index(a, player)] += joint[a];
  return m;
}

inline StationaryCorrelated to_correlated(const StochasticGame& g, const StationaryProfile& x) {
  const auto idx = g.indexer();
  StationaryCorrelated out;
  for (int s = 0; s < g.num_states(); ++s) out.joint.push_back(product_action(idx, x.mixed[s]));
  return out;
}

// --- validation -------------------------------------------------------------

inline std::vector<std::string> validate_game(const StochasticGame& g) {
  std::vector<std::string> report;
  auto fmt = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
  };
  if (g.num_players <= 0) report.push_back("no players");
  if (g.num_states() <= 0) report.push_back("no states");
  if (static_cast<int>(g.action_names.size()) != g.num_players) {
    report.push_back("action lists do not match player count");
    return report;
  }
  for (int i = 0; i < g.num_players; ++i) {
    if (g.action_names[i].empty()) report.push_back("player " + std::to_string(i) + " has no actions");
  }
  if (!report.empty()) return report;
  const int na = g.indexer().num_profiles();
  if (static_cast<int>(g.payoff.size()) != g.num_states() ||
      static_cast<int>(g.transition.size()) != g.num_states()) {
    report.push_back("payoff/transition tables do not cover every state");
    return report;
  }
  for (int s = 0; s < g.num_states(); ++s) {
    if (static_cast<int>(g.payoff[s].size()) != na || static_cast<int>(g.transition[s].size()) != na) {
      report.push_back("tables at state " + g.state_names[s] + " do not cover every action profile");
      continue;
    }
    for (int a = 0; a < na; ++a) {
      const std::string where = "(" + g.state_names[s] + "," + g.profile_key(a) + ")";
      if (static_cast<int>(g.payoff[s][a].size()) != g.num_players) {
        report.push_back("payoff vector length at " + where);
      } else {
        for (int i = 0; i < g.num_players; ++i) {
          const double u = g.payoff[s][a][i];
          if (!(std::abs(u) <= g.payoff_bound)) {
            report.push_back("payoff " + fmt(u) + " out of range for player " + std::to_string(i) +
                             " at " + where);
          }
        }
      }
      const Distribution& q = g.transition[s][a];
      if (static_cast<int>(q.size()) != g.num_states()) {
        report.push_back("transition length at " + where);
        continue;
      }
      double mass = 0.0;
      bool negative = false;
      for (double p : q) {
        negative = negative || !(p >= 0.0);
        mass += p;
      }
      if (negative) report.push_back("negative transition probability at " + where);
      if (!(std::abs(mass - 1.0) <= kDistributionTol)) {
        report.push_back("transition mass " + fmt(mass) + " at " + where);
      }
    }
  }
  return report;
}

inline void require_valid(const StochasticGame& g) {
  auto report = validate_game(g);
  if (!report.empty()) throw std::invalid_argument("invalid game: " + report.front());
}

// --- multilinear extension --------------------------------------------------

inline void require_action(const StochasticGame& g, const Distribution& alpha) {
  if (static_cast<int>(alpha.size()) != g.num_profiles() || !is_distribution(alpha)) {
    throw std::invalid_argument("correlated action is not a distribution over action profiles");
  }
}

inline Distribution extend_transition(const StochasticGame& g, int s, const Distribution& alpha) {
  require_action(g, alpha);
  Distribution out(g.num_states(), 0.0);
  for (int a = 0; a < g.num_profiles(); ++a) {
    if (alpha[a] == 0.0) continue;
    for (int t = 0; t < g.num_states(); ++t) out[t] += alpha[a] * g.transition[s][a][t];
  }
  return out;
}

inline PayoffVector extend_payoff(const StochasticGame& g, int s, const Distribution& alpha) {
  require_action(g, alpha);
  PayoffVector out(g.num_players, 0.0);
  for (int a = 0; a < g.num_profiles(); ++a) {
    if (alpha[a] == 0.0) continue;
    for (int i = 0; i < g.num_players; ++i) out[i] += alpha[a] * g.payoff[s][a][i];
  }
  return out;
}

// Transition matrix and per-player reward columns of the chain induced by a
// stationary correlated strategy.
struct InducedChain {
  Eigen::MatrixXd transition;
  Eigen::MatrixXd reward;  // states x players
};

inline InducedChain induced_chain(const StochasticGame& g, const StationaryCorrelated& tau) {
  const int n = g.num_states();
  InducedChain c{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, g.num_players)};
  for (int s = 0; s < n; ++s) {
    const Distribution q = extend_transition(g, s, tau.joint[s]);
    const PayoffVector u = extend_payoff(g, s, tau.joint[s]);
    for (int t = 0; t < n; ++t) c.transition(s, t) = q[t];
    for (int i = 0; i < g.num_players; ++i) c.reward(s, i) = u[i];
  }
  return c;
}

// Discounted payoffs gamma^lambda(s, tau) for every initial state; rows are
// states, columns players.
inline Eigen::MatrixXd discounted_payoff_all(const StochasticGame& g, const StationaryCorrelated& tau,
                                             double lambda) {
  const InducedChain c = induced_chain(g, tau);
  return markov::discounted_values(c.transition, c.reward, lambda);
}

inline PayoffVector discounted_payoff_stationary(const StochasticGame& g, int s1,
                                                 const StationaryCorrelated& tau, double lambda) {
  const Eigen::MatrixXd v = discounted_payoff_all(g, tau, lambda);
  PayoffVector out(g.num_players);
  for (int i = 0; i < g.num_players; ++i) out[i] = v(s1, i);
  return out;
}

inline PayoffVector discounted_payoff_stationary(const StochasticGame& g, int s1,
                                                 const StationaryProfile& x, double lambda) {
  return discounted_payoff_stationary(g, s1, to_correlated(g, x), lambda);
}

}  // namespace accept
