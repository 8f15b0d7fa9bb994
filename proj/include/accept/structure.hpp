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

// Closed and irreducible sets, communicating sets under an enumerated
// equilibrium correspondence E, travel strategies and the transient profile.
//
// A set C is communicating when
//   closure: every listed equilibrium at every s in C keeps play in C,
//   reachability: every s in C reaches every s' in C almost surely without leaving C,
//   constant value: the uniform values of all players are constant on C up to tol_v.
// Reachability only involves profiles a with q(C|s,a) = 1, and holds iff the graph
// of such transitions is strongly connected on C.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "accept/game.hpp"
#include "accept/markov.hpp"
#include "accept/one_shot.hpp"

namespace accept {

using StateSet = std::vector<int>;  // sorted state indices

// Pure stationary profile on part of the state space; -1 where unspecified.
using PurePlan = std::vector<int>;

// ---- irreducible sets ------------------------------------------------------

inline std::vector<StateSet> irreducible_sets(const StochasticGame& g, const StationaryCorrelated& x) {
  return markov::recurrent_classes(induced_chain(g, x).transition);
}

inline std::vector<StateSet> irreducible_sets(const StochasticGame& g, const StationaryProfile& x) {
  return irreducible_sets(g, to_correlated(g, x));
}

// True if q(D | s, x) = 1 for all s in D.
inline bool is_closed_under(const StochasticGame& g, const StationaryCorrelated& x, const StateSet& d) {
  const auto in = membership(g.num_states(), d);
  for (int s : d) {
    for (int a = 0; a < g.num_profiles(); ++a) {
      if (x.joint[s][a] > 0.0 && !g.stays_in(s, a, in)) return false;
    }
  }
  return true;
}

// ---- reachability inside a set -----------------------------------------------

// Profiles at s whose transition stays inside `region`.
inline std::vector<int> preserving_profiles(const StochasticGame& g, int s, const std::vector<bool>& region) {
  std::vector<int> out;
  for (int a = 0; a < g.num_profiles(); ++a) {
    if (g.stays_in(s, a, region)) out.push_back(a);
  }
  return out;
}

struct TravelStrategy {
  StateSet region;   // C
  StateSet target;   // D
  PurePlan profile;  // indexed by state; set on C \ D
  // States of C from which D is reached almost surely without leaving C.
  std::vector<bool> winning;
  bool complete = false;  // winning covers all of C
};

// Almost-sure reachability of D from inside C with joint control: prune
// states that cannot reach D along C-preserving profiles, restrict to the
// survivors, repeat. Then walk distance layers toward D, taking the smallest
// profile that moves down a layer with positive probability.
inline TravelStrategy travel_strategy(const StochasticGame& g, const StateSet& c, const StateSet& d) {
  const int n = g.num_states();
  TravelStrategy tr;
  tr.region = c;
  tr.target = d;
  tr.profile.assign(n, -1);
  const auto in_d = membership(n, d);
  std::vector<bool> w = membership(n, c);
  for (int s : d) {
    if (!w[s]) throw std::invalid_argument("travel_strategy: target must lie inside the region");
  }
  std::vector<int> layer(n, -1);
  for (;;) {
    // Backward BFS from D over w-preserving profiles.
    std::fill(layer.begin(), layer.end(), -1);
    std::vector<int> frontier;
    for (int s : d) layer[s] = 0, frontier.push_back(s);
    for (int depth = 1; !frontier.empty(); ++depth) {
      std::vector<int> next;
      for (int s : c) {
        if (!w[s] || layer[s] >= 0) continue;
        for (int a : preserving_profiles(g, s, w)) {
          bool hits = false;
          for (int t : frontier) hits = hits || g.transition[s][a][t] > 0.0;
          if (hits) {
            layer[s] = depth;
            next.push_back(s);
            break;
          }
        }
      }
      frontier = std::move(next);
    }
    bool changed = false;
    for (int s : c) {
      if (w[s] && layer[s] < 0) w[s] = false, changed = true;
    }
    if (!changed) break;
  }
  tr.winning = w;
  tr.complete = true;
  for (int s : c) {
    if (!w[s]) {
      tr.complete = false;
      continue;
    }
    if (in_d[s]) continue;
    for (int a : preserving_profiles(g, s, w)) {
      bool down = false;
      for (int t = 0; t < n; ++t) down = down || (g.transition[s][a][t] > 0.0 && layer[t] == layer[s] - 1);
      if (down) {
        tr.profile[s] = a;
        break;
      }
    }
  }
  // The winning region is closed under the chosen profiles, which only use
  // C-preserving transitions; so play never leaves C.
  return tr;
}

struct LeadsResult {
  bool leads = false;
  PurePlan witness;  // pure stationary profile on C \ {s'}
};

inline LeadsResult leads_in_C(const StochasticGame& g, const StateSet& c, int s, int s_prime) {
  LeadsResult r;
  if (s == s_prime) {
    r.leads = true;
    r.witness.assign(g.num_states(), -1);
    return r;
  }
  const TravelStrategy tr = travel_strategy(g, c, {s_prime});
  r.leads = tr.winning[s];
  if (r.leads) r.witness = tr.profile;
  return r;
}

// ---- closedness under E ------------------------------------------------------

// Edge s -> t when some listed equilibrium at s reaches t with positive probability.
inline markov::Graph equilibrium_support_graph(const StochasticGame& g, const std::vector<EquilibriumSet>& e) {
  markov::Graph graph(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) {
    std::vector<bool> hit(g.num_states(), false);
    for (const auto& eq : e[s].profiles) {
      for (int a = 0; a < g.num_profiles(); ++a) {
        if (eq.joint[a] <= 0.0) continue;
        for (int t = 0; t < g.num_states(); ++t) hit[t] = hit[t] || g.transition[s][a][t] > 0.0;
      }
    }
    for (int t = 0; t < g.num_states(); ++t) {
      if (hit[t]) graph[s].push_back(t);
    }
  }
  return graph;
}

inline std::vector<StateSet> minimal_closed_sets_under_E(const StochasticGame& g,
                                                         const std::vector<EquilibriumSet>& e) {
  return markov::bottom_components(equilibrium_support_graph(g, e));
}

inline bool closed_under_E(const StochasticGame& g, const std::vector<EquilibriumSet>& e, const StateSet& c) {
  const auto graph = equilibrium_support_graph(g, e);
  const auto in = membership(g.num_states(), c);
  for (int s : c) {
    for (int t : graph[s]) {
      if (!in[t]) return false;
    }
  }
  return true;
}

// ---- communicating sets --------------------------------------------------------

struct CommunicatingCheck {
  bool closed = false;        // closure
  bool connected = false;     // reachability
  bool constant_value = false;
  double value_spread = 0.0;
  bool ok() const { return closed && connected && constant_value; }
};

inline CommunicatingCheck check_communicating(const StochasticGame& g, const std::vector<EquilibriumSet>& e,
                                              const ValueTable& v1, const StateSet& c, double tol_v) {
  CommunicatingCheck r;
  if (c.empty()) return r;
  r.closed = closed_under_E(g, e, c);
  const auto in = membership(g.num_states(), c);
  markov::Graph graph(g.num_states());
  bool every_state_can_stay = true;
  for (int s : c) {
    const auto keep = preserving_profiles(g, s, in);
    every_state_can_stay = every_state_can_stay && !keep.empty();
    for (int a : keep) {
      for (int t : c) {
        if (g.transition[s][a][t] > 0.0) graph[s].push_back(t);
      }
    }
  }
  const auto comps = markov::strongly_connected_components(graph);
  r.connected = every_state_can_stay && std::any_of(comps.begin(), comps.end(), [&](const StateSet& k) {
                  return k == c;
                });
  for (std::size_t i = 0; i < v1.size(); ++i) {
    double lo = v1[i][c[0]], hi = lo;
    for (int s : c) lo = std::min(lo, v1[i][s]), hi = std::max(hi, v1[i][s]);
    r.value_spread = std::max(r.value_spread, hi - lo);
  }
  r.constant_value = r.value_spread <= tol_v;
  return r;
}

struct CommunicatingSet {
  StateSet states;
  PayoffVector value;  // v(C), per-player maximum of v1 over C
  // travel[k] travels to states[k] (y_{{states[k]};C}).
  std::vector<PurePlan> travel;
  CommunicatingCheck check;
};

struct Decomposition {
  std::vector<CommunicatingSet> sets;
  std::vector<int> set_of;  // per state, -1 when transient
  StateSet transient;
  // x*: per transient state the chosen equilibrium (index into E(s)) and its
  // per-player mixed actions; empty for states in C*.
  std::vector<int> transient_choice;
  std::vector<std::vector<Distribution>> transient_mixed;
  double tol_v = 1e-4;
  std::vector<std::string> warnings;
};

// Single-linkage clusters of states whose v1 differ by at most tol_v for all players.
inline std::vector<StateSet> value_clusters(const ValueTable& v1, int n, double tol_v) {
  std::vector<int> parent(n);
  for (int s = 0; s < n; ++s) parent[s] = s;
  auto find = [&](int s) {
    while (parent[s] != s) s = parent[s] = parent[parent[s]];
    return s;
  };
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      bool near = true;
      for (const auto& vi : v1) near = near && std::abs(vi[s] - vi[t]) <= tol_v;
      if (near) parent[find(t)] = find(s);
    }
  }
  std::vector<StateSet> out;
  std::vector<int> slot(n, -1);
  for (int s = 0; s < n; ++s) {
    const int r = find(s);
    if (slot[r] < 0) slot[r] = static_cast<int>(out.size()), out.emplace_back();
    out[slot[r]].push_back(s);
  }
  return out;
}

// Maximal communicating sets by refinement to a fixpoint. Within each value
// cluster: drop states with a listed equilibrium leaving the region, split the
// rest into strongly connected components of the region-preserving graph,
// recurse until stable. Every communicating set survives inside one region,
// and every stable region is communicating, so the stable regions are exactly
// the maximal sets.
inline std::vector<StateSet> maximal_communicating_regions(const StochasticGame& g,
                                                           const std::vector<EquilibriumSet>& e,
                                                           const ValueTable& v1, double tol_v) {
  const int n = g.num_states();
  const auto eq_graph = equilibrium_support_graph(g, e);
  std::vector<StateSet> work = value_clusters(v1, n, tol_v), done;
  while (!work.empty()) {
    StateSet r = std::move(work.back());
    work.pop_back();
    std::vector<bool> in = membership(n, r);
    for (bool changed = true; changed;) {
      changed = false;
      for (int s : r) {
        if (!in[s]) continue;
        bool leaves = preserving_profiles(g, s, in).empty();
        for (int t : eq_graph[s]) leaves = leaves || !in[t];
        if (leaves) in[s] = false, changed = true;
      }
    }
    StateSet kept;
    for (int s : r) {
      if (in[s]) kept.push_back(s);
    }
    if (kept.empty()) continue;
    markov::Graph graph(n);
    for (int s : kept) {
      for (int a : preserving_profiles(g, s, in)) {
        for (int t : kept) {
          if (g.transition[s][a][t] > 0.0) graph[s].push_back(t);
        }
      }
    }
    for (auto& comp : markov::strongly_connected_components(graph)) {
      if (!in[comp[0]]) continue;  // isolated nodes outside the region
      if (comp == r) {
        done.push_back(comp);
      } else {
        work.push_back(comp);
      }
    }
  }
  std::sort(done.begin(), done.end());
  return done;
}

// ---- transient profile -----------------------------------------------------------

struct TransientProfile {
  std::vector<int> choice;  // per state; -1 inside C*
  StateSet stuck;           // nonempty when the induction stalls
};

// D^0 = C*, D^k adds every state with a listed equilibrium reaching D^{k-1}
// with positive probability; that equilibrium (first in list order) is x*(s).
inline TransientProfile transient_profile(const StochasticGame& g, const std::vector<EquilibriumSet>& e,
                                          const StateSet& c_star) {
  const int n = g.num_states();
  TransientProfile tp;
  tp.choice.assign(n, -1);
  std::vector<bool> covered = membership(n, c_star);
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<bool> next = covered;
    for (int s = 0; s < n; ++s) {
      if (covered[s]) continue;
      for (std::size_t k = 0; k < e[s].profiles.size(); ++k) {
        const Distribution q = extend_transition(g, s, e[s].profiles[k].joint);
        double mass = 0.0;
        for (int t = 0; t < n; ++t) mass += covered[t] ? q[t] : 0.0;
        if (mass > 0.0) {
          tp.choice[s] = static_cast<int>(k);
          next[s] = true;
          grew = true;
          break;
        }
      }
    }
    covered = std::move(next);
  }
  for (int s = 0; s < n; ++s) {
    if (!covered[s]) tp.stuck.push_back(s);
  }
  return tp;
}

inline Decomposition decompose(const StochasticGame& g, const std::vector<EquilibriumSet>& e,
                               const ValueTable& v1, double tol_v = 1e-4) {
  const int n = g.num_states();
  Decomposition d;
  d.tol_v = tol_v;
  d.set_of.assign(n, -1);
  StateSet c_star;
  for (const StateSet& c : maximal_communicating_regions(g, e, v1, tol_v)) {
    CommunicatingSet cs;
    cs.states = c;
    cs.check = check_communicating(g, e, v1, c, tol_v);
    if (!cs.check.ok()) {
      d.warnings.push_back("set failed direct re-verification (value spread " +
                           std::to_string(cs.check.value_spread) + ")");
    }
    for (std::size_t i = 0; i < v1.size(); ++i) {
      double hi = v1[i][c[0]];
      for (int s : c) hi = std::max(hi, v1[i][s]);
      cs.value.push_back(hi);
    }
    for (int t : c) cs.travel.push_back(travel_strategy(g, c, {t}).profile);
    for (int s : c) d.set_of[s] = static_cast<int>(d.sets.size()), c_star.push_back(s);
    d.sets.push_back(std::move(cs));
  }
  std::sort(c_star.begin(), c_star.end());
  const TransientProfile tp = transient_profile(g, e, c_star);
  d.transient_choice = tp.choice;
  d.transient_mixed.assign(n, {});
  for (int s = 0; s < n; ++s) {
    if (d.set_of[s] >= 0) continue;
    d.transient.push_back(s);
    if (tp.choice[s] >= 0) d.transient_mixed[s] = e[s].profiles[tp.choice[s]].mixed;
  }
  if (!tp.stuck.empty()) {
    std::string msg = "transient induction stalled on states";
    for (int s : tp.stuck) msg += " " + g.state_names[s];
    d.warnings.push_back(msg);
  }
  return d;
}

inline StateSet union_of_sets(const Decomposition& d) {
  StateSet out;
  for (const auto& c : d.sets) out.insert(out.end(), c.states.begin(), c.states.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace accept
