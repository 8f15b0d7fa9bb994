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

// JSON views of results. Keys are sorted (nlohmann's default object), so the
// same inputs always print the same bytes.

#include <cmath>
#include <string>
#include <vector>

#include "accept/automaton.hpp"
#include "accept/game.hpp"
#include "accept/pipeline.hpp"
#include "accept/simulate.hpp"
#include "accept/verifier.hpp"
#include "json.hpp"

namespace accept {

using nlohmann::json;

namespace report {

// JSON has no infinities.
inline json number(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

inline json names(const StochasticGame& g, const StateSet& c) {
  json out = json::array();
  for (int s : c) out.push_back(g.state_names[s]);
  return out;
}

// Sparse distribution keyed by profile name.
inline json profile_distribution(const StochasticGame& g, const Distribution& d) {
  json out = json::object();
  for (int a = 0; a < g.num_profiles(); ++a) {
    if (d[a] > 0.0) out[g.profile_key(a)] = d[a];
  }
  return out;
}

inline json action_distribution(const StochasticGame& g, int player, const Distribution& d) {
  json out = json::object();
  for (std::size_t b = 0; b < d.size(); ++b) {
    if (d[b] > 0.0) out[g.action_names[player][b]] = d[b];
  }
  return out;
}

inline json value_table(const StochasticGame& g, const ValueTable& v) {
  json out = json::object();
  for (int s = 0; s < g.num_states(); ++s) {
    json row = json::array();
    for (const auto& vi : v) row.push_back(vi[s]);
    out[g.state_names[s]] = row;
  }
  return out;
}

}  // namespace report

inline json to_json(const StochasticGame& g, const MinMaxReport& r) {
  json players = json::array();
  for (const auto& p : r.players) {
    json values = json::object();
    for (int s = 0; s < g.num_states(); ++s) values[g.state_names[s]] = p.estimate[s];
    json diffs = json::array();
    for (double d : p.successive_differences) diffs.push_back(d);
    players.push_back({{"player", p.player},
                       {"uniform_values", values},
                       {"converged", p.converged},
                       {"final_lambda", p.schedule.empty() ? 0.0 : p.schedule.back()},
                       {"successive_differences", diffs}});
  }
  return {{"adversary_mode", r.adversary_mode},
          {"matches_independent_adversary", r.matches_independent_adversary},
          {"players", players}};
}

inline json to_json(const StochasticGame& g, const std::vector<EquilibriumSet>& e) {
  json out = json::object();
  for (const auto& es : e) {
    json list = json::array();
    for (const auto& eq : es.profiles) {
      json mixed = json::array();
      for (int i = 0; i < g.num_players; ++i) mixed.push_back(report::action_distribution(g, i, eq.mixed[i]));
      list.push_back({{"mixed", mixed}, {"payoff", eq.payoff}, {"regret", eq.regret}, {"exact", eq.exact},
                      {"method", eq.method}});
    }
    json entry = {{"equilibria", list}};
    if (!es.note.empty()) entry["note"] = es.note;
    out[g.state_names[es.state]] = entry;
  }
  return out;
}

inline json to_json(const StochasticGame& g, const Decomposition& d) {
  json sets = json::array();
  for (const auto& c : d.sets) {
    sets.push_back({{"states", report::names(g, c.states)},
                    {"value", c.value},
                    {"closed", c.check.closed},
                    {"connected", c.check.connected},
                    {"value_spread", c.check.value_spread}});
  }
  json transient = json::object();
  for (int s : d.transient) {
    json mixed = json::array();
    if (!d.transient_mixed[s].empty()) {
      for (int i = 0; i < g.num_players; ++i) mixed.push_back(report::action_distribution(g, i, d.transient_mixed[s][i]));
    }
    transient[g.state_names[s]] = mixed;
  }
  return {{"sets", sets}, {"transient", transient}, {"tol_v", d.tol_v}, {"warnings", d.warnings}};
}

inline json to_json(const StochasticGame& g, const Decomposition& d, const SetPlan& p) {
  json out = {{"set", p.set_index},
              {"states", report::names(g, d.sets[p.set_index].states)},
              {"type", to_string(p.type)},
              {"slack_a", report::number(p.slack_a)},
              {"slack_b", report::number(p.slack_b)},
              {"recurrent_points", p.num_points},
              {"exits", p.num_exits}};
  if (!p.diagnostics.empty()) out["diagnostics"] = p.diagnostics;
  if (p.plan_a) {
    json atoms = json::array();
    for (std::size_t l = 0; l < p.plan_a->atoms.size(); ++l) {
      const auto& at = p.plan_a->atoms[l];
      json prof = json::object();
      for (int s : at.support) prof[g.state_names[s]] = g.profile_key(at.profile[s]);
      atoms.push_back({{"support", report::names(g, at.support)}, {"profile", prof}, {"payoff", at.payoff},
                       {"beta", p.plan_a->beta[l]}});
    }
    out["plan"] = {{"atoms", atoms}, {"mixture_payoff", p.plan_a->mixture_payoff}, {"slack", p.plan_a->slack},
                   {"delta", p.delta}};
  }
  if (p.plan_b) {
    json exits = json::array();
    for (std::size_t l = 0; l < p.plan_b->exits.size(); ++l) {
      const Exit& e = p.plan_b->exits[l];
      exits.push_back({{"state", g.state_names[e.state]},
                       {"profile", g.profile_key(e.profile)},
                       {"companion", g.profile_key(e.companion)},
                       {"deviator", e.deviator},
                       {"leave_value", e.leave_value},
                       {"beta", p.plan_b->beta[l]},
                       {"eta", p.plan_b->eta[l]}});
    }
    out["plan"] = {{"exits", exits},
                   {"expected_leave_value", p.plan_b->expected_leave_value},
                   {"slack", p.plan_b->slack},
                   {"scale", p.plan_b->scale}};
  }
  return out;
}

inline json to_json(const StochasticGame& g, const JointAutomaton& m) {
  json states = json::array();
  for (int q = 0; q < m.size(); ++q) {
    json next = json::object();
    const int s = m.game_state[q];
    for (int a = 0; a < g.num_profiles(); ++a) {
      if (m.output[q][a] <= 0.0) continue;
      json row = json::object();
      for (int t = 0; t < g.num_states(); ++t) {
        if (m.next[q][a][t].empty()) continue;
        json br = json::array();
        for (const Branch& b : m.next[q][a][t]) br.push_back({m.label[b.next], b.prob});
        row[g.state_names[t]] = br;
      }
      next[g.profile_key(a)] = row;
    }
    states.push_back({{"label", m.label[q]},
                      {"state", g.state_names[s]},
                      {"output", report::profile_distribution(g, m.output[q])},
                      {"next", next}});
  }
  json initial = json::object();
  for (int s = 0; s < static_cast<int>(m.initial.size()); ++s) initial[g.state_names[s]] = m.label[m.initial[s]];
  return {{"memory_states", states},
          {"initial", initial},
          {"public_coin", m.public_coin},
          {"product_outputs", outputs_are_product(g, m)}};
}

inline json to_json(const StochasticGame& g, const StationaryCorrelated& tau) {
  json out = json::object();
  for (int s = 0; s < g.num_states(); ++s) out[g.state_names[s]] = report::profile_distribution(g, tau.joint[s]);
  return out;
}

inline json to_json(const StochasticGame& g, const AcceptabilityReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"state", g.state_names[e.state]},
                       {"player", e.player},
                       {"w", e.w},
                       {"payoff", e.payoff},
                       {"margin", e.margin},
                       {"limit", e.limit},
                       {"limit_margin", e.limit_margin},
                       {"lambda0", e.lambda0 >= 0 && e.lambda0 < static_cast<int>(r.grid.size())
                                       ? json(r.grid[e.lambda0])
                                       : (e.lambda0 >= 0 ? json("limit") : json(nullptr))},
                       {"pass", e.pass},
                       {"pass_full_grid", e.pass_full_grid}});
  }
  return {{"grid", r.grid},
          {"subject", r.subject},
          {"pass", r.pass},
          {"pass_full_grid", r.pass_full_grid},
          {"worst_limit_margin", report::number(r.worst_limit_margin)},
          {"worst_grid_margin", report::number(r.worst_grid_margin)},
          {"worst_finest_margin", report::number(r.worst_finest_margin)},
          {"entries", entries}};
}

inline json to_json(const StochasticGame& g, const AverageLimitReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"state", g.state_names[e.state]}, {"player", e.player}, {"w", e.w},
                       {"average", e.average}, {"limit", e.limit}});
  }
  return {{"horizons", r.horizons}, {"average_pass", r.average_pass}, {"limit_pass", r.limit_pass},
          {"entries", entries}};
}

inline json to_json(const StochasticGame& g, const JointAutomaton& m, const IRReport& r) {
  json worst = nullptr;
  if (r.worst_entry >= 0) {
    const IREntry& e = r.entries[r.worst_entry];
    worst = {{"memory", m.label[e.memory]},
             {"state", g.state_names[e.state]},
             {"player", e.player},
             {"action", g.action_names[e.player][e.best_action]},
             {"u_star", e.best_u_star},
             {"continuation", e.continuation},
             {"excess", e.excess}};
  }
  return {{"epsilon", r.epsilon},
          {"worst_excess", report::number(r.worst_excess)},
          {"worst", worst},
          {"pass", r.pass},
          {"pass_relaxed", r.pass_relaxed},
          {"checked", r.entries.size()}};
}

inline json to_json(const StochasticGame& g, const JointAutomaton& m, const SubmartingaleReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"memory", m.label[e.memory]},
                       {"state", g.state_names[e.state]},
                       {"kind", e.kind},
                       {"drift", e.drift},
                       {"stop_mass", e.stop_mass}});
  }
  return {{"min_drift", report::number(r.min_drift)}, {"tolerance", r.tolerance}, {"pass", r.pass},
          {"entries", entries}};
}

inline json to_json(const SizeAudit& a) {
  return {{"joint_size", a.joint_size}, {"per_player", a.per_player}, {"bound", a.bound}, {"within", a.within}};
}

inline json to_json(const SimulationEstimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"replications", e.replications}, {"horizon", e.horizon}};
}

inline json to_json(const StochasticGame& g, const Synthesis& s) {
  json plans = json::array();
  for (const auto& p : s.profile.plans) plans.push_back(to_json(g, s.decomposition, p));
  return {{"uniform_values", report::value_table(g, s.v1)},
          {"decomposition", to_json(g, s.decomposition)},
          {"plans", plans},
          {"complete", s.profile.complete},
          {"errors", s.profile.errors}};
}

}  // namespace accept
