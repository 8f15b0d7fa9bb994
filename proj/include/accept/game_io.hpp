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

// JSON game files.
//
//   {
//     "players": 2,
//     "states": ["s0", "win"],
//     "actions": [["T", "B"], ["L", "R"]],
//     "payoffs": {"s0": {"T/L": [1, 0], ...}, ...},
//     "transitions": {"s0": {"T/L": {"s0": 1}, ...}, ...},
//     "payoff_bound": 2          (optional, default 1)
//   }
//
// Profile keys join action names with "/" in player order. Transition entries
// that are not listed are zero. Every (state, profile) pair needs a payoff.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "accept/game.hpp"
#include "json.hpp"

namespace accept {

class GameFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline StochasticGame game_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& where, const std::string& what) {
    throw GameFormatError(where + ": " + what);
  };
  StochasticGame g;
  try {
    if (!j.is_object()) fail("$", "game must be a JSON object");
    for (const char* key : {"players", "states", "actions", "payoffs", "transitions"}) {
      if (!j.contains(key)) fail("$", std::string("missing field '") + key + "'");
    }
    g.num_players = j.at("players").get<int>();
    g.state_names = j.at("states").get<std::vector<std::string>>();
    g.action_names = j.at("actions").get<std::vector<std::vector<std::string>>>();
    if (j.contains("payoff_bound")) g.payoff_bound = j.at("payoff_bound").get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail("$", e.what());
  }
  if (g.num_players <= 0) fail("$.players", "must be positive");
  if (g.state_names.empty()) fail("$.states", "must be nonempty");
  if (static_cast<int>(g.action_names.size()) != g.num_players) {
    fail("$.actions", "expected one action list per player");
  }
  for (int i = 0; i < g.num_players; ++i) {
    if (g.action_names[i].empty()) fail("$.actions[" + std::to_string(i) + "]", "empty action list");
  }
  std::map<std::string, int> state_index;
  for (int s = 0; s < g.num_states(); ++s) {
    if (!state_index.emplace(g.state_names[s], s).second) {
      fail("$.states", "duplicate state '" + g.state_names[s] + "'");
    }
  }
  const int na = g.indexer().num_profiles();
  std::map<std::string, int> profile_index;
  for (int a = 0; a < na; ++a) profile_index[g.profile_key(a)] = a;

  g.payoff.assign(g.num_states(), std::vector<PayoffVector>(na));
  g.transition.assign(g.num_states(), std::vector<Distribution>(na, Distribution(g.num_states(), 0.0)));
  const auto& payoffs = j.at("payoffs");
  const auto& transitions = j.at("transitions");
  if (!payoffs.is_object()) fail("$.payoffs", "must be an object");
  if (!transitions.is_object()) fail("$.transitions", "must be an object");
  for (auto it = payoffs.begin(); it != payoffs.end(); ++it) {
    if (!state_index.count(it.key())) fail("$.payoffs", "unknown state '" + it.key() + "'");
  }
  for (auto it = transitions.begin(); it != transitions.end(); ++it) {
    if (!state_index.count(it.key())) fail("$.transitions", "unknown state '" + it.key() + "'");
  }
  for (int s = 0; s < g.num_states(); ++s) {
    const std::string& sn = g.state_names[s];
    const std::string pw = "$.payoffs." + sn;
    if (!payoffs.contains(sn) || !payoffs.at(sn).is_object()) fail(pw, "missing payoff table");
    const auto& ps = payoffs.at(sn);
    for (auto it = ps.begin(); it != ps.end(); ++it) {
      auto found = profile_index.find(it.key());
      if (found == profile_index.end()) fail(pw, "unknown action profile '" + it.key() + "'");
      try {
        g.payoff[s][found->second] = it.value().get<std::vector<double>>();
      } catch (const nlohmann::json::exception&) {
        fail(pw + "." + it.key(), "payoff must be a list of numbers");
      }
      if (static_cast<int>(g.payoff[s][found->second].size()) != g.num_players) {
        fail(pw + "." + it.key(), "payoff must have one entry per player");
      }
    }
    for (int a = 0; a < na; ++a) {
      if (g.payoff[s][a].empty()) fail(pw, "missing action profile '" + g.profile_key(a) + "'");
    }
    const std::string tw = "$.transitions." + sn;
    if (!transitions.contains(sn)) continue;
    const auto& ts = transitions.at(sn);
    if (!ts.is_object()) fail(tw, "must be an object");
    for (auto it = ts.begin(); it != ts.end(); ++it) {
      auto found = profile_index.find(it.key());
      if (found == profile_index.end()) fail(tw, "unknown action profile '" + it.key() + "'");
      if (!it.value().is_object()) fail(tw + "." + it.key(), "must map states to probabilities");
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
        auto target = state_index.find(jt.key());
        if (target == state_index.end()) {
          fail(tw + "." + it.key(), "unknown state '" + jt.key() + "'");
        }
        if (!jt.value().is_number()) fail(tw + "." + it.key() + "." + jt.key(), "not a number");
        g.transition[s][found->second][target->second] = jt.value().get<double>();
      }
    }
  }
  return g;
}

inline nlohmann::json game_to_json(const StochasticGame& g) {
  nlohmann::json j;
  j["players"] = g.num_players;
  j["states"] = g.state_names;
  j["actions"] = g.action_names;
  if (g.payoff_bound != 1.0) j["payoff_bound"] = g.payoff_bound;
  nlohmann::json payoffs = nlohmann::json::object();
  nlohmann::json transitions = nlohmann::json::object();
  for (int s = 0; s < g.num_states(); ++s) {
    for (int a = 0; a < g.num_profiles(); ++a) {
      const std::string key = g.profile_key(a);
      payoffs[g.state_names[s]][key] = g.payoff[s][a];
      nlohmann::json row = nlohmann::json::object();
      for (int t = 0; t < g.num_states(); ++t) {
        if (g.transition[s][a][t] != 0.0) row[g.state_names[t]] = g.transition[s][a][t];
      }
      transitions[g.state_names[s]][key] = row;
    }
  }
  j["payoffs"] = payoffs;
  j["transitions"] = transitions;
  return j;
}

inline StochasticGame load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GameFormatError(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw GameFormatError(path + ": " + e.what());
  }
  return game_from_json(j);
}

}  // namespace accept
