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

// Synthesis of min-max epsilon-acceptable profiles.
//
// Each maximal communicating set C is classified:
//   type A: a mixture of recurrent points inside C pays about v(C), so play
//           cycles through them forever (phases switch at rate delta);
//   type B: a mixture of exits pays about v(C) in continuation value, so
//           play cycles through the exits, each taken with a small tuned
//           probability, until one of them leaves C.
// Transient states play a stationary equilibrium of G(s). The pieces are
// assembled into one joint automaton, and separately into a stationary
// correlated strategy.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "accept/automaton.hpp"
#include "accept/frequencies.hpp"
#include "accept/game.hpp"
#include "accept/markov.hpp"
#include "accept/one_shot.hpp"
#include "accept/structure.hpp"

namespace accept {

// u*_i(s, alpha) = sum_{s'} q(s'|s, alpha) v1_i(s').
struct ContinuationValueTable {
  const StochasticGame* game = nullptr;
  ValueTable v1;

  PayoffVector at(int s, const Distribution& joint) const {
    const Distribution q = extend_transition(*game, s, joint);
    PayoffVector out(game->num_players, 0.0);
    for (int t = 0; t < game->num_states(); ++t) {
      if (q[t] == 0.0) continue;
      for (int i = 0; i < game->num_players; ++i) out[i] += q[t] * v1[i][t];
    }
    return out;
  }
  PayoffVector at(int s, int profile) const { return at(s, point_mass(game->num_profiles(), profile)); }
};

// ---- exits ----------------------------------------------------------------

struct Exit {
  int state = 0;
  int profile = 0;
  double leave_mass = 0.0;  // 1 - q(C | s, a)
  PayoffVector u_star;      // continuation value of the whole transition
  PayoffVector leave_value;  // E[v1(s') | s' outside C]
  int companion = -1;       // a' with q(C | s, a') = 1, one coordinate away
  int deviator = -1;        // the player whose action differs
};

struct ExitList {
  std::vector<Exit> exits;
  double min_exit_mass = 0.0;  // Q_C, zero when there are no exits
};

// Companion of an exit: first (player, action) switch, in lexicographic
// order, that keeps play in C for sure.
inline std::optional<std::pair<int, int>> companion(const StochasticGame& g, const StateSet& c, int s, int a) {
  const auto in = membership(g.num_states(), c);
  const auto idx = g.indexer();
  for (int i = 0; i < g.num_players; ++i) {
    for (int b = 0; b < idx.num_actions(i); ++b) {
      if (b == idx.action(a, i)) continue;
      const int alt = idx.with_action(a, i, b);
      if (g.stays_in(s, alt, in)) return std::make_pair(alt, i);
    }
  }
  return std::nullopt;
}

inline ExitList exits(const StochasticGame& g, const StateSet& c, const ValueTable& v1) {
  const auto in = membership(g.num_states(), c);
  const ContinuationValueTable cv{&g, v1};
  ExitList out;
  for (int s : c) {
    for (int a = 0; a < g.num_profiles(); ++a) {
      const double stay = g.mass_on(s, a, in);
      if (g.stays_in(s, a, in)) continue;
      Exit e;
      e.state = s;
      e.profile = a;
      e.leave_mass = 1.0 - stay;
      e.u_star = cv.at(s, a);
      e.leave_value.assign(g.num_players, 0.0);
      double mass = 0.0;
      for (int t = 0; t < g.num_states(); ++t) {
        if (in[t]) continue;
        const double p = g.transition[s][a][t];
        mass += p;
        for (int i = 0; i < g.num_players; ++i) e.leave_value[i] += p * v1[i][t];
      }
      for (double& w : e.leave_value) w /= mass;
      e.leave_mass = mass;
      if (auto comp = companion(g, c, s, a)) e.companion = comp->first, e.deviator = comp->second;
      out.exits.push_back(std::move(e));
    }
  }
  if (!out.exits.empty()) {
    out.min_exit_mass = 1.0;
    for (const Exit& e : out.exits) out.min_exit_mass = std::min(out.min_exit_mass, e.leave_mass);
  }
  return out;
}

// ---- exit probabilities --------------------------------------------------------

struct EtaSolution {
  std::vector<double> eta;  // per-visit probability of playing the exit profile
  double scale = 0.0;       // per-cycle probability of leaving
};

// Probability that the first departure goes through exit l when exits are
// tried in order, exit l leaving with probability eta_l * leave_mass_l.
inline std::vector<double> first_exit_distribution(const std::vector<double>& eta,
                                                   const std::vector<double>& leave_mass) {
  const std::size_t n = eta.size();
  std::vector<double> out(n);
  double survive = 1.0;
  for (std::size_t l = 0; l < n; ++l) {
    const double e = eta[l] * leave_mass[l];
    out[l] = survive * e;
    survive *= 1.0 - e;
  }
  const double total = 1.0 - survive;
  for (double& w : out) w /= total;
  return out;
}

inline std::vector<double> first_exit_distribution(const std::vector<double>& eta) {
  return first_exit_distribution(eta, std::vector<double>(eta.size(), 1.0));
}

// Closed form: with per-cycle leave probability P, the effective leave
// probabilities are e_l = beta_l P / prod_{m<l}(1 - e_m), which makes
// prod(1 - e) = 1 - P automatically. If some eta_l = e_l / leave_mass_l would
// exceed one, P is lowered by bisection.
inline EtaSolution solve_eta(const std::vector<double>& beta, const std::vector<double>& leave_mass,
                             double scale = 0.1) {
  if (beta.empty()) throw std::invalid_argument("solve_eta: empty beta");
  for (double b : beta) {
    if (!(b > 0.0)) throw std::invalid_argument("solve_eta: beta must be strictly positive");
  }
  if (!(scale > 0.0 && scale < 1.0)) throw std::invalid_argument("solve_eta: scale must lie in (0, 1)");
  auto attempt = [&](double p, std::vector<double>& eta) {
    eta.assign(beta.size(), 0.0);
    double survive = 1.0;
    for (std::size_t l = 0; l < beta.size(); ++l) {
      const double e = beta[l] * p / survive;
      eta[l] = e / leave_mass[l];
      if (eta[l] > 1.0) return false;
      survive *= 1.0 - e;
    }
    return true;
  };
  EtaSolution sol;
  if (attempt(scale, sol.eta)) {
    sol.scale = scale;
    return sol;
  }
  double lo = 0.0, hi = scale;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    std::vector<double> tmp;
    (attempt(mid, tmp) ? lo : hi) = mid;
  }
  attempt(lo, sol.eta);
  sol.scale = lo;
  return sol;
}

inline EtaSolution solve_eta(const std::vector<double>& beta, double scale = 0.1) {
  return solve_eta(beta, std::vector<double>(beta.size(), 1.0), scale);
}

// ---- plans -----------------------------------------------------------------

struct ExitPlan {
  PayoffVector target;  // c
  std::vector<Exit> exits;
  std::vector<double> beta;
  std::vector<double> eta;
  double scale = 0.0;
  double slack = 0.0;  // min_i (sum beta leave_value - c)
  PayoffVector expected_leave_value;
};

// Exit LP over companion-admissible exits.
inline std::optional<ExitPlan> type_b_feasibility(const ExitList& list, const PayoffVector& target,
                                                  double min_slack, int max_atoms, double* best_slack = nullptr,
                                                  double scale = 0.1) {
  std::vector<const Exit*> usable;
  std::vector<PayoffVector> points;
  for (const Exit& e : list.exits) {
    if (e.companion < 0) continue;
    usable.push_back(&e);
    points.push_back(e.leave_value);
  }
  MixturePlan mp = max_slack_mixture(points, target);
  if (best_slack) *best_slack = mp.solved ? mp.slack : -std::numeric_limits<double>::infinity();
  if (!mp.solved || mp.slack < min_slack - 1e-12) return std::nullopt;
  mp = reduce_atoms(points, target, mp, max_atoms, min_slack);
  ExitPlan plan;
  plan.target = target;
  plan.slack = mp.slack;
  plan.expected_leave_value = mp.mixture;
  plan.beta = mp.weights;
  std::vector<double> mass;
  for (int k : mp.atoms) plan.exits.push_back(*usable[k]), mass.push_back(usable[k]->leave_mass);
  const EtaSolution eta = solve_eta(plan.beta, mass, scale);
  plan.eta = eta.eta;
  plan.scale = eta.scale;
  return plan;
}

enum class SetType { kA, kB, kUnclassifiable };

inline const char* to_string(SetType t) {
  switch (t) {
    case SetType::kA:
      return "A";
    case SetType::kB:
      return "B";
    default:
      return "unclassifiable";
  }
}

struct BuildOptions {
  double epsilon = 0.05;
  double exit_scale = 0.1;    // P in solve_eta
  double delta_floor = 1e-6;  // type A phase switching
  double theta_floor = 1e-8;  // correlated type B exit weight
  double fixed_delta = -1.0;  // > 0 skips the type A search
  int max_atoms = -1;         // default |I|
};

struct SetPlan {
  int set_index = 0;
  SetType type = SetType::kUnclassifiable;
  double slack_a = 0.0;  // best type A slack against v(C)
  double slack_b = 0.0;  // best type B slack against v(C)
  std::optional<TypeAPlan> plan_a;
  std::optional<ExitPlan> plan_b;
  double delta = 0.0;  // chosen phase-switch rate (type A)
  int num_points = 0;
  int num_exits = 0;
  double min_exit_mass = 0.0;
  std::string diagnostics;
};

// Type A when the best mixture of recurrent points falls short of v(C) by at
// most eps/2 (the rest of the budget goes to the phase switching); else
// type B when the best exit mixture falls short by at most eps.
inline SetPlan classify_set(const StochasticGame& g, const CommunicatingSet& c, int index, const ValueTable& v1,
                            const BuildOptions& o) {
  SetPlan sp;
  sp.set_index = index;
  const int max_atoms = o.max_atoms > 0 ? o.max_atoms : g.num_players;
  const double a_threshold = -0.5 * o.epsilon;
  const double b_threshold = -o.epsilon;
  std::vector<RecurrentPoint> points;
  try {
    points = enumerate_recurrent_points(g, c.states);
  } catch (const EnumerationTooLarge& e) {
    sp.diagnostics = e.what();
  }
  sp.num_points = static_cast<int>(points.size());
  std::vector<PayoffVector> pay;
  for (const auto& p : points) pay.push_back(p.payoff);
  MixturePlan mp = max_slack_mixture(pay, c.value);
  sp.slack_a = mp.solved ? mp.slack : -std::numeric_limits<double>::infinity();
  const ExitList ex = exits(g, c.states, v1);
  sp.num_exits = static_cast<int>(ex.exits.size());
  sp.min_exit_mass = ex.min_exit_mass;
  std::optional<ExitPlan> pb = type_b_feasibility(ex, c.value, b_threshold, max_atoms, &sp.slack_b, o.exit_scale);
  if (mp.solved && mp.slack >= a_threshold) {
    mp = reduce_atoms(pay, c.value, mp, max_atoms, a_threshold);
    TypeAPlan plan;
    plan.target = c.value;
    for (int k : mp.atoms) plan.atoms.push_back(points[k]);
    plan.beta = mp.weights;
    plan.mixture_payoff = mp.mixture;
    plan.slack = mp.slack;
    sp.plan_a = std::move(plan);
    sp.type = SetType::kA;
  } else if (pb) {
    sp.plan_b = std::move(pb);
    sp.type = SetType::kB;
  } else {
    sp.type = SetType::kUnclassifiable;
    sp.diagnostics += (sp.diagnostics.empty() ? "" : "; ") + std::string("type A slack ") +
                      std::to_string(sp.slack_a) + ", type B slack " + std::to_string(sp.slack_b);
  }
  return sp;
}

// ---- automata ------------------------------------------------------------------


// One block of the global automaton per communicating set, one memory state
// per transient state.
struct SynthesizedProfile {
  JointAutomaton automaton;
  std::vector<int> block_of_memory;  // set index, or -1 for transient memory
  std::vector<int> phase_of_memory;  // phase l, or -1
  std::vector<int> entry;            // entry memory state per game state
  std::vector<SetPlan> plans;
  bool complete = false;             // every set classified and every transient state covered
  std::vector<std::string> errors;
};

namespace internal {

inline Distribution product_joint(const StochasticGame& g, const std::vector<Distribution>& mixed) {
  return product_action(g.indexer(), mixed);
}

// Travel profile toward target D inside C.
inline PurePlan travel_to(const StochasticGame& g, const StateSet& c, const StateSet& d) {
  const TravelStrategy tr = travel_strategy(g, c, d);
  if (!tr.complete) throw std::runtime_error("travel strategy does not cover the set");
  return tr.profile;
}

}  // namespace internal

class ProfileAssembler {
 public:
  ProfileAssembler(const StochasticGame& g, const Decomposition& d, std::vector<SetPlan> plans)
      : g_(g), d_(d) {
    out_.plans = std::move(plans);
  }

  // Builds the global automaton. Sets without a plan (or unclassifiable) and
  // uncovered transient states are reported as errors; their states get stub
  // memory states that play the first profile.
  SynthesizedProfile build(const BuildOptions& o) {
    const int n = g_.num_states();
    const int na = g_.num_profiles();
    JointAutomaton& m = out_.automaton;
    out_.entry.assign(n, -1);
    // Allocate memory states: transient first, then sets in order.
    std::vector<int> tq(n, -1);
    for (int s : d_.transient) {
      tq[s] = m.add_state(s, "T:" + g_.state_names[s], {}, na, n);
      out_.block_of_memory.push_back(-1);
      out_.phase_of_memory.push_back(-1);
      out_.entry[s] = tq[s];
    }
    base_.assign(d_.sets.size(), 0);
    phases_.assign(d_.sets.size(), 1);
    pos_.assign(n, -1);
    for (std::size_t k = 0; k < d_.sets.size(); ++k) {
      const auto& c = d_.sets[k].states;
      for (std::size_t p = 0; p < c.size(); ++p) pos_[c[p]] = static_cast<int>(p);
      const SetPlan& sp = out_.plans[k];
      int L = 1;
      if (sp.type == SetType::kA) L = static_cast<int>(sp.plan_a->atoms.size());
      if (sp.type == SetType::kB) L = static_cast<int>(sp.plan_b->exits.size());
      phases_[k] = L;
      base_[k] = m.size();
      for (int l = 0; l < L; ++l) {
        for (int s : c) {
          m.add_state(s, "C" + std::to_string(k) + "." + std::to_string(l) + ":" + g_.state_names[s], {}, na, n);
          out_.block_of_memory.push_back(static_cast<int>(k));
          out_.phase_of_memory.push_back(l);
        }
      }
      for (int s : c) out_.entry[s] = base_[k] + pos_[s];
    }
    m.initial = out_.entry;
    out_.complete = true;
    for (int s : d_.transient) fill_transient(s, tq[s]);
    for (std::size_t k = 0; k < d_.sets.size(); ++k) {
      const SetPlan& sp = out_.plans[k];
      switch (sp.type) {
        case SetType::kA:
          fill_type_a(static_cast<int>(k), o);
          break;
        case SetType::kB:
          fill_type_b(static_cast<int>(k));
          break;
        default:
          out_.complete = false;
          out_.errors.push_back("set " + std::to_string(k) + " is unclassifiable: " + sp.diagnostics);
          fill_stub(static_cast<int>(k));
      }
    }
    return std::move(out_);
  }

 private:
  int at(int k, int l, int s) const {
    return base_[k] + l * static_cast<int>(d_.sets[k].states.size()) + pos_[s];
  }

  void dispatch_row(int q, int a, const std::vector<bool>& in, const std::function<std::vector<Branch>(int)>& inside) {
    auto& row = out_.automaton.next[q][a];
    const int s = out_.automaton.game_state[q];
    for (int t = 0; t < g_.num_states(); ++t) {
      if (g_.transition[s][a][t] <= 0.0) continue;
      row[t] = (!in.empty() && in[t]) ? inside(t) : std::vector<Branch>{Branch{out_.entry[t], 1.0}};
    }
  }

  void fill_transient(int s, int q) {
    JointAutomaton& m = out_.automaton;
    if (d_.transient_mixed[s].empty()) {
      out_.complete = false;
      out_.errors.push_back("no transient equilibrium at state " + g_.state_names[s]);
      m.output[q] = point_mass(g_.num_profiles(), 0);
    } else {
      m.output[q] = internal::product_joint(g_, d_.transient_mixed[s]);
    }
    for (int a = 0; a < g_.num_profiles(); ++a) dispatch_row(q, a, {}, nullptr);
  }

  void fill_stub(int k) {
    const auto& c = d_.sets[k].states;
    const auto in = membership(g_.num_states(), c);
    for (int s : c) {
      const int q = at(k, 0, s);
      out_.automaton.output[q] = point_mass(g_.num_profiles(), 0);
      for (int a = 0; a < g_.num_profiles(); ++a) {
        dispatch_row(q, a, in, [&](int t) { return std::vector<Branch>{Branch{at(k, 0, t), 1.0}}; });
      }
    }
  }

  // Phase l: travel to D^(l), then play x^(l) and advance with probability
  // delta / beta^(l) per stage.
  void fill_type_a_with(int k, double delta) {
    SetPlan& sp = out_.plans[k];
    const TypeAPlan& plan = *sp.plan_a;
    const auto& c = d_.sets[k].states;
    const auto in = membership(g_.num_states(), c);
    const int L = phases_[k];
    JointAutomaton& m = out_.automaton;
    for (int l = 0; l < L; ++l) {
      const StateSet& dset = plan.atoms[l].support;
      const auto in_d = membership(g_.num_states(), dset);
      const PurePlan travel = internal::travel_to(g_, c, dset);
      const double advance = L > 1 ? std::min(1.0, delta / plan.beta[l]) : 0.0;
      for (int s : c) {
        const int q = at(k, l, s);
        const int prescribed = in_d[s] ? plan.atoms[l].profile[s] : travel[s];
        m.output[q] = point_mass(g_.num_profiles(), prescribed);
        for (int a = 0; a < g_.num_profiles(); ++a) {
          dispatch_row(q, a, in, [&](int t) {
            if (!in_d[s] || advance == 0.0) return std::vector<Branch>{Branch{at(k, l, t), 1.0}};
            m.public_coin = true;
            return std::vector<Branch>{Branch{at(k, (l + 1) % L, t), advance}, Branch{at(k, l, t), 1.0 - advance}};
          });
        }
      }
    }
  }

  void fill_type_a(int k, const BuildOptions& o) {
    SetPlan& sp = out_.plans[k];
    const TypeAPlan& plan = *sp.plan_a;
    const auto& c = d_.sets[k].states;
    if (phases_[k] == 1) {
      fill_type_a_with(k, 0.0);
      sp.delta = 0.0;
      return;
    }
    if (o.fixed_delta > 0.0) {
      fill_type_a_with(k, o.fixed_delta);
      sp.delta = o.fixed_delta;
      return;
    }
    // Limit payoff within eps/4 of the mixture the plan aims at (which is
    // itself at least v(C) + t*).
    PayoffVector floor_payoff = plan.mixture_payoff;
    for (double& x : floor_payoff) x -= 0.25 * o.epsilon;
    double delta = 0.5 * *std::min_element(plan.beta.begin(), plan.beta.end());
    for (;;) {
      fill_type_a_with(k, delta);
      const PayoffVector lim = block_limit_payoff(k, at(k, 0, c[0]));
      bool ok = true;
      for (int i = 0; i < g_.num_players; ++i) ok = ok && lim[i] >= floor_payoff[i];
      if (ok) break;
      if (delta * 0.5 < o.delta_floor) {
        out_.complete = false;
        out_.errors.push_back("set " + std::to_string(k) + ": phase-switch rate fell below the floor");
        break;
      }
      delta *= 0.5;
    }
    sp.delta = delta;
  }

  // Limit payoff of play started at memory q, restricted to set k's block.
  PayoffVector block_limit_payoff(int k, int q0) const {
    const JointAutomaton& m = out_.automaton;
    const int lo = base_[k];
    const int hi = lo + phases_[k] * static_cast<int>(d_.sets[k].states.size());
    const int nb = hi - lo;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(nb, g_.num_players);
    for (int q = lo; q < hi; ++q) {
      const int s = m.game_state[q];
      for (int a = 0; a < g_.num_profiles(); ++a) {
        const double w = m.output[q][a];
        if (w <= 0.0) continue;
        for (int i = 0; i < g_.num_players; ++i) r(q - lo, i) += w * g_.payoff[s][a][i];
        for (int t = 0; t < g_.num_states(); ++t) {
          if (g_.transition[s][a][t] <= 0.0) continue;
          for (const Branch& b : m.next[q][a][t]) p(q - lo, b.next - lo) += w * g_.transition[s][a][t] * b.prob;
        }
      }
    }
    const auto ls = markov::limit_structure(p);
    PayoffVector out(g_.num_players, 0.0);
    for (int j = 0; j < nb; ++j) {
      for (int i = 0; i < g_.num_players; ++i) out[i] += ls.limit(q0 - lo, j) * r(j, i);
    }
    return out;
  }

  // Phase l: travel to s^(l); there play (1 - eta) a' + eta a; advance the
  // phase whenever play stays in C; leaving C re-dispatches.
  void fill_type_b(int k) {
    const ExitPlan& plan = *out_.plans[k].plan_b;
    const auto& c = d_.sets[k].states;
    const auto in = membership(g_.num_states(), c);
    const int L = phases_[k];
    JointAutomaton& m = out_.automaton;
    for (int l = 0; l < L; ++l) {
      const Exit& ex = plan.exits[l];
      const PurePlan travel = internal::travel_to(g_, c, {ex.state});
      for (int s : c) {
        const int q = at(k, l, s);
        if (s == ex.state) {
          Distribution z(g_.num_profiles(), 0.0);
          z[ex.companion] += 1.0 - plan.eta[l];
          z[ex.profile] += plan.eta[l];
          m.output[q] = z;
          for (int a = 0; a < g_.num_profiles(); ++a) {
            dispatch_row(q, a, in, [&](int t) { return std::vector<Branch>{Branch{at(k, (l + 1) % L, t), 1.0}}; });
          }
        } else {
          m.output[q] = point_mass(g_.num_profiles(), travel[s]);
          for (int a = 0; a < g_.num_profiles(); ++a) {
            dispatch_row(q, a, in, [&](int t) { return std::vector<Branch>{Branch{at(k, l, t), 1.0}}; });
          }
        }
      }
    }
  }

  const StochasticGame& g_;
  const Decomposition& d_;
  SynthesizedProfile out_;
  std::vector<int> base_, phases_, pos_;
};

inline std::vector<SetPlan> classify_all(const StochasticGame& g, const Decomposition& d, const ValueTable& v1,
                                         const BuildOptions& o) {
  std::vector<SetPlan> plans;
  for (std::size_t k = 0; k < d.sets.size(); ++k) plans.push_back(classify_set(g, d.sets[k], static_cast<int>(k), v1, o));
  return plans;
}

inline SynthesizedProfile assemble_profile(const StochasticGame& g, const Decomposition& d,
                                           std::vector<SetPlan> plans, const BuildOptions& o) {
  SynthesizedProfile sp = ProfileAssembler(g, d, std::move(plans)).build(o);
  for (const std::string& w : d.warnings) sp.errors.push_back("decomposition: " + w);
  return sp;
}

// One set on its own: states outside C are treated as transient and play
// uniformly, which is enough to study the block (exit laws, frequencies).
inline SynthesizedProfile single_set_profile(const StochasticGame& g, const CommunicatingSet& cs, SetPlan plan,
                                             const BuildOptions& o) {
  Decomposition d;
  const int n = g.num_states();
  d.set_of.assign(n, -1);
  d.transient_choice.assign(n, -1);
  d.transient_mixed.assign(n, {});
  for (int s : cs.states) d.set_of[s] = 0;
  for (int s = 0; s < n; ++s) {
    if (d.set_of[s] >= 0) continue;
    d.transient.push_back(s);
    for (int i = 0; i < g.num_players; ++i) {
      const int k = g.indexer().num_actions(i);
      d.transient_mixed[s].push_back(Distribution(k, 1.0 / k));
    }
  }
  d.sets.push_back(cs);
  plan.set_index = 0;
  return ProfileAssembler(g, d, {std::move(plan)}).build(o);
}

inline SynthesizedProfile build_type_a_automaton(const StochasticGame& g, const CommunicatingSet& cs,
                                                 const TypeAPlan& plan, double delta) {
  SetPlan sp;
  sp.type = SetType::kA;
  sp.plan_a = plan;
  BuildOptions o;
  o.fixed_delta = delta;
  return single_set_profile(g, cs, std::move(sp), o);
}

inline SynthesizedProfile build_type_b_automaton(const StochasticGame& g, const CommunicatingSet& cs,
                                                 const ExitPlan& plan) {
  SetPlan sp;
  sp.type = SetType::kB;
  sp.plan_b = plan;
  return single_set_profile(g, cs, std::move(sp), BuildOptions{});
}

// Communicating-set record for an arbitrary C (travel witnesses filled in).
inline CommunicatingSet make_communicating_set(const StochasticGame& g, const StateSet& c, const ValueTable& v1) {
  CommunicatingSet cs;
  cs.states = c;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    double hi = v1[i][c[0]];
    for (int s : c) hi = std::max(hi, v1[i][s]);
    cs.value.push_back(hi);
  }
  for (int t : c) cs.travel.push_back(travel_strategy(g, c, {t}).profile);
  return cs;
}

// ---- stationary correlated variant -------------------------------------------------

struct CorrelatedBuild {
  StationaryCorrelated tau;
  std::vector<double> delta;  // per set: travel weight (A) or exit scale (B)
  bool complete = false;
  std::vector<std::string> errors;
};

namespace internal {

// Uniform mixture of the travel profiles toward each state of C.
inline Distribution travel_mixture(const StochasticGame& g, const CommunicatingSet& c, int s) {
  Distribution z(g.num_profiles(), 0.0);
  int count = 0;
  for (std::size_t k = 0; k < c.states.size(); ++k) {
    if (c.states[k] == s) continue;
    z[c.travel[k][s]] += 1.0;
    ++count;
  }
  if (count == 0) {
    const auto keep = preserving_profiles(g, s, membership(g.num_states(), c.states));
    z[keep.front()] = 1.0;
    count = 1;
  }
  for (double& w : z) w /= count;
  return z;
}

inline Eigen::MatrixXd restricted_chain(const StochasticGame& g, const StateSet& c,
                                        const std::vector<Distribution>& tau_on_c) {
  const int k = static_cast<int>(c.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
  for (int r = 0; r < k; ++r) {
    const Distribution q = extend_transition(g, c[r], tau_on_c[r]);
    for (int j = 0; j < k; ++j) p(r, j) = q[c[j]];
  }
  return p;
}

}  // namespace internal

inline CorrelatedBuild build_correlated_stationary(const StochasticGame& g, const Decomposition& d,
                                                   const std::vector<SetPlan>& plans, const ValueTable& v1,
                                                   const BuildOptions& o) {
  CorrelatedBuild out;
  const int n = g.num_states();
  out.tau.joint.assign(n, point_mass(g.num_profiles(), 0));
  out.delta.assign(d.sets.size(), 0.0);
  out.complete = true;
  for (int s : d.transient) {
    if (d.transient_mixed[s].empty()) {
      out.complete = false;
      out.errors.push_back("no transient equilibrium at state " + g.state_names[s]);
      continue;
    }
    out.tau.joint[s] = internal::product_joint(g, d.transient_mixed[s]);
  }
  for (std::size_t k = 0; k < d.sets.size(); ++k) {
    const CommunicatingSet& cs = d.sets[k];
    const StateSet& c = cs.states;
    const int m = static_cast<int>(c.size());
    std::vector<Distribution> z;
    for (int s : c) z.push_back(internal::travel_mixture(g, cs, s));
    const SetPlan& sp = plans[k];
    if (sp.type == SetType::kA) {
      const TypeAPlan& plan = *sp.plan_a;
      // Target frequency rho* = sum beta rho^(l); tau0 = rho*(.|s) on its
      // support, travel elsewhere.
      std::vector<Distribution> rho(m, Distribution(g.num_profiles(), 0.0));
      std::vector<double> mass(m, 0.0);
      for (std::size_t l = 0; l < plan.atoms.size(); ++l) {
        for (int r = 0; r < m; ++r) {
          for (int a = 0; a < g.num_profiles(); ++a) {
            const double w = plan.beta[l] * plan.atoms[l].rho.rho[c[r]][a];
            rho[r][a] += w;
            mass[r] += w;
          }
        }
      }
      std::vector<Distribution> tau0(m);
      for (int r = 0; r < m; ++r) {
        if (mass[r] > 1e-15) {
          tau0[r] = rho[r];
          for (double& w : tau0[r]) w /= mass[r];
        } else {
          tau0[r] = z[r];
        }
      }
      const auto classes = markov::recurrent_classes(internal::restricted_chain(g, c, tau0));
      PayoffVector floor_payoff = plan.mixture_payoff;
      for (double& x : floor_payoff) x -= 0.25 * o.epsilon;
      auto limit_of = [&](const std::vector<Distribution>& tau_c) {
        const auto ls = markov::limit_structure(internal::restricted_chain(g, c, tau_c));
        PayoffVector lim(g.num_players, 0.0);
        for (int r = 0; r < m; ++r) {
          const PayoffVector u = extend_payoff(g, c[r], tau_c[r]);
          for (int i = 0; i < g.num_players; ++i) lim[i] += ls.limit(0, r) * u[i];
        }
        return lim;
      };
      if (classes.size() == 1) {
        for (int r = 0; r < m; ++r) out.tau.joint[c[r]] = tau0[r];
        continue;
      }
      // Several classes: blend in travel at rate delta * kappa_K, with kappa
      // balanced so every class keeps its target mass w_K = rho*(K).
      std::vector<int> class_of(m, -1);
      std::vector<double> w(classes.size(), 0.0);
      for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        for (int r : classes[ci]) class_of[r] = static_cast<int>(ci), w[ci] += mass[r];
      }
      double delta = 0.5;
      bool ok = false;
      std::vector<Distribution> tau_c(m);
      for (; delta >= o.delta_floor; delta *= 0.5) {
        std::vector<double> kappa(classes.size(), 1.0);
        for (int it = 0; it < 60; ++it) {
          for (int r = 0; r < m; ++r) {
            tau_c[r] = tau0[r];
            if (class_of[r] < 0) continue;
            const double x = delta * kappa[class_of[r]];
            for (int a = 0; a < g.num_profiles(); ++a) tau_c[r][a] = (1.0 - x) * tau0[r][a] + x * z[r][a];
          }
          const auto ls = markov::limit_structure(internal::restricted_chain(g, c, tau_c));
          std::vector<double> f(classes.size(), 0.0);
          for (int r = 0; r < m; ++r) {
            if (class_of[r] >= 0) f[class_of[r]] += ls.limit(0, r);
          }
          double worst = 0.0, top = 0.0;
          for (std::size_t ci = 0; ci < classes.size(); ++ci) {
            if (w[ci] <= 0.0) continue;
            worst = std::max(worst, std::abs(f[ci] / w[ci] - 1.0));
            kappa[ci] *= std::max(f[ci], 1e-300) / w[ci];
          }
          for (double kv : kappa) top = std::max(top, kv);
          for (double& kv : kappa) kv /= top;
          if (worst < 1e-10) break;
        }
        const PayoffVector lim = limit_of(tau_c);
        ok = true;
        for (int i = 0; i < g.num_players; ++i) ok = ok && lim[i] >= floor_payoff[i];
        if (ok) break;
      }
      if (!ok) {
        out.complete = false;
        out.errors.push_back("set " + std::to_string(k) + ": correlated travel weight fell below the floor");
      }
      out.delta[k] = delta;
      for (int r = 0; r < m; ++r) out.tau.joint[c[r]] = tau_c[r];
    } else if (sp.type == SetType::kB) {
      const ExitPlan& plan = *sp.plan_b;
      // Weights r_l = beta_l / (pi_z(s_l) (1 - q(C|s_l,a_l))) reproduce beta as
      // the exit weights vanish; the scale shrinks until every entry state's
      // expected exit value clears the plan's slack.
      const auto ls = markov::limit_structure(internal::restricted_chain(g, c, z));
      std::vector<int> pos(n, -1);
      for (int r = 0; r < m; ++r) pos[c[r]] = r;
      std::vector<double> rate(plan.exits.size());
      std::vector<double> per_state(m, 0.0);
      for (std::size_t l = 0; l < plan.exits.size(); ++l) {
        const int r = pos[plan.exits[l].state];
        rate[l] = plan.beta[l] / (ls.limit(0, r) * plan.exits[l].leave_mass);
        per_state[r] += rate[l];
      }
      const double top = *std::max_element(per_state.begin(), per_state.end());
      for (double& x : rate) x /= top;
      const double need = std::min(plan.slack, 0.0) - 1e-7;
      double scale = 0.5;
      bool ok = false;
      std::vector<Distribution> tau_c(m);
      for (; scale >= o.theta_floor; scale *= 0.5) {
        tau_c = z;
        for (int r = 0; r < m; ++r) {
          double total = 0.0;
          for (std::size_t l = 0; l < plan.exits.size(); ++l) {
            if (pos[plan.exits[l].state] == r) total += scale * rate[l];
          }
          for (double& x : tau_c[r]) x *= 1.0 - total;
        }
        for (std::size_t l = 0; l < plan.exits.size(); ++l) {
          tau_c[pos[plan.exits[l].state]][plan.exits[l].profile] += scale * rate[l];
        }
        // Expected v1 on leaving C from each entry state.
        std::vector<Distribution> full(n);
        for (int s = 0; s < n; ++s) full[s] = point_mass(g.num_profiles(), 0);
        StationaryCorrelated probe{full};
        for (int r = 0; r < m; ++r) probe.joint[c[r]] = tau_c[r];
        const auto chain = induced_chain(g, probe).transition;
        std::vector<bool> stop(n, true);
        for (int s : c) stop[s] = false;
        const Eigen::MatrixXd h = markov::first_stop_distribution(chain, stop);
        ok = true;
        for (int s : c) {
          for (int i = 0; i < g.num_players; ++i) {
            double ev = 0.0, total = 0.0;
            for (int t = 0; t < n; ++t) ev += h(s, t) * v1[i][t], total += h(s, t);
            ok = ok && total > 1.0 - 1e-9 && ev - cs.value[i] >= need;
          }
        }
        if (ok) break;
      }
      if (!ok) {
        out.complete = false;
        out.errors.push_back("set " + std::to_string(k) + ": correlated exit weight fell below the floor");
      }
      out.delta[k] = scale;
      for (int r = 0; r < m; ++r) out.tau.joint[c[r]] = tau_c[r];
    } else {
      out.complete = false;
      out.errors.push_back("set " + std::to_string(k) + " is unclassifiable");
      for (int r = 0; r < m; ++r) out.tau.joint[c[r]] = z[r];
    }
  }
  return out;
}

}  // namespace accept
