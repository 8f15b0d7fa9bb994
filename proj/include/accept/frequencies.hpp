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

// State-action frequencies, long-run payoffs, the recurrent points of a set C
// and the convex-dominance LP shared by the type A and type B tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "accept/game.hpp"
#include "accept/lp.hpp"
#include "accept/markov.hpp"
#include "accept/structure.hpp"

namespace accept {

// rho[s][a]; sums to one.
struct FrequencyVector {
  std::vector<Distribution> rho;

  double total() const {
    double t = 0.0;
    for (const auto& row : rho)
      for (double w : row) t += w;
    return t;
  }
  Distribution state_marginal() const {
    Distribution m;
    for (const auto& row : rho) {
      double t = 0.0;
      for (double w : row) t += w;
      m.push_back(t);
    }
    return m;
  }
};

// Cesaro limit of the state-action occupation: absorption-weighted mixture of
// the stationary distributions of the recurrent classes.
inline FrequencyVector stationary_frequency(const StochasticGame& g, const StationaryCorrelated& x, int s1) {
  const auto chain = induced_chain(g, x);
  const auto ls = markov::limit_structure(chain.transition);
  FrequencyVector f;
  f.rho.assign(g.num_states(), Distribution(g.num_profiles(), 0.0));
  for (int s = 0; s < g.num_states(); ++s) {
    const double w = ls.limit(s1, s);
    if (w <= 0.0) continue;
    for (int a = 0; a < g.num_profiles(); ++a) f.rho[s][a] = w * x.joint[s][a];
  }
  return f;
}

inline FrequencyVector stationary_frequency(const StochasticGame& g, const StationaryProfile& x, int s1) {
  return stationary_frequency(g, to_correlated(g, x), s1);
}

inline PayoffVector payoff_of_frequency(const StochasticGame& g, const FrequencyVector& f) {
  PayoffVector out(g.num_players, 0.0);
  for (int s = 0; s < g.num_states(); ++s) {
    for (int a = 0; a < g.num_profiles(); ++a) {
      if (f.rho[s][a] == 0.0) continue;
      for (int i = 0; i < g.num_players; ++i) out[i] += f.rho[s][a] * g.payoff[s][a][i];
    }
  }
  return out;
}

// A pure stationary profile on C, one of its irreducible sets D inside C and
// the resulting frequency point.
struct RecurrentPoint {
  PurePlan profile;  // set on D only
  StateSet support;  // D
  FrequencyVector rho;
  PayoffVector payoff;
};

inline constexpr double kRecurrentEnumerationGuard = 1e6;

class EnumerationTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Points generated by C-preserving pure stationary profiles. Profiles that
// agree on D give the same point, so points are keyed by (D, actions on D).
inline std::vector<RecurrentPoint> enumerate_recurrent_points(const StochasticGame& g, const StateSet& c,
                                                              double guard = kRecurrentEnumerationGuard) {
  const int n = g.num_states();
  const auto in = membership(n, c);
  std::vector<std::vector<int>> choices;
  double count = 1.0;
  for (int s : c) {
    choices.push_back(preserving_profiles(g, s, in));
    count *= static_cast<double>(choices.back().size());
  }
  if (count > guard) throw EnumerationTooLarge("recurrent point enumeration exceeds the size guard");
  std::map<std::pair<StateSet, std::vector<int>>, int> seen;
  std::vector<RecurrentPoint> out;
  if (count == 0.0) return out;
  const int k = static_cast<int>(c.size());
  std::vector<int> digit(k, 0);
  for (;;) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
    for (int r = 0; r < k; ++r) {
      const int a = choices[r][digit[r]];
      for (int j = 0; j < k; ++j) p(r, j) = g.transition[c[r]][a][c[j]];
    }
    const auto ls = markov::limit_structure(p);
    for (std::size_t ci = 0; ci < ls.classes.size(); ++ci) {
      StateSet d;
      std::vector<int> acts;
      for (int r : ls.classes[ci]) d.push_back(c[r]), acts.push_back(choices[r][digit[r]]);
      if (!seen.emplace(std::make_pair(d, acts), static_cast<int>(out.size())).second) continue;
      RecurrentPoint pt;
      pt.profile.assign(n, -1);
      pt.support = d;
      pt.rho.rho.assign(n, Distribution(g.num_profiles(), 0.0));
      for (std::size_t m = 0; m < d.size(); ++m) {
        pt.profile[d[m]] = acts[m];
        pt.rho.rho[d[m]][acts[m]] = ls.stationary[ci](static_cast<int>(m));
      }
      pt.payoff = payoff_of_frequency(g, pt.rho);
      out.push_back(std::move(pt));
    }
    int r = 0;
    while (r < k && ++digit[r] == static_cast<int>(choices[r].size())) digit[r++] = 0;
    if (r == k) break;
  }
  return out;
}

// max t  s.t.  sum_k beta_k p_k >= c + t (coordinatewise), beta in the simplex.
// A basic optimum puts weight on at most |I| + 1 points (usually |I|, since t
// is free and normally basic).
struct MixturePlan {
  bool solved = false;    // LP optimal (it always is for nonempty input)
  double slack = 0.0;     // t*
  std::vector<int> atoms;  // indices of points with positive weight, ascending
  std::vector<double> weights;
  PayoffVector mixture;   // sum beta_k p_k
};

inline MixturePlan max_slack_mixture(const std::vector<PayoffVector>& points, const PayoffVector& target) {
  MixturePlan plan;
  if (points.empty()) return plan;
  const int m = static_cast<int>(points.size());
  const int ni = static_cast<int>(target.size());
  lp::Problem p;
  for (int k = 0; k < m; ++k) p.add_variable(0.0);
  const int t = p.add_variable(1.0, true);
  for (int i = 0; i < ni; ++i) {
    std::vector<double> row(m + 1, 0.0);
    for (int k = 0; k < m; ++k) row[k] = points[k][i];
    row[t] = -1.0;
    p.add_row(row, lp::Sense::kGreaterEqual, target[i]);
  }
  std::vector<double> sum(m + 1, 1.0);
  sum[t] = 0.0;
  p.add_row(sum, lp::Sense::kEqual, 1.0);
  const lp::Solution sol = lp::maximize(p);
  if (sol.status != lp::Status::kOptimal) return plan;
  plan.solved = true;
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    if (sol.x[k] > 1e-12) plan.atoms.push_back(k), plan.weights.push_back(sol.x[k]), total += sol.x[k];
  }
  for (double& w : plan.weights) w /= total;
  plan.mixture.assign(ni, 0.0);
  for (std::size_t l = 0; l < plan.atoms.size(); ++l) {
    for (int i = 0; i < ni; ++i) plan.mixture[i] += plan.weights[l] * points[plan.atoms[l]][i];
  }
  // Recompute the slack from the cleaned weights.
  plan.slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ni; ++i) plan.slack = std::min(plan.slack, plan.mixture[i] - target[i]);
  return plan;
}

// Carathéodory step down to `max_atoms` points: tries every subset of the
// current atoms of that size (lexicographic order) and keeps the best one if
// its slack is still at least `min_slack`.
inline MixturePlan reduce_atoms(const std::vector<PayoffVector>& points, const PayoffVector& target,
                                const MixturePlan& plan, int max_atoms, double min_slack) {
  const int k = static_cast<int>(plan.atoms.size());
  if (k <= max_atoms || max_atoms <= 0) return plan;
  MixturePlan best;
  std::vector<bool> pick(k, false);
  std::fill(pick.begin(), pick.begin() + max_atoms, true);
  do {
    std::vector<int> idx;
    std::vector<PayoffVector> sub;
    for (int j = 0; j < k; ++j) {
      if (pick[j]) idx.push_back(plan.atoms[j]), sub.push_back(points[plan.atoms[j]]);
    }
    MixturePlan cand = max_slack_mixture(sub, target);
    if (!cand.solved) continue;
    for (int& a : cand.atoms) a = idx[a];
    if (!best.solved || cand.slack > best.slack + 1e-12) best = std::move(cand);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  if (best.solved && best.slack >= min_slack) return best;
  return plan;
}

struct TypeAPlan {
  PayoffVector target;                // c
  std::vector<RecurrentPoint> atoms;  // L atoms
  std::vector<double> beta;
  PayoffVector mixture_payoff;        // sum beta payoff(rho)
  double slack = 0.0;                 // min_i (mixture - c)
};

// Type A test against target c: returns the max-slack plan when its slack is
// at least `min_slack` (0 reproduces the plain feasibility question).
inline std::optional<TypeAPlan> type_a_feasibility(const std::vector<RecurrentPoint>& points,
                                                   const PayoffVector& target, double min_slack = 0.0,
                                                   double* best_slack = nullptr) {
  std::vector<PayoffVector> pay;
  for (const auto& p : points) pay.push_back(p.payoff);
  const MixturePlan mp = max_slack_mixture(pay, target);
  if (best_slack) *best_slack = mp.solved ? mp.slack : -std::numeric_limits<double>::infinity();
  if (!mp.solved || mp.slack < min_slack - 1e-12) return std::nullopt;
  TypeAPlan plan;
  plan.target = target;
  for (std::size_t l = 0; l < mp.atoms.size(); ++l) plan.atoms.push_back(points[mp.atoms[l]]);
  plan.beta = mp.weights;
  plan.mixture_payoff = mp.mixture;
  plan.slack = mp.slack;
  return plan;
}

inline std::optional<TypeAPlan> type_a_feasibility(const StochasticGame& g, const StateSet& c,
                                                   const PayoffVector& target, double min_slack = 0.0) {
  return type_a_feasibility(enumerate_recurrent_points(g, c), target, min_slack);
}

}  // namespace accept
