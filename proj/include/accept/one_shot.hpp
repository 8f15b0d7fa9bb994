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

// Auxiliary one-shot games G(s) with payoffs U_i(s; a) = E[v1_i(next state)]
// and a finite enumeration of their equilibria.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "accept/game.hpp"
#include "accept/lp.hpp"

namespace accept {

// Per-player uniform values, v1[i][s].
using ValueTable = std::vector<std::vector<double>>;

struct AuxiliaryGame {
  int state = 0;
  ProfileIndexer indexer;
  std::vector<PayoffVector> table;  // [a][i]

  int num_players() const { return indexer.num_players(); }

  PayoffVector payoff(const Distribution& joint) const {
    PayoffVector out(num_players(), 0.0);
    for (int a = 0; a < indexer.num_profiles(); ++a) {
      if (joint[a] == 0.0) continue;
      for (int i = 0; i < num_players(); ++i) out[i] += joint[a] * table[a][i];
    }
    return out;
  }

  PayoffVector payoff(const std::vector<Distribution>& mixed) const {
    return payoff(product_action(indexer, mixed));
  }

  // Payoff to i of each own pure action against the others' mixed actions.
  std::vector<double> action_values(const std::vector<Distribution>& mixed, int i) const {
    std::vector<double> out(indexer.num_actions(i), 0.0);
    auto others = mixed;
    for (int ai = 0; ai < indexer.num_actions(i); ++ai) {
      others[i] = point_mass(indexer.num_actions(i), ai);
      out[ai] = payoff(others)[i];
    }
    return out;
  }

  double regret(const std::vector<Distribution>& mixed, int i) const {
    const auto vals = action_values(mixed, i);
    double current = 0.0;
    for (int ai = 0; ai < indexer.num_actions(i); ++ai) current += mixed[i][ai] * vals[ai];
    return *std::max_element(vals.begin(), vals.end()) - current;
  }

  double max_regret(const std::vector<Distribution>& mixed) const {
    double r = 0.0;
    for (int i = 0; i < num_players(); ++i) r = std::max(r, regret(mixed, i));
    return r;
  }
};

inline AuxiliaryGame build_auxiliary_game(const StochasticGame& g, int s, const ValueTable& v1) {
  AuxiliaryGame G;
  G.state = s;
  G.indexer = g.indexer();
  G.table.assign(g.num_profiles(), PayoffVector(g.num_players, 0.0));
  for (int a = 0; a < g.num_profiles(); ++a) {
    for (int t = 0; t < g.num_states(); ++t) {
      const double p = g.transition[s][a][t];
      if (p == 0.0) continue;
      for (int i = 0; i < g.num_players; ++i) G.table[a][i] += p * v1[i][t];
    }
  }
  return G;
}

struct Equilibrium {
  std::vector<Distribution> mixed;  // per player
  Distribution joint;               // product distribution over profiles
  PayoffVector payoff;
  double regret = 0.0;
  bool exact = true;
  std::string method;  // "pure", "support", "best-response"
};

struct EquilibriumSet {
  int state = 0;
  std::vector<Equilibrium> profiles;
  double eps_eq = 1e-9;
  // Support enumeration keeps one representative per support pair, so a
  // continuum of equilibria shows up as finitely many points.
  bool one_representative_per_support = false;
  std::string note;
};

struct EnumerationOptions {
  double eps_exact = 1e-9;   // regret tolerance for pure and support paths
  double eps_approx = 1e-6;  // regret tolerance for best-response dynamics
  int restarts = 20;
  int dynamics_steps = 20000;
  std::uint64_t seed = 0;
};

namespace internal {

inline bool same_profile(const std::vector<Distribution>& a, const std::vector<Distribution>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      if (std::abs(a[i][k] - b[i][k]) > 1e-9) return false;
    }
  }
  return true;
}

inline void add_unique(const AuxiliaryGame& G, EquilibriumSet& out, std::vector<Distribution> mixed,
                       bool exact, const std::string& method) {
  for (const auto& e : out.profiles) {
    if (same_profile(e.mixed, mixed)) return;
  }
  Equilibrium e;
  e.joint = product_action(G.indexer, mixed);
  e.payoff = G.payoff(e.joint);
  e.regret = G.max_regret(mixed);
  e.mixed = std::move(mixed);
  e.exact = exact;
  e.method = method;
  out.profiles.push_back(std::move(e));
}

// Cleans LP output: clamps tiny negatives, zeroes off-support, renormalizes.
inline Distribution clean(const std::vector<double>& x, const std::vector<int>& support, int n) {
  Distribution d(n, 0.0);
  double sum = 0.0;
  for (int a : support) sum += (d[a] = std::max(0.0, x[a]));
  for (double& w : d) w /= sum;
  return d;
}

inline std::vector<std::vector<int>> nonempty_subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int k = 0; k < n; ++k) {
      if (mask & (1 << k)) s.push_back(k);
    }
    out.push_back(s);
  }
  // Lexicographic support order: smaller supports first, then by members.
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

// One LP per support pair: indifference on the support, weakly worse off the
// support, maximize the smallest support probability.
inline void support_enumeration(const AuxiliaryGame& G, EquilibriumSet& out, double eps) {
  const int m1 = G.indexer.num_actions(0), m2 = G.indexer.num_actions(1);
  auto u = [&](int a1, int a2, int i) { return G.table[G.indexer.encode({a1, a2})][i]; };
  for (const auto& s1 : nonempty_subsets(m1)) {
    for (const auto& s2 : nonempty_subsets(m2)) {
      if (s1.size() == 1 && s2.size() == 1) continue;  // covered by the pure scan
      lp::Problem p;
      for (int k = 0; k < m1 + m2; ++k) p.add_variable(0.0);
      const int v1 = p.add_variable(0.0, true), v2 = p.add_variable(0.0, true);
      const int t = p.add_variable(1.0, true);
      const int nv = p.num_vars();
      std::vector<bool> in1(m1, false), in2(m2, false);
      for (int a : s1) in1[a] = true;
      for (int b : s2) in2[b] = true;
      for (int a = 0; a < m1; ++a) {
        std::vector<double> row(nv, 0.0);
        for (int b = 0; b < m2; ++b) row[m1 + b] = u(a, b, 0);
        row[v1] = -1.0;
        p.add_row(row, in1[a] ? lp::Sense::kEqual : lp::Sense::kLessEqual, 0.0);
        if (!in1[a]) {
          std::vector<double> z(nv, 0.0);
          z[a] = 1.0;
          p.add_row(z, lp::Sense::kEqual, 0.0);
        } else {
          std::vector<double> z(nv, 0.0);
          z[a] = 1.0;
          z[t] = -1.0;
          p.add_row(z, lp::Sense::kGreaterEqual, 0.0);
        }
      }
      for (int b = 0; b < m2; ++b) {
        std::vector<double> row(nv, 0.0);
        for (int a = 0; a < m1; ++a) row[a] = u(a, b, 1);
        row[v2] = -1.0;
        p.add_row(row, in2[b] ? lp::Sense::kEqual : lp::Sense::kLessEqual, 0.0);
        std::vector<double> z(nv, 0.0);
        z[m1 + b] = 1.0;
        if (!in2[b]) {
          p.add_row(z, lp::Sense::kEqual, 0.0);
        } else {
          z[t] = -1.0;
          p.add_row(z, lp::Sense::kGreaterEqual, 0.0);
        }
      }
      std::vector<double> sum1(nv, 0.0), sum2(nv, 0.0);
      for (int a = 0; a < m1; ++a) sum1[a] = 1.0;
      for (int b = 0; b < m2; ++b) sum2[m1 + b] = 1.0;
      p.add_row(sum1, lp::Sense::kEqual, 1.0);
      p.add_row(sum2, lp::Sense::kEqual, 1.0);
      const lp::Solution sol = lp::maximize(p);
      if (sol.status != lp::Status::kOptimal || sol.x[t] <= 1e-9) continue;
      std::vector<double> x1(sol.x.begin(), sol.x.begin() + m1);
      std::vector<double> x2(sol.x.begin() + m1, sol.x.begin() + m1 + m2);
      std::vector<Distribution> mixed{clean(x1, s1, m1), clean(x2, s2, m2)};
      if (G.max_regret(mixed) > eps) continue;
      add_unique(G, out, std::move(mixed), true, "support");
      out.one_representative_per_support = true;
    }
  }
}

// Fictitious play from a random start; the empirical mixture is returned.
inline std::vector<Distribution> fictitious_play(const AuxiliaryGame& G, std::mt19937_64& rng, int steps) {
  const int n = G.num_players();
  std::vector<Distribution> belief(n);
  std::exponential_distribution<double> e(1.0);
  for (int i = 0; i < n; ++i) {
    belief[i].assign(G.indexer.num_actions(i), 0.0);
    double sum = 0.0;
    for (double& w : belief[i]) sum += (w = e(rng));
    for (double& w : belief[i]) w /= sum;
  }
  for (int k = 1; k <= steps; ++k) {
    std::vector<Distribution> next = belief;
    for (int i = 0; i < n; ++i) {
      const auto vals = G.action_values(belief, i);
      const int br = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
      const double w = 1.0 / (k + 1.0);
      for (int a = 0; a < static_cast<int>(next[i].size()); ++a) {
        next[i][a] = (1.0 - w) * belief[i][a] + (a == br ? w : 0.0);
      }
    }
    belief = std::move(next);
  }
  return belief;
}

}  // namespace internal

inline EquilibriumSet enumerate_equilibria(const AuxiliaryGame& G, const EnumerationOptions& o = {}) {
  EquilibriumSet out;
  out.state = G.state;
  out.eps_eq = o.eps_exact;
  const int n = G.num_players();
  for (int a = 0; a < G.indexer.num_profiles(); ++a) {
    std::vector<Distribution> mixed;
    for (int i = 0; i < n; ++i) mixed.push_back(point_mass(G.indexer.num_actions(i), G.indexer.action(a, i)));
    if (G.max_regret(mixed) <= o.eps_exact) internal::add_unique(G, out, std::move(mixed), true, "pure");
  }
  if (n == 2) {
    internal::support_enumeration(G, out, o.eps_exact);
  } else if (n >= 3) {
    std::mt19937_64 rng(o.seed + 0x9e3779b97f4a7c15ULL * (G.state + 1));
    for (int r = 0; r < o.restarts; ++r) {
      auto mixed = internal::fictitious_play(G, rng, o.dynamics_steps);
      if (G.max_regret(mixed) <= o.eps_approx) internal::add_unique(G, out, std::move(mixed), false, "best-response");
    }
    out.eps_eq = o.eps_approx;
  }
  if (out.profiles.empty()) out.note = "no equilibrium found";
  if (out.one_representative_per_support) out.note = "one representative per support pair";
  return out;
}

inline std::vector<EquilibriumSet> enumerate_all(const StochasticGame& g, const ValueTable& v1,
                                                 const EnumerationOptions& o = {}) {
  std::vector<EquilibriumSet> out;
  for (int s = 0; s < g.num_states(); ++s) out.push_back(enumerate_equilibria(build_auxiliary_game(g, s, v1), o));
  return out;
}

struct ValueInequality {
  bool holds = true;
  PayoffVector margin;  // U_i(s; x) - v1_i(s)
};

inline ValueInequality check_value_inequality(const AuxiliaryGame& G, const Distribution& joint,
                                              const ValueTable& v1, double tol = 1e-6) {
  ValueInequality r;
  const PayoffVector u = G.payoff(joint);
  for (int i = 0; i < G.num_players(); ++i) {
    r.margin.push_back(u[i] - v1[i][G.state]);
    if (r.margin.back() < -tol) r.holds = false;
  }
  return r;
}

}  // namespace accept
