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

// Finite Markov chain toolkit: strongly connected components, recurrent
// classes, stationary and Cesaro-limit distributions, absorption and
// discounted linear solves. Chains are small and stored densely.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace accept {
namespace markov {

using Graph = std::vector<std::vector<int>>;

// Tarjan's algorithm, iterative. Components are returned in reverse
// topological order (sinks first); each component is sorted ascending.
inline std::vector<std::vector<int>> strongly_connected_components(const Graph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<int>> out;
  int counter = 0;
  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < g[f.v].size()) {
        const int w = g[f.v][f.edge++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

// Components with no edge leaving them, ordered by smallest member.
inline std::vector<std::vector<int>> bottom_components(const Graph& g) {
  std::vector<int> comp_of(g.size(), -1);
  auto comps = strongly_connected_components(g);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int v : comps[c]) comp_of[v] = static_cast<int>(c);
  }
  std::vector<std::vector<int>> bottom;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    bool closed = true;
    for (int v : comps[c]) {
      for (int w : g[v]) closed = closed && comp_of[w] == static_cast<int>(c);
    }
    if (closed) bottom.push_back(comps[c]);
  }
  std::sort(bottom.begin(), bottom.end());
  return bottom;
}

inline Graph support_graph(const Eigen::MatrixXd& p, double tol = 0.0) {
  Graph g(p.rows());
  for (int i = 0; i < p.rows(); ++i) {
    for (int j = 0; j < p.cols(); ++j) {
      if (p(i, j) > tol) g[i].push_back(j);
    }
  }
  return g;
}

inline std::vector<std::vector<int>> recurrent_classes(const Eigen::MatrixXd& p) {
  return bottom_components(support_graph(p));
}

// Stationary distribution of the chain restricted to an irreducible class.
inline Eigen::VectorXd class_stationary(const Eigen::MatrixXd& p, const std::vector<int>& cls) {
  const int k = static_cast<int>(cls.size());
  Eigen::MatrixXd a(k + 1, k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) a(r, c) = (r == c ? 1.0 : 0.0) - p(cls[c], cls[r]);
  }
  a.row(k).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
  b(k) = 1.0;
  Eigen::VectorXd pi = a.colPivHouseholderQr().solve(b);
  for (int i = 0; i < k; ++i) pi(i) = std::max(0.0, pi(i));
  pi /= pi.sum();
  return pi;
}

// Decomposition of a chain into recurrent classes with absorption weights.
struct LimitStructure {
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;           // -1 for transient states
  Eigen::MatrixXd absorption;          // states x classes
  std::vector<Eigen::VectorXd> stationary;  // per class, aligned with classes[c]
  Eigen::MatrixXd limit;               // Cesaro limit matrix
};

inline LimitStructure limit_structure(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  LimitStructure ls;
  ls.classes = recurrent_classes(p);
  ls.class_of.assign(n, -1);
  const int nc = static_cast<int>(ls.classes.size());
  for (int c = 0; c < nc; ++c) {
    for (int s : ls.classes[c]) ls.class_of[s] = c;
    ls.stationary.push_back(class_stationary(p, ls.classes[c]));
  }
  std::vector<int> transient;
  for (int s = 0; s < n; ++s) {
    if (ls.class_of[s] < 0) transient.push_back(s);
  }
  ls.absorption = Eigen::MatrixXd::Zero(n, nc);
  for (int s = 0; s < n; ++s) {
    if (ls.class_of[s] >= 0) ls.absorption(s, ls.class_of[s]) = 1.0;
  }
  if (!transient.empty()) {
    const int t = static_cast<int>(transient.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(t, t);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(t, nc);
    for (int r = 0; r < t; ++r) {
      for (int c = 0; c < t; ++c) a(r, c) -= p(transient[r], transient[c]);
      for (int j = 0; j < n; ++j) {
        if (ls.class_of[j] >= 0) b(r, ls.class_of[j]) += p(transient[r], j);
      }
    }
    Eigen::MatrixXd x = a.partialPivLu().solve(b);
    for (int r = 0; r < t; ++r) ls.absorption.row(transient[r]) = x.row(r);
  }
  ls.limit = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < nc; ++c) {
    for (int s = 0; s < n; ++s) {
      const double w = ls.absorption(s, c);
      if (w == 0.0) continue;
      for (std::size_t k = 0; k < ls.classes[c].size(); ++k) {
        ls.limit(s, ls.classes[c][k]) += w * ls.stationary[c](static_cast<int>(k));
      }
    }
  }
  return ls;
}

// Solves v = (1 - lambda) r + lambda P v.
inline Eigen::MatrixXd discounted_values(const Eigen::MatrixXd& p, const Eigen::MatrixXd& rewards,
                                         double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("discount factor must lie in [0, 1)");
  }
  const int n = static_cast<int>(p.rows());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - lambda * p;
  return a.partialPivLu().solve((1.0 - lambda) * rewards);
}

// For a chain with a set of stopping states, returns for every start state the
// distribution over the stopping state at which the chain first stops after
// taking at least one step. Row sums below one mean positive probability of
// never stopping.
inline Eigen::MatrixXd first_stop_distribution(const Eigen::MatrixXd& p,
                                               const std::vector<bool>& stop) {
  const int n = static_cast<int>(p.rows());
  // h(s, t) = P(s, t) [t stops] + sum_{u not stopping} P(s, u) h(u, t)
  std::vector<int> cont;
  for (int s = 0; s < n; ++s) {
    if (!stop[s]) cont.push_back(s);
  }
  Eigen::MatrixXd direct = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (stop[t]) direct(s, t) = p(s, t);
    }
  }
  if (cont.empty()) return direct;
  const int k = static_cast<int>(cont.size());
  // States of the continuation set that can never stop are solved as zero.
  Graph g(k);
  std::vector<int> pos(n, -1);
  for (int i = 0; i < k; ++i) pos[cont[i]] = i;
  std::vector<bool> can_stop(k, false);
  for (int i = 0; i < k; ++i) {
    for (int t = 0; t < n; ++t) {
      if (p(cont[i], t) <= 0.0) continue;
      if (stop[t]) can_stop[i] = true;
      else g[pos[t]].push_back(i);  // reverse edge
    }
  }
  std::vector<int> queue;
  for (int i = 0; i < k; ++i) {
    if (can_stop[i]) queue.push_back(i);
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    for (int j : g[queue[h]]) {
      if (!can_stop[j]) {
        can_stop[j] = true;
        queue.push_back(j);
      }
    }
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k, n);
  for (int i = 0; i < k; ++i) {
    if (!can_stop[i]) continue;
    for (int j = 0; j < k; ++j) {
      if (can_stop[j]) a(i, j) -= p(cont[i], cont[j]);
    }
    b.row(i) = direct.row(cont[i]);
  }
  Eigen::MatrixXd h = a.partialPivLu().solve(b);
  Eigen::MatrixXd out = direct;
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < k; ++i) {
      const double w = p(s, cont[i]);
      if (w > 0.0 && can_stop[i]) out.row(s) += w * h.row(i);
    }
  }
  return out;
}

}  // namespace markov
}  // namespace accept
