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

// Discounted and uniform min-max values.
//
// Player i maximizes against the coalition of all other players, whose joint
// actions may be correlated. For two players this is the usual min-max value;
// with three or more players it is a lower bound on the min-max against
// independent opponents, and reports say so.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "accept/game.hpp"
#include "accept/lp.hpp"
#include "accept/markov.hpp"

namespace accept {

using ValueVector = std::vector<double>;

struct MatrixGameSolution {
  double value = 0.0;
  Distribution row_strategy;  // maximizer
  Distribution col_strategy;  // minimizer
};

namespace internal {

// max_x min_col x^T M e_col, via LP on the shifted (positive) matrix.
inline std::pair<double, Distribution> maximin_strategy(const Eigen::MatrixXd& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  lp::Problem p;
  for (int r = 0; r < rows; ++r) p.add_variable(0.0);
  const int v = p.add_variable(1.0, /*is_free=*/true);
  for (int c = 0; c < cols; ++c) {
    std::vector<double> coef(rows + 1, 0.0);
    for (int r = 0; r < rows; ++r) coef[r] = m(r, c);
    coef[v] = -1.0;
    p.add_row(coef, lp::Sense::kGreaterEqual, 0.0);
  }
  std::vector<double> sum(rows + 1, 1.0);
  sum[v] = 0.0;
  p.add_row(sum, lp::Sense::kEqual, 1.0);
  const lp::Solution sol = lp::maximize(p);
  if (sol.status != lp::Status::kOptimal) throw std::runtime_error("matrix game LP failed");
  Distribution x(sol.x.begin(), sol.x.begin() + rows);
  double total = 0.0;
  for (double& w : x) total += (w = std::max(0.0, w));
  for (double& w : x) w /= total;
  double value = std::numeric_limits<double>::infinity();
  for (int c = 0; c < cols; ++c) {
    double s = 0.0;
    for (int r = 0; r < rows; ++r) s += x[r] * m(r, c);
    value = std::min(value, s);
  }
  return {value, x};
}

}  // namespace internal

inline MatrixGameSolution solve_matrix_game(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("empty matrix game");
  MatrixGameSolution out;
  if (m.rows() == 1 || m.cols() == 1) {
    // Degenerate shapes have a pure solution; skip the LP.
    Eigen::Index r = 0, c = 0;
    if (m.cols() == 1) {
      out.value = m.col(0).maxCoeff(&r);
    } else {
      out.value = m.row(0).minCoeff(&c);
    }
    out.row_strategy = point_mass(static_cast<int>(m.rows()), static_cast<int>(r));
    out.col_strategy = point_mass(static_cast<int>(m.cols()), static_cast<int>(c));
    return out;
  }
  auto [v, x] = internal::maximin_strategy(m);
  auto [w, y] = internal::maximin_strategy(-m.transpose());
  out.value = 0.5 * (v - w);
  out.row_strategy = std::move(x);
  out.col_strategy = std::move(y);
  return out;
}

// Stage games of player i's min-max problem. Rows are player i's actions and
// columns are joint profiles of the other players.
class MinMaxGame {
 public:
  MinMaxGame(const StochasticGame& g, int player)
      : game_(&g), idx_(g.indexer()), player_(player) {
    if (player < 0 || player >= g.num_players) throw std::invalid_argument("bad player index");
  }

  int player() const { return player_; }
  int num_rows() const { return idx_.num_actions(player_); }
  int num_cols() const { return idx_.num_opponent_profiles(player_); }
  int profile(int row, int col) const { return idx_.combine(player_, row, col); }

  Eigen::MatrixXd stage_matrix(int s, const ValueVector& v, double lambda) const {
    Eigen::MatrixXd m(num_rows(), num_cols());
    for (int r = 0; r < num_rows(); ++r) {
      for (int c = 0; c < num_cols(); ++c) {
        const int a = profile(r, c);
        double cont = 0.0;
        const Distribution& q = game_->transition[s][a];
        for (int t = 0; t < game_->num_states(); ++t) cont += q[t] * v[t];
        m(r, c) = (1.0 - lambda) * game_->payoff[s][a][player_] + lambda * cont;
      }
    }
    return m;
  }

  // Shapley operator; optionally returns the maximizer's stage strategies.
  ValueVector apply(const ValueVector& v, double lambda,
                    std::vector<Distribution>* maximizer = nullptr) const {
    ValueVector out(game_->num_states());
    if (maximizer) maximizer->assign(game_->num_states(), {});
    for (int s = 0; s < game_->num_states(); ++s) {
      const MatrixGameSolution sol = solve_matrix_game(stage_matrix(s, v, lambda));
      out[s] = sol.value;
      if (maximizer) (*maximizer)[s] = sol.row_strategy;
    }
    return out;
  }

  // Value of the stationary maximizer strategy x against a best-responding
  // coalition, by policy iteration on the coalition's MDP.
  ValueVector evaluate_maximizer(const std::vector<Distribution>& x, double lambda,
                                 const ValueVector& hint, std::vector<int>* response = nullptr) const {
    const int n = game_->num_states();
    const int nc = num_cols();
    std::vector<Eigen::MatrixXd> trans(n, Eigen::MatrixXd::Zero(nc, n));
    Eigen::MatrixXd reward = Eigen::MatrixXd::Zero(n, nc);
    for (int s = 0; s < n; ++s) {
      for (int c = 0; c < nc; ++c) {
        for (int r = 0; r < num_rows(); ++r) {
          if (x[s][r] == 0.0) continue;
          const int a = profile(r, c);
          reward(s, c) += x[s][r] * game_->payoff[s][a][player_];
          for (int t = 0; t < n; ++t) trans[s](c, t) += x[s][r] * game_->transition[s][a][t];
        }
      }
    }
    auto q_value = [&](int s, int c, const ValueVector& w) {
      double cont = 0.0;
      for (int t = 0; t < n; ++t) cont += trans[s](c, t) * w[t];
      return (1.0 - lambda) * reward(s, c) + lambda * cont;
    };
    std::vector<int> policy(n, 0);
    for (int s = 0; s < n; ++s) {
      double best = q_value(s, 0, hint);
      for (int c = 1; c < nc; ++c) {
        const double q = q_value(s, c, hint);
        if (q < best) best = q, policy[s] = c;
      }
    }
    ValueVector w(n);
    for (int iter = 0; iter < 10000; ++iter) {
      Eigen::MatrixXd p(n, n);
      Eigen::VectorXd r(n);
      for (int s = 0; s < n; ++s) {
        p.row(s) = trans[s].row(policy[s]);
        r(s) = reward(s, policy[s]);
      }
      const Eigen::MatrixXd sol = markov::discounted_values(p, r, lambda);
      for (int s = 0; s < n; ++s) w[s] = sol(s, 0);
      bool changed = false;
      for (int s = 0; s < n; ++s) {
        const double current = q_value(s, policy[s], w);
        for (int c = 0; c < nc; ++c) {
          if (q_value(s, c, w) < current - 1e-12) {
            policy[s] = c;
            changed = true;
            break;
          }
        }
      }
      if (!changed) {
        if (response) *response = policy;
        return w;
      }
    }
    throw std::runtime_error("policy iteration did not terminate");
  }

 private:
  const StochasticGame* game_;
  ProfileIndexer idx_;
  int player_;
};

inline ValueVector shapley_operator(const StochasticGame& g, int player, const ValueVector& v,
                                    double lambda) {
  return MinMaxGame(g, player).apply(v, lambda);
}

struct MinMaxSolve {
  ValueVector values;
  int iterations = 0;
  double residual = 0.0;  // sup-norm of T(v) - v
  std::vector<Distribution> maximizer;
};

inline void require_discount(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("discount factor must lie in [0, 1)");
}

inline constexpr int kMinMaxIterationCap = 1000000;

// Lambda-discounted coalition min-max value of `player` by strategy iteration
// (maximizer improvement, exact best-response evaluation). Each iterate is the
// guaranteed value of a stationary strategy, so iterates increase
// monotonically; stops when the Shapley residual is at most tol, which places
// the iterate within tol / (1 - lambda) of the fixed point.
inline MinMaxSolve shapley_minmax(const StochasticGame& g, int player, double lambda, double tol = 1e-9,
                                  const ValueVector* warm_start = nullptr) {
  require_discount(lambda);
  const MinMaxGame mg(g, player);
  MinMaxSolve out;
  ValueVector v = warm_start ? *warm_start : ValueVector(g.num_states(), 0.0);
  for (int iter = 1; iter <= kMinMaxIterationCap; ++iter) {
    std::vector<Distribution> x;
    const ValueVector tv = mg.apply(v, lambda, &x);
    double residual = 0.0;
    for (int s = 0; s < g.num_states(); ++s) residual = std::max(residual, std::abs(tv[s] - v[s]));
    out.iterations = iter;
    out.residual = residual;
    out.maximizer = x;
    if (residual <= tol) {
      out.values = v;
      return out;
    }
    ValueVector next = mg.evaluate_maximizer(x, lambda, tv);
    // Guard against stalls from round-off once the residual is tiny.
    if (iter > 1) {
      double gain = 0.0;
      for (int s = 0; s < g.num_states(); ++s) gain = std::max(gain, next[s] - v[s]);
      if (gain <= 0.0 && residual <= 1e3 * tol) {
        out.values = tv;
        return out;
      }
    }
    v = std::move(next);
  }
  throw std::runtime_error("shapley_minmax: iteration cap reached");
}

// Plain value iteration v <- T v; used as an independent cross-check.
inline ValueVector shapley_value_iteration(const StochasticGame& g, int player, double lambda,
                                           double tol = 1e-9, int max_iter = kMinMaxIterationCap) {
  require_discount(lambda);
  const MinMaxGame mg(g, player);
  ValueVector v(g.num_states(), 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    ValueVector tv = mg.apply(v, lambda);
    double diff = 0.0;
    for (int s = 0; s < g.num_states(); ++s) diff = std::max(diff, std::abs(tv[s] - v[s]));
    v = std::move(tv);
    if (diff <= tol * (1.0 - lambda)) return v;
  }
  throw std::runtime_error("shapley_value_iteration: iteration cap reached");
}

inline std::vector<double> default_schedule(int k_max = 20) {
  std::vector<double> s;
  for (int k = 1; k <= k_max; ++k) s.push_back(1.0 - std::ldexp(1.0, -k));
  return s;
}

struct UniformMinMax {
  int player = 0;
  std::vector<double> schedule;
  std::vector<ValueVector> values;          // one per schedule entry
  std::vector<int> iterations;
  std::vector<double> successive_differences;  // sup-norm, entry k compares k and k-1
  ValueVector final_values;                 // at the last schedule point
  ValueVector extrapolated;                 // polynomial extrapolation to lambda = 1
  ValueVector estimate;                     // value used downstream
  bool converged = true;
};

// Extrapolates the last three (h = 1 - lambda, v) points to h = 0.
inline double extrapolate_to_one(const double h[3], const double v[3]) {
  double out = 0.0;
  for (int a = 0; a < 3; ++a) {
    double w = 1.0;
    for (int b = 0; b < 3; ++b) {
      if (b != a) w *= (0.0 - h[b]) / (h[a] - h[b]);
    }
    out += w * v[a];
  }
  return out;
}

inline UniformMinMax uniform_minmax(const StochasticGame& g, int player,
                                    const std::vector<double>& schedule = default_schedule(),
                                    double tol = 1e-9) {
  if (schedule.empty()) throw std::invalid_argument("empty discount schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    require_discount(schedule[k]);
    if (k > 0 && !(schedule[k] > schedule[k - 1])) {
      throw std::invalid_argument("discount schedule must be increasing");
    }
  }
  UniformMinMax out;
  out.player = player;
  out.schedule = schedule;
  const int n = g.num_states();
  out.values.reserve(schedule.size());  // keeps `warm` valid
  const ValueVector* warm = nullptr;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    MinMaxSolve sol = shapley_minmax(g, player, schedule[k], tol, warm);
    out.values.push_back(std::move(sol.values));
    out.iterations.push_back(sol.iterations);
    warm = &out.values.back();
    if (k > 0) {
      double d = 0.0;
      for (int s = 0; s < n; ++s) d = std::max(d, std::abs(out.values[k][s] - out.values[k - 1][s]));
      out.successive_differences.push_back(d);
    }
  }
  out.final_values = out.values.back();
  out.extrapolated = out.final_values;
  const std::size_t m = schedule.size();
  if (m >= 3) {
    const double h[3] = {1.0 - schedule[m - 3], 1.0 - schedule[m - 2], 1.0 - schedule[m - 1]};
    for (int s = 0; s < n; ++s) {
      const double v[3] = {out.values[m - 3][s], out.values[m - 2][s], out.values[m - 1][s]};
      out.extrapolated[s] = std::clamp(extrapolate_to_one(h, v), -g.payoff_bound, g.payoff_bound);
    }
  }
  // Differences below the solver's own accuracy count as converged.
  const auto& d = out.successive_differences;
  const double floor = 1e-8;
  for (std::size_t k = d.size() >= 3 ? d.size() - 2 : 1; k < d.size(); ++k) {
    if (d[k] > floor && d[k] > d[k - 1] + 1e-12) out.converged = false;
  }
  out.estimate = out.converged ? out.extrapolated : out.final_values;
  return out;
}

struct MinMaxReport {
  std::vector<UniformMinMax> players;
  // "coalition": opponents may correlate. Equals the independent-opponent
  // min-max exactly when there are at most two players.
  std::string adversary_mode = "coalition";
  bool matches_independent_adversary = true;

  // v1[i][s]
  std::vector<ValueVector> uniform_values() const {
    std::vector<ValueVector> out;
    for (const auto& p : players) out.push_back(p.estimate);
    return out;
  }
};

inline MinMaxReport solve_minmax(const StochasticGame& g,
                                 const std::vector<double>& schedule = default_schedule(),
                                 double tol = 1e-9) {
  MinMaxReport r;
  r.matches_independent_adversary = g.num_players <= 2;
  for (int i = 0; i < g.num_players; ++i) r.players.push_back(uniform_minmax(g, i, schedule, tol));
  return r;
}

}  // namespace accept
