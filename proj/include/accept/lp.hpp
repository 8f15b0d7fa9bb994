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

// Dense two-phase simplex for the small linear programs that appear in this
// library (matrix games, support enumeration, convex-dominance plans).
// Problems have at most a few thousand columns and a handful of rows.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace accept {
namespace lp {

enum class Sense { kLessEqual, kGreaterEqual, kEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Row {
  std::vector<double> coef;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// maximize objective . x  subject to rows, x_j >= 0 unless free[j].
struct Problem {
  std::vector<double> objective;
  std::vector<bool> free;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }

  int add_variable(double obj = 0.0, bool is_free = false) {
    objective.push_back(obj);
    free.push_back(is_free);
    for (Row& r : rows) r.coef.resize(objective.size(), 0.0);
    return num_vars() - 1;
  }

  void add_row(std::vector<double> coef, Sense sense, double rhs) {
    if (coef.size() > objective.size()) {
      throw std::invalid_argument("lp::Problem::add_row: too many coefficients");
    }
    coef.resize(objective.size(), 0.0);
    rows.push_back(Row{std::move(coef), sense, rhs});
  }
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  // Indices of original variables that are basic in the final tableau.
  std::vector<int> basic_vars;
};

namespace internal {

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * (cols_ + 1) + c];
  }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  void erase_row(int r) {
    const auto w = static_cast<std::size_t>(cols_ + 1);
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * w),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * w));
    --rows_;
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

// Runs primal simplex on the tableau maximizing cost . x over allowed columns.
// Returns false if unbounded.
inline bool run_simplex(Tableau& t, std::vector<int>& basis, const std::vector<double>& cost,
                        const std::vector<bool>& allowed, double tol) {
  const int m = t.rows();
  const int n = t.cols();
  int degenerate_streak = 0;
  const int max_iter = 50000 + 50 * (m + n);
  for (int iter = 0; iter < max_iter; ++iter) {
    const bool bland = degenerate_streak > 20;
    int enter = -1;
    double best = tol;
    for (int j = 0; j < n; ++j) {
      if (!allowed[j]) continue;
      double d = cost[j];
      for (int r = 0; r < m; ++r) d -= cost[basis[r]] * t.at(r, j);
      if (d > best) {
        enter = j;
        best = d;
        if (bland) break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      const double a = t.at(r, enter);
      if (a <= tol) continue;
      const double q = std::max(0.0, t.rhs(r)) / a;
      if (q < ratio - 1e-14 || (q <= ratio + 1e-14 && leave >= 0 && basis[r] < basis[leave])) {
        if (q < ratio) ratio = q;
        leave = r;
      }
    }
    if (leave < 0) return false;
    degenerate_streak = ratio <= 1e-14 ? degenerate_streak + 1 : 0;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
  throw std::runtime_error("lp: simplex iteration limit reached");
}

}  // namespace internal

inline Solution maximize(const Problem& problem, double tol = 1e-11) {
  const int nv = problem.num_vars();
  // Column layout: [structural (split free vars)] [slack/surplus] [artificial].
  std::vector<int> pos_col(nv), neg_col(nv, -1);
  int ncol = 0;
  for (int j = 0; j < nv; ++j) {
    pos_col[j] = ncol++;
    if (problem.free[j]) neg_col[j] = ncol++;
  }
  const int m = static_cast<int>(problem.rows.size());
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  std::vector<double> sign(m, 1.0);
  for (int r = 0; r < m; ++r) {
    const Row& row = problem.rows[r];
    Sense s = row.sense;
    if (row.rhs < 0) {
      sign[r] = -1.0;
      if (s == Sense::kLessEqual) s = Sense::kGreaterEqual;
      else if (s == Sense::kGreaterEqual) s = Sense::kLessEqual;
    }
    if (s != Sense::kEqual) slack_col[r] = ncol++;
    if (s != Sense::kLessEqual) art_col[r] = -2;  // assigned below
  }
  const int first_art = ncol;
  for (int r = 0; r < m; ++r) {
    if (art_col[r] == -2) art_col[r] = ncol++;
  }

  internal::Tableau t(m, ncol);
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    const Row& row = problem.rows[r];
    for (int j = 0; j < nv; ++j) {
      const double a = sign[r] * row.coef[j];
      t.at(r, pos_col[j]) = a;
      if (neg_col[j] >= 0) t.at(r, neg_col[j]) = -a;
    }
    t.rhs(r) = sign[r] * row.rhs;
    Sense s = row.sense;
    if (sign[r] < 0) {
      if (s == Sense::kLessEqual) s = Sense::kGreaterEqual;
      else if (s == Sense::kGreaterEqual) s = Sense::kLessEqual;
    }
    if (s == Sense::kLessEqual) {
      t.at(r, slack_col[r]) = 1.0;
      basis[r] = slack_col[r];
    } else {
      if (s == Sense::kGreaterEqual) t.at(r, slack_col[r]) = -1.0;
      t.at(r, art_col[r]) = 1.0;
      basis[r] = art_col[r];
    }
  }

  Solution sol;
  std::vector<bool> allowed(ncol, true);
  if (first_art < ncol) {
    std::vector<double> phase1(ncol, 0.0);
    for (int c = first_art; c < ncol; ++c) phase1[c] = -1.0;
    internal::run_simplex(t, basis, phase1, allowed, tol);
    double infeas = 0.0;
    for (int r = 0; r < t.rows(); ++r) {
      if (basis[r] >= first_art) infeas += t.rhs(r);
    }
    if (infeas > 1e-9) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (int r = 0; r < t.rows();) {
      if (basis[r] < first_art) {
        ++r;
        continue;
      }
      int pc = -1;
      for (int c = 0; c < first_art; ++c) {
        if (std::abs(t.at(r, c)) > 1e-9) {
          pc = c;
          break;
        }
      }
      if (pc >= 0) {
        t.pivot(r, pc);
        basis[r] = pc;
        ++r;
      } else {
        t.erase_row(r);
        basis.erase(basis.begin() + r);
      }
    }
    for (int c = first_art; c < ncol; ++c) allowed[c] = false;
  }

  std::vector<double> cost(ncol, 0.0);
  for (int j = 0; j < nv; ++j) {
    cost[pos_col[j]] = problem.objective[j];
    if (neg_col[j] >= 0) cost[neg_col[j]] = -problem.objective[j];
  }
  if (!internal::run_simplex(t, basis, cost, allowed, tol)) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  std::vector<double> col_value(ncol, 0.0);
  for (int r = 0; r < t.rows(); ++r) col_value[basis[r]] = std::max(0.0, t.rhs(r));
  sol.status = Status::kOptimal;
  sol.x.assign(nv, 0.0);
  for (int j = 0; j < nv; ++j) {
    sol.x[j] = col_value[pos_col[j]] - (neg_col[j] >= 0 ? col_value[neg_col[j]] : 0.0);
    sol.objective += problem.objective[j] * sol.x[j];
  }
  for (int r = 0; r < t.rows(); ++r) {
    for (int j = 0; j < nv; ++j) {
      if (basis[r] == pos_col[j] || basis[r] == neg_col[j]) sol.basic_vars.push_back(j);
    }
  }
  std::sort(sol.basic_vars.begin(), sol.basic_vars.end());
  return sol;
}

}  // namespace lp
}  // namespace accept
