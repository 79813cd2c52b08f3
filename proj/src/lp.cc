// Copyright 2026 The fragtrain Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fragtrain/lp.h"

#include <algorithm>
#include <cmath>

#include "fragtrain/errors.h"

namespace fragtrain::lp {

int LinearProgram::add_var(double obj, double lo, double hi) {
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

namespace {

constexpr double kPivotTol = 1e-9;

// Bounded-variable tableau. Every column has bounds [0, ub]; nonbasic columns
// sit at 0 or at ub, and `beta` holds the current values of the basic ones.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), t_(static_cast<std::size_t>(rows) * cols, 0.0), beta_(rows, 0.0),
        basis_(rows, -1), row_of_(cols, -1), ub_(cols, kInfinity), at_upper_(cols, false),
        d_(cols, 0.0) {}

  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * n_ + j]; }

  void set_basic(int row, int col, double value) {
    basis_[row] = col;
    row_of_[col] = row;
    beta_[row] = value;
  }
  double& ub(int col) { return ub_[col]; }

  void price(const std::vector<double>& cost) {
    for (int j = 0; j < n_; ++j) {
      double v = cost[j];
      for (int i = 0; i < m_; ++i) {
        double a = at(i, j);
        if (a != 0.0) v -= cost[basis_[i]] * a;
      }
      d_[j] = v;
    }
  }

  // Runs primal simplex for `cost` (maximize). Returns kOptimal, kUnbounded or
  // kIterationLimit; `iterations` accumulates.
  Status optimize(const std::vector<double>& cost, int max_iter, int& iterations,
                  const std::optional<std::chrono::steady_clock::time_point>& deadline) {
    price(cost);
    double cmax = 1.0;
    for (double c : cost) cmax = std::max(cmax, std::abs(c));
    const double dtol = 1e-9 * cmax;
    bool bland = false;
    int degenerate_run = 0;
    while (true) {
      if (iterations >= max_iter) return Status::kIterationLimit;
      if (deadline && iterations % 32 == 0 && std::chrono::steady_clock::now() >= *deadline) {
        return Status::kTimeLimit;
      }
      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (row_of_[j] >= 0 || ub_[j] <= 0.0) continue;
        double score;
        int jdir;
        if (!at_upper_[j] && d_[j] > dtol) {
          score = d_[j];
          jdir = 1;
        } else if (at_upper_[j] && d_[j] < -dtol) {
          score = -d_[j];
          jdir = -1;
        } else {
          continue;
        }
        if (bland) {
          q = j;
          dir = jdir;
          break;
        }
        if (score > best) {
          best = score;
          q = j;
          dir = jdir;
        }
      }
      if (q < 0) return Status::kOptimal;

      double theta = ub_[q];
      int r = -1;
      double r_piv = 0.0;
      for (int i = 0; i < m_; ++i) {
        double a = dir * at(i, q);
        double lim;
        if (a > kPivotTol) {
          lim = beta_[i] / a;
        } else if (a < -kPivotTol) {
          double u = ub_[basis_[i]];
          if (u == kInfinity) continue;
          lim = (u - beta_[i]) / -a;
        } else {
          continue;
        }
        lim = std::max(lim, 0.0);
        bool take;
        if (r < 0) {
          take = lim <= theta;  // a tie with the bound flip prefers a pivot
        } else if (lim < theta - 1e-12) {
          take = true;
        } else if (lim <= theta + 1e-12) {
          take = bland ? basis_[i] < basis_[r] : std::abs(a) > r_piv;
        } else {
          take = false;
        }
        if (take) {
          theta = std::min(theta, lim);
          r = i;
          r_piv = std::abs(a);
        }
      }
      if (theta == kInfinity) return Status::kUnbounded;
      ++iterations;
      if (theta <= 1e-12) {
        if (++degenerate_run > 50) bland = true;
      } else {
        degenerate_run = 0;
      }

      for (int i = 0; i < m_; ++i) {
        double a = at(i, q);
        if (a != 0.0) beta_[i] -= dir * a * theta;
      }
      if (r < 0) {
        at_upper_[q] = !at_upper_[q];
        continue;
      }
      int leaving = basis_[r];
      at_upper_[leaving] = dir * at(r, q) < 0.0;
      double entering_value = at_upper_[q] ? ub_[q] - theta : theta;
      pivot(r, q);
      row_of_[leaving] = -1;
      at_upper_[q] = false;
      set_basic(r, q, entering_value);
      if (at_upper_[leaving] && ub_[leaving] == kInfinity) at_upper_[leaving] = false;
    }
  }

  double value(int col) const {
    if (row_of_[col] >= 0) return beta_[row_of_[col]];
    return at_upper_[col] ? ub_[col] : 0.0;
  }

  int rows() const { return m_; }
  int basis(int row) const { return basis_[row]; }
  double& beta(int row) { return beta_[row]; }

 private:
  void pivot(int r, int q) {
    double p = at(r, q);
    double* rr = &t_[static_cast<std::size_t>(r) * n_];
    for (int j = 0; j < n_; ++j) rr[j] /= p;
    rr[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = at(i, q);
      if (f == 0.0) continue;
      double* ri = &t_[static_cast<std::size_t>(i) * n_];
      for (int j = 0; j < n_; ++j) {
        if (rr[j] != 0.0) ri[j] -= f * rr[j];
      }
      ri[q] = 0.0;
    }
    double f = d_[q];
    if (f != 0.0) {
      for (int j = 0; j < n_; ++j) {
        if (rr[j] != 0.0) d_[j] -= f * rr[j];
      }
      d_[q] = 0.0;
    }
  }

  int m_;
  int n_;
  std::vector<double> t_;
  std::vector<double> beta_;
  std::vector<int> basis_;
  std::vector<int> row_of_;
  std::vector<double> ub_;
  std::vector<bool> at_upper_;
  std::vector<double> d_;
};

}  // namespace

Result solve(const LinearProgram& lp, const Options& options) {
  const int nv = lp.num_vars();
  Result result;
  result.x.assign(nv, 0.0);

  // Shift every variable to a zero lower bound; fixed variables become constants.
  std::vector<int> col_of(nv, -1);
  int ns = 0;
  for (int v = 0; v < nv; ++v) {
    double width = lp.upper[v] - lp.lower[v];
    if (width < -options.feasibility_tol) return result;  // crossed bounds
    if (width > options.feasibility_tol) col_of[v] = ns++;
  }

  const int m = static_cast<int>(lp.rows.size());
  std::vector<double> rhs(m);
  std::vector<int> sign(m, 1);
  std::vector<int> slack_col(m, -1);
  std::vector<int> art_col(m, -1);
  int ncols = ns;
  for (int i = 0; i < m; ++i) {
    const Row& row = lp.rows[i];
    double b = row.rhs;
    for (auto [v, a] : row.terms) b -= a * lp.lower[v];
    rhs[i] = b;
    if (row.sense != Sense::kEqual) slack_col[i] = ncols++;
  }
  for (int i = 0; i < m; ++i) {
    const Row& row = lp.rows[i];
    bool slack_basic = (row.sense == Sense::kLessEqual && rhs[i] >= 0.0) ||
                       (row.sense == Sense::kGreaterEqual && rhs[i] <= 0.0);
    if (row.sense == Sense::kGreaterEqual) sign[i] = rhs[i] <= 0.0 ? -1 : 1;
    if (row.sense != Sense::kGreaterEqual) sign[i] = rhs[i] < 0.0 ? -1 : 1;
    if (!slack_basic) art_col[i] = ncols++;
  }

  Tableau tab(m, ncols);
  for (int v = 0; v < nv; ++v) {
    if (col_of[v] >= 0) tab.ub(col_of[v]) = lp.upper[v] - lp.lower[v];
  }
  for (int i = 0; i < m; ++i) {
    const Row& row = lp.rows[i];
    for (auto [v, a] : row.terms) {
      if (col_of[v] >= 0) tab.at(i, col_of[v]) += sign[i] * a;
    }
    if (slack_col[i] >= 0) {
      double s = row.sense == Sense::kLessEqual ? 1.0 : -1.0;
      tab.at(i, slack_col[i]) = sign[i] * s;
    }
    double b = sign[i] * rhs[i];
    if (art_col[i] >= 0) {
      tab.at(i, art_col[i]) = 1.0;
      tab.set_basic(i, art_col[i], b);
    } else {
      tab.set_basic(i, slack_col[i], b);
    }
  }

  int max_iter = options.max_iterations > 0 ? options.max_iterations : 200 * (m + ncols) + 1000;
  int iterations = 0;

  bool has_art = std::any_of(art_col.begin(), art_col.end(), [](int c) { return c >= 0; });
  if (has_art) {
    std::vector<double> phase1(ncols, 0.0);
    double scale = 1.0;
    for (int i = 0; i < m; ++i) {
      if (art_col[i] >= 0) {
        phase1[art_col[i]] = -1.0;
        scale = std::max(scale, std::abs(rhs[i]));
      }
    }
    Status s = tab.optimize(phase1, max_iter, iterations, options.deadline);
    result.iterations = iterations;
    if (s == Status::kIterationLimit || s == Status::kTimeLimit) {
      result.status = s;
      return result;
    }
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (art_col[i] >= 0) infeas += tab.value(art_col[i]);
    }
    if (infeas > 1e-7 * scale) {
      result.status = Status::kInfeasible;
      return result;
    }
    // Artificials may never re-enter; basic ones sit at zero and leave on
    // the first pivot that touches their row.
    for (int i = 0; i < m; ++i) {
      if (art_col[i] >= 0) tab.ub(art_col[i]) = 0.0;
    }
    for (int i = 0; i < m; ++i) {
      int b = tab.basis(i);
      if (b >= 0 && tab.ub(b) == 0.0) tab.beta(i) = 0.0;
    }
  }

  std::vector<double> cost(ncols, 0.0);
  for (int v = 0; v < nv; ++v) {
    if (col_of[v] >= 0) cost[col_of[v]] = lp.objective[v];
  }
  Status s = tab.optimize(cost, max_iter, iterations, options.deadline);
  result.iterations = iterations;
  result.status = s;
  if (s != Status::kOptimal) return result;

  double obj = 0.0;
  for (int v = 0; v < nv; ++v) {
    double x = lp.lower[v];
    if (col_of[v] >= 0) {
      double val = std::clamp(tab.value(col_of[v]), 0.0, lp.upper[v] - lp.lower[v]);
      x += val;
    }
    result.x[v] = x;
    obj += lp.objective[v] * x;
  }
  result.objective = obj;

  for (int i = 0; i < m; ++i) {
    const Row& row = lp.rows[i];
    double act = 0.0;
    double mag = std::abs(row.rhs);
    for (auto [v, a] : row.terms) {
      act += a * result.x[v];
      mag = std::max(mag, std::abs(a * result.x[v]));
    }
    double tol = 1e-6 * (1.0 + mag);
    bool ok = row.sense == Sense::kLessEqual      ? act <= row.rhs + tol
              : row.sense == Sense::kGreaterEqual ? act >= row.rhs - tol
                                                  : std::abs(act - row.rhs) <= tol;
    if (!ok) throw SolverError("simplex: solution violates row " + std::to_string(i));
  }
  return result;
}

}  // namespace fragtrain::lp
