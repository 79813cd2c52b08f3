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

#include "fragtrain/milp.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "fragtrain/errors.h"
#include "fragtrain/format.h"

namespace fragtrain {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kUnchanged:
      return "unchanged";
    case Direction::kUp:
      return "up";
    case Direction::kDown:
      return "down";
  }
  return "unknown";
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kTimeoutFeasible:
      return "TimeoutFeasible";
    case SolveStatus::kTimeoutKeptCurrent:
      return "TimeoutKeptCurrent";
    case SolveStatus::kHeuristic:
      return "Heuristic";
  }
  return "unknown";
}

int SolveConfig::resolved_big_m(int pool_size) const {
  if (!big_m) return pool_size + 1;
  if (*big_m <= pool_size) {
    throw InputError("big_m " + std::to_string(*big_m) + " must exceed the pool size " +
                     std::to_string(pool_size));
  }
  return *big_m;
}

double rescaling_cost(const TrainerSpec& spec, int c, int n) {
  if (n < c) return spec.r_dw_s;
  if (n > c) return spec.r_up_s;
  return 0.0;
}

double objective_rate(const TrainerSpec& spec, ObjectiveMetric metric, int n) {
  if (n < spec.n_min) return 0.0;
  switch (metric) {
    case ObjectiveMetric::kThroughput:
      return evaluate(spec.curve, n);
    case ObjectiveMetric::kScalingEfficiency:
      return evaluate(spec.curve, n) / spec.curve.rates().front();
  }
  return 0.0;
}

double decision_gain(const TrainerSpec& spec, int c, int n, const SolveConfig& config) {
  if (!spec.admissible(n)) {
    throw std::out_of_range("count " + std::to_string(n) + " not admissible for '" + spec.name +
                            "'");
  }
  return config.t_fwd_s * objective_rate(spec, config.metric, n) -
         objective_rate(spec, config.metric, c) * rescaling_cost(spec, c, n);
}

double allocation_objective(const ClusterState& state, std::span<const int> counts,
                            const SolveConfig& config) {
  double total = 0.0;
  for (std::size_t j = 0; j < state.jobs.size(); ++j) {
    total += decision_gain(state.jobs[j].spec, state.jobs[j].count(), counts[j], config);
  }
  return total;
}

bool is_migration_free(const NodeSet& before, const NodeSet& after) {
  std::vector<NodeId> diff;
  std::set_symmetric_difference(before.begin(), before.end(), after.begin(), after.end(),
                                std::back_inserter(diff));
  auto delta = static_cast<long>(after.size()) - static_cast<long>(before.size());
  return static_cast<long>(diff.size()) == std::labs(delta);
}

std::vector<NodeSet> realize_counts(const ClusterState& state, std::span<const int> counts) {
  if (counts.size() != state.jobs.size()) {
    throw InfeasibleError("count vector length does not match the job list");
  }
  NodeSet pool = state.universe();
  long total = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (!state.jobs[j].spec.admissible(counts[j])) {
      throw InfeasibleError("count " + std::to_string(counts[j]) + " not admissible for '" +
                            state.jobs[j].spec.name + "'");
    }
    total += counts[j];
  }
  if (total > static_cast<long>(pool.size())) {
    throw InfeasibleError("counts need " + std::to_string(total) + " nodes but the pool has " +
                          std::to_string(pool.size()));
  }

  NodeSet free = pool;
  for (const auto& job : state.jobs) {
    for (const auto& n : job.nodes) free.erase(n);
  }
  std::vector<NodeSet> out(state.jobs.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const NodeSet& held = state.jobs[j].nodes;
    if (counts[j] >= static_cast<int>(held.size())) {
      out[j] = held;
      continue;
    }
    auto it = held.begin();
    for (int k = 0; k < counts[j]; ++k, ++it) out[j].insert(*it);
    for (; it != held.end(); ++it) free.insert(*it);
  }
  for (std::size_t j = 0; j < counts.size(); ++j) {
    int need = counts[j] - static_cast<int>(out[j].size());
    for (; need > 0; --need) {
      auto it = free.begin();
      out[j].insert(*it);
      free.erase(it);
    }
  }
  return out;
}

namespace {

Direction direction_of(int c, int n) {
  if (n > c) return Direction::kUp;
  if (n < c) return Direction::kDown;
  return Direction::kUnchanged;
}

void fill_directions(const ClusterState& state, AllocationDecision& d) {
  d.directions.clear();
  for (std::size_t j = 0; j < state.jobs.size(); ++j) {
    d.directions.push_back(direction_of(state.jobs[j].count(), d.counts[j]));
  }
}

}  // namespace

AllocationDecision make_decision(const ClusterState& state, std::span<const int> counts,
                                 const SolveConfig& config, SolveStatus status) {
  AllocationDecision d;
  d.assignment = realize_counts(state, counts);
  d.counts.assign(counts.begin(), counts.end());
  fill_directions(state, d);
  d.objective_value = allocation_objective(state, counts, config);
  d.status = status;
  return d;
}

AllocationDecision keep_current(const ClusterState& state, const SolveConfig& config,
                                SolveStatus status) {
  AllocationDecision d;
  for (const auto& job : state.jobs) {
    d.assignment.push_back(job.nodes);
    d.counts.push_back(job.count());
    d.directions.push_back(Direction::kUnchanged);
    d.objective_value += config.t_fwd_s * objective_rate(job.spec, config.metric, job.count());
  }
  d.status = status;
  return d;
}

// ---------------------------------------------------------------------------
// Count-vector solvers

namespace {

// Ordering used to pick among count vectors: higher objective, then fewer
// rescaled jobs, then more nodes for earlier-arrived jobs.
bool objective_ties(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<int> choice_set(const TrainerSpec& spec, int pool) {
  std::vector<int> s{0};
  for (int n = spec.n_min; n <= std::min(spec.n_max, pool); ++n) s.push_back(n);
  return s;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

AllocationDecision solve_count_dp(const ClusterState& state, const SolveConfig& config) {
  auto start = std::chrono::steady_clock::now();
  const int jobs = static_cast<int>(state.jobs.size());
  const int pool = state.universe_size();

  struct Cell {
    double obj = 0.0;
    int rescaled = 0;
    int choice = 0;
  };
  // best[j][b]: jobs j.. with at most b nodes.
  std::vector<std::vector<Cell>> best(jobs + 1, std::vector<Cell>(pool + 1));
  std::int64_t evaluated = 0;
  for (int j = jobs - 1; j >= 0; --j) {
    const auto& spec = state.jobs[j].spec;
    const int c = state.jobs[j].count();
    std::vector<std::pair<int, double>> options;
    for (int n : choice_set(spec, pool)) options.emplace_back(n, decision_gain(spec, c, n, config));
    for (int b = 0; b <= pool; ++b) {
      bool have = false;
      Cell cell;
      for (auto [n, gain] : options) {
        if (n > b) break;
        ++evaluated;
        const Cell& rest = best[j + 1][b - n];
        Cell cand{gain + rest.obj, rest.rescaled + (n != c ? 1 : 0), n};
        bool better;
        if (!have) {
          better = true;
        } else if (!objective_ties(cand.obj, cell.obj)) {
          better = cand.obj > cell.obj;
        } else if (cand.rescaled != cell.rescaled) {
          better = cand.rescaled < cell.rescaled;
        } else {
          better = cand.choice > cell.choice;
        }
        if (better) {
          cell = cand;
          have = true;
        }
      }
      best[j][b] = cell;
    }
  }

  std::vector<int> counts(jobs);
  int b = pool;
  for (int j = 0; j < jobs; ++j) {
    counts[j] = best[j][b].choice;
    b -= counts[j];
  }
  AllocationDecision d = make_decision(state, counts, config, SolveStatus::kOptimal);
  d.stats.candidates = evaluated;
  d.stats.elapsed_ms = elapsed_ms(start);
  return d;
}

AllocationDecision solve_exhaustive(const ClusterState& state, const SolveConfig& config,
                                    std::int64_t guard) {
  auto start = std::chrono::steady_clock::now();
  const int jobs = static_cast<int>(state.jobs.size());
  const int pool = state.universe_size();
  std::vector<std::vector<int>> sets;
  std::int64_t space = 1;
  for (const auto& job : state.jobs) {
    sets.push_back(choice_set(job.spec, pool));
    space *= static_cast<std::int64_t>(sets.back().size());
    if (space > guard) {
      throw SearchSpaceError("exhaustive search space exceeds " + std::to_string(guard) +
                             " candidates");
    }
  }
  std::vector<std::vector<double>> gains(jobs);
  for (int j = 0; j < jobs; ++j) {
    for (int n : sets[j]) {
      gains[j].push_back(decision_gain(state.jobs[j].spec, state.jobs[j].count(), n, config));
    }
  }

  std::vector<int> digit(jobs, 0);
  std::vector<int> best_counts;
  double best_obj = 0.0;
  int best_rescaled = 0;
  std::int64_t evaluated = 0;
  std::vector<int> counts(jobs);
  while (true) {
    ++evaluated;
    int used = 0;
    double obj = 0.0;
    int rescaled = 0;
    for (int j = 0; j < jobs; ++j) {
      counts[j] = sets[j][digit[j]];
      used += counts[j];
      obj += gains[j][digit[j]];
      rescaled += counts[j] != state.jobs[j].count() ? 1 : 0;
    }
    if (used <= pool) {
      bool better;
      if (best_counts.empty()) {
        better = true;
      } else if (!objective_ties(obj, best_obj)) {
        better = obj > best_obj;
      } else if (rescaled != best_rescaled) {
        better = rescaled < best_rescaled;
      } else {
        better = counts > best_counts;
      }
      if (better) {
        best_counts = counts;
        best_obj = obj;
        best_rescaled = rescaled;
      }
    }
    int k = jobs - 1;
    while (k >= 0 && ++digit[k] == static_cast<int>(sets[k].size())) {
      digit[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  AllocationDecision d = make_decision(state, best_counts, config, SolveStatus::kOptimal);
  d.stats.candidates = evaluated;
  d.stats.elapsed_ms = elapsed_ms(start);
  return d;
}

// ---------------------------------------------------------------------------
// MILP construction

int MilpProblem::count_kind(VarKind kind) const {
  return static_cast<int>(
      std::count_if(vars.begin(), vars.end(), [&](const MilpVariable& v) { return v.kind == kind; }));
}

int MilpProblem::add_var(std::string name, VarKind kind, double objective) {
  vars.push_back({std::move(name), kind, 0.0, 1.0, objective});
  return static_cast<int>(vars.size()) - 1;
}

void MilpProblem::add_row(std::string name, std::vector<std::pair<int, double>> terms,
                          lp::Sense sense, double rhs) {
  rows.push_back({std::move(terms), sense, rhs});
  row_names.push_back(std::move(name));
}

lp::LinearProgram MilpProblem::relaxation() const {
  lp::LinearProgram lp;
  for (const auto& v : vars) lp.add_var(v.objective, v.lower, v.upper);
  lp.rows = rows;
  return lp;
}

double MilpProblem::evaluate(std::span<const double> values) const {
  double obj = objective_constant;
  for (std::size_t i = 0; i < vars.size(); ++i) obj += vars[i].objective * values[i];
  return obj;
}

double MilpProblem::max_violation(std::span<const double> values) const {
  double worst = 0.0;
  for (const auto& row : rows) {
    double act = 0.0;
    for (auto [v, a] : row.terms) act += a * values[v];
    double viol = 0.0;
    switch (row.sense) {
      case lp::Sense::kLessEqual:
        viol = act - row.rhs;
        break;
      case lp::Sense::kGreaterEqual:
        viol = row.rhs - act;
        break;
      case lp::Sense::kEqual:
        viol = std::abs(act - row.rhs);
        break;
    }
    worst = std::max(worst, viol);
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    worst = std::max({worst, vars[i].lower - values[i], values[i] - vars[i].upper});
  }
  return worst;
}

MilpProblem build_milp(const ClusterState& state, const SolveConfig& config,
                       const BuildOptions& options) {
  using lp::Sense;
  MilpProblem p;
  p.state = state;
  p.config = config;
  NodeSet pool = state.universe();
  p.nodes.assign(pool.begin(), pool.end());
  const int nn = static_cast<int>(p.nodes.size());
  const int nj = static_cast<int>(state.jobs.size());
  p.big_m = config.resolved_big_m(nn);
  const double big_m = p.big_m;
  std::map<NodeId, int> pos;
  for (int k = 0; k < nn; ++k) pos[p.nodes[k]] = k;

  // c as a dense matrix.
  std::vector<std::vector<int>> held(nj, std::vector<int>(nn, 0));
  for (int j = 0; j < nj; ++j) {
    for (const auto& n : state.jobs[j].nodes) held[j][pos.at(n)] = 1;
  }

  auto jn = [](int j, int k) { return std::to_string(j) + "_" + std::to_string(k); };

  p.x.assign(nj, std::vector<int>(nn));
  for (int j = 0; j < nj; ++j) {
    for (int k = 0; k < nn; ++k) p.x[j][k] = p.add_var("x_" + jn(j, k), VarKind::kBinary, 0.0);
  }
  for (int j = 0; j < nj; ++j) {
    p.y_lo.push_back(p.add_var("ylo_" + std::to_string(j), VarKind::kBinary, 0.0));
    p.y_up.push_back(p.add_var("yup_" + std::to_string(j), VarKind::kBinary, 0.0));
  }
  p.u.assign(nj, std::vector<int>(nn));
  for (int j = 0; j < nj; ++j) {
    for (int k = 0; k < nn; ++k) p.u[j][k] = p.add_var("u_" + jn(j, k), VarKind::kBinary, 0.0);
  }
  for (int j = 0; j < nj; ++j) {
    p.z_mig.push_back(p.add_var("z_" + std::to_string(j), VarKind::kBinary, 0.0));
  }
  for (int j = 0; j < nj; ++j) {
    const auto& spec = state.jobs[j].spec;
    double fc = objective_rate(spec, config.metric, state.jobs[j].count());
    p.z_up.push_back(p.add_var("zup_" + std::to_string(j), VarKind::kBinary, -fc * spec.r_up_s));
    p.z_dw.push_back(p.add_var("zdw_" + std::to_string(j), VarKind::kBinary, -fc * spec.r_dw_s));
  }
  p.w.resize(nj);
  for (int j = 0; j < nj; ++j) {
    const auto& spec = state.jobs[j].spec;
    ScalabilityCurve f = config.metric == ObjectiveMetric::kScalingEfficiency
                             ? normalize_speedup(spec.curve)
                             : spec.curve;
    Sos2Set set;
    set.job = j;
    for (int i = 0; i < f.size(); ++i) {
      int v = p.add_var("w_" + jn(j, i), VarKind::kContinuous, config.t_fwd_s * f.rates()[i]);
      p.w[j].push_back(v);
      set.vars.push_back(v);
      set.order.push_back(f.grid()[i]);
    }
    p.sos2.push_back(std::move(set));
  }

  auto count_terms = [&](int j) {
    std::vector<std::pair<int, double>> t;
    for (int k = 0; k < nn; ++k) t.emplace_back(p.x[j][k], 1.0);
    return t;
  };
  auto with = [](std::vector<std::pair<int, double>> t,
                 std::initializer_list<std::pair<int, double>> extra) {
    t.insert(t.end(), extra.begin(), extra.end());
    return t;
  };

  for (int j = 0; j < nj; ++j) {
    const auto& spec = state.jobs[j].spec;
    const std::string js = std::to_string(j);
    // Job size: N = 0 or n_min <= N <= n_max. The constant must also cover
    // n_min, which may exceed the pool.
    const double m_size = std::max(big_m, static_cast<double>(spec.n_min));
    p.add_row("size_lo_" + js, with(count_terms(j), {{p.y_lo[j], m_size}}), Sense::kGreaterEqual,
              spec.n_min);
    p.add_row("size_lo_idle_" + js, with(count_terms(j), {{p.y_lo[j], m_size}}),
              Sense::kLessEqual, m_size);
    p.add_row("size_up_" + js, with(count_terms(j), {{p.y_up[j], -m_size}}), Sense::kLessEqual,
              spec.n_max);
    p.add_row("size_up_idle_" + js, with(count_terms(j), {{p.y_up[j], m_size}}),
              Sense::kLessEqual, m_size);
  }

  for (int k = 0; k < nn; ++k) {
    std::vector<std::pair<int, double>> t;
    for (int j = 0; j < nj; ++j) t.emplace_back(p.x[j][k], 1.0);
    p.add_row("node_" + std::to_string(k), std::move(t), Sense::kLessEqual, 1.0);
  }

  // u = x xor c.
  for (int j = 0; j < nj; ++j) {
    for (int k = 0; k < nn; ++k) {
      const double c = held[j][k];
      const int uv = p.u[j][k];
      const int xv = p.x[j][k];
      const std::string s = jn(j, k);
      p.add_row("xor_a_" + s, {{uv, 1.0}, {xv, -1.0}}, Sense::kLessEqual, c);
      p.add_row("xor_b_" + s, {{uv, 1.0}, {xv, -1.0}}, Sense::kGreaterEqual, -c);
      p.add_row("xor_c_" + s, {{uv, 1.0}, {xv, 1.0}}, Sense::kGreaterEqual, c);
      p.add_row("xor_d_" + s, {{uv, 1.0}, {xv, 1.0}}, Sense::kLessEqual, 2.0 - c);
    }
  }

  // No migration: N - C >= sum(u) or N - C <= -sum(u). The left side spans
  // [-2|N|, 2|N|], so the disjunction constant is doubled.
  const double m_mig = 2.0 * big_m;
  for (int j = 0; j < nj; ++j) {
    const double cj = state.jobs[j].count();
    const std::string js = std::to_string(j);
    auto t_grow = count_terms(j);
    auto t_shrink = count_terms(j);
    for (int k = 0; k < nn; ++k) {
      t_grow.emplace_back(p.u[j][k], -1.0);
      t_shrink.emplace_back(p.u[j][k], 1.0);
    }
    t_grow.emplace_back(p.z_mig[j], m_mig);
    t_shrink.emplace_back(p.z_mig[j], m_mig);
    p.add_row("mig_grow_" + js, std::move(t_grow), Sense::kGreaterEqual, cj);
    p.add_row("mig_shrink_" + js, std::move(t_shrink), Sense::kLessEqual, cj + m_mig);
  }

  // Piecewise-linear objective: weights sum to 1 unless the job is idle.
  for (int j = 0; j < nj; ++j) {
    const std::string js = std::to_string(j);
    std::vector<std::pair<int, double>> sum_w, sum_nw;
    for (std::size_t i = 0; i < p.w[j].size(); ++i) {
      sum_w.emplace_back(p.w[j][i], 1.0);
      sum_nw.emplace_back(p.w[j][i], p.sos2[j].order[i]);
    }
    sum_w.emplace_back(p.y_lo[j], 1.0);
    for (int k = 0; k < nn; ++k) sum_nw.emplace_back(p.x[j][k], -1.0);
    p.add_row("sos_sum_" + js, std::move(sum_w), Sense::kEqual, 1.0);
    p.add_row("sos_nodes_" + js, std::move(sum_nw), Sense::kEqual, 0.0);
  }

  // Rescale direction: z_up <=> N > C, z_dw <=> N < C.
  for (int j = 0; j < nj; ++j) {
    const double cj = state.jobs[j].count();
    const std::string js = std::to_string(j);
    p.add_row("up_a_" + js, with(count_terms(j), {{p.z_up[j], -(big_m - cj)}}), Sense::kLessEqual,
              cj);
    p.add_row("up_b_" + js, with(count_terms(j), {{p.z_up[j], -(cj + 1.0)}}),
              Sense::kGreaterEqual, 0.0);
    p.add_row("dw_a_" + js, with(count_terms(j), {{p.z_dw[j], big_m - cj + 1.0}}),
              Sense::kLessEqual, big_m);
    p.add_row("dw_b_" + js, with(count_terms(j), {{p.z_dw[j], cj}}), Sense::kGreaterEqual, cj);
  }

  if (options.symmetry_breaking) {
    std::vector<int> free_nodes;
    for (int k = 0; k < nn; ++k) {
      bool any = false;
      for (int j = 0; j < nj; ++j) any = any || held[j][k];
      if (!any) free_nodes.push_back(k);
    }
    auto used_terms = [&](int k, double coef) {
      std::vector<std::pair<int, double>> t;
      for (int j = 0; j < nj; ++j) t.emplace_back(p.x[j][k], coef);
      return t;
    };
    // Unheld nodes fill in ascending order, and in job order.
    for (std::size_t i = 0; i + 1 < free_nodes.size(); ++i) {
      int a = free_nodes[i];
      int b = free_nodes[i + 1];
      auto t = used_terms(b, 1.0);
      auto ta = used_terms(a, -1.0);
      t.insert(t.end(), ta.begin(), ta.end());
      p.add_row("sym_fill_" + std::to_string(b), std::move(t), Sense::kLessEqual, 0.0);
      for (int j = 1; j < nj; ++j) {
        std::vector<std::pair<int, double>> order{{p.x[j][a], 1.0}};
        for (int jj = 0; jj < j; ++jj) order.emplace_back(p.x[jj][b], 1.0);
        p.add_row("sym_order_" + jn(j, b), std::move(order), Sense::kLessEqual, 1.0);
      }
    }
    // Held nodes are kept and reused as prefixes of the owner's sorted set.
    for (int j = 0; j < nj; ++j) {
      std::vector<int> mine;
      for (int k = 0; k < nn; ++k) {
        if (held[j][k]) mine.push_back(k);
      }
      for (std::size_t i = 0; i + 1 < mine.size(); ++i) {
        int a = mine[i];
        int b = mine[i + 1];
        p.add_row("sym_keep_" + jn(j, b), {{p.x[j][b], 1.0}, {p.x[j][a], -1.0}},
                  Sense::kLessEqual, 0.0);
        auto t = used_terms(b, 1.0);
        auto ta = used_terms(a, -1.0);
        t.insert(t.end(), ta.begin(), ta.end());
        p.add_row("sym_used_" + jn(j, b), std::move(t), Sense::kLessEqual, 0.0);
      }
    }
  }
  return p;
}

std::string export_lp(const MilpProblem& p) {
  std::ostringstream out;
  auto term = [&](double a, const std::string& name, bool first) {
    if (a < 0) {
      out << " - " << format_double(-a) << ' ' << name;
    } else {
      out << (first ? " " : " + ") << format_double(a) << ' ' << name;
    }
  };
  out << "\\ allocation MILP: " << p.num_jobs() << " jobs, " << p.nodes.size()
      << " nodes, big_m " << p.big_m << "\n";
  out << "Maximize\n obj:";
  bool first = true;
  for (const auto& v : p.vars) {
    if (v.objective == 0.0) continue;
    term(v.objective, v.name, first);
    first = false;
  }
  if (first) out << " 0 " << (p.vars.empty() ? "dummy" : p.vars.front().name);
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    out << ' ' << p.row_names[r] << ':';
    first = true;
    for (auto [v, a] : p.rows[r].terms) {
      term(a, p.vars[v].name, first);
      first = false;
    }
    const char* op = p.rows[r].sense == lp::Sense::kLessEqual      ? " <= "
                     : p.rows[r].sense == lp::Sense::kGreaterEqual ? " >= "
                                                                   : " = ";
    out << op << format_double(p.rows[r].rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : p.vars) {
    if (v.kind == VarKind::kContinuous) {
      out << ' ' << format_double(v.lower) << " <= " << v.name << " <= " << format_double(v.upper)
          << '\n';
    }
  }
  out << "Binaries\n";
  for (const auto& v : p.vars) {
    if (v.kind == VarKind::kBinary) out << ' ' << v.name << '\n';
  }
  if (!p.sos2.empty()) {
    out << "SOS\n";
    for (const auto& s : p.sos2) {
      out << " s2_" << s.job << ": S2::";
      for (std::size_t i = 0; i < s.vars.size(); ++i) {
        out << ' ' << p.vars[s.vars[i]].name << ':' << format_double(s.order[i]);
      }
      out << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace fragtrain
