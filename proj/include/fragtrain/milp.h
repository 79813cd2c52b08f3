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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fragtrain/lp.h"
#include "fragtrain/model.h"

namespace fragtrain {

enum class Direction { kUnchanged, kUp, kDown };

enum class SolveStatus {
  kOptimal,
  kTimeoutFeasible,
  kTimeoutKeptCurrent,
  kHeuristic,  // produced by a non-optimizing policy
};

std::string_view to_string(Direction d);
std::string_view to_string(SolveStatus s);

struct SolveConfig {
  double t_fwd_s = 120.0;
  ObjectiveMetric metric = ObjectiveMetric::kThroughput;
  std::int64_t timeout_ms = 10'000;
  std::optional<int> big_m;  // defaults to |pool| + 1

  // Throws InputError when an explicit big_m does not exceed the pool size.
  int resolved_big_m(int pool_size) const;
};

struct SolveStats {
  std::int64_t bb_nodes = 0;
  std::int64_t lp_iterations = 0;
  std::int64_t candidates = 0;
  double elapsed_ms = 0.0;
};

// New node-to-job map and its summary, indexed like ClusterState::jobs.
struct AllocationDecision {
  std::vector<NodeSet> assignment;
  std::vector<int> counts;
  std::vector<Direction> directions;
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
  SolveStats stats;
};

// Pause in seconds when moving from c to n nodes: r_dw_s, 0 or r_up_s.
double rescaling_cost(const TrainerSpec& spec, int c, int n);

// Per-second gain of running on n nodes under `metric`. Counts that cannot
// run (0, or a transient count below n_min) gain nothing.
double objective_rate(const TrainerSpec& spec, ObjectiveMetric metric, int n);

// T_fwd * f(n) - f(c) * rescaling_cost(c, n). Throws std::out_of_range when
// n is not admissible for the job.
double decision_gain(const TrainerSpec& spec, int c, int n, const SolveConfig& config);

// Sum of decision_gain over all jobs for a full count vector.
double allocation_objective(const ClusterState& state, std::span<const int> counts,
                            const SolveConfig& config);

// |new xor old| == ||new| - |old||: the job only gained or only lost nodes.
bool is_migration_free(const NodeSet& before, const NodeSet& after);

// Node identities for a count vector without migrating any job: shrinking
// jobs keep their lowest-id nodes, growing jobs keep everything and take
// free nodes (unheld or just released) in ascending id order, in arrival
// order. Throws InfeasibleError if a count is inadmissible or the counts do
// not fit in the pool.
std::vector<NodeSet> realize_counts(const ClusterState& state, std::span<const int> counts);

// Realizes `counts` and fills in directions and the objective.
AllocationDecision make_decision(const ClusterState& state, std::span<const int> counts,
                                 const SolveConfig& config, SolveStatus status);

// x = c. Objective is the value of staying put.
AllocationDecision keep_current(const ClusterState& state, const SolveConfig& config,
                                SolveStatus status);

enum class VarKind { kBinary, kContinuous };

struct MilpVariable {
  std::string name;
  VarKind kind = VarKind::kBinary;
  double lower = 0.0;
  double upper = 1.0;
  double objective = 0.0;
};

// Ordered weight set of which at most two adjacent members may be nonzero.
struct Sos2Set {
  int job = 0;
  std::vector<int> vars;
  std::vector<double> order;  // grid node counts
};

struct BuildOptions {
  // Adds ordering rows among interchangeable nodes. Every count vector keeps
  // exactly one representative assignment, so the optimum is unchanged.
  bool symmetry_breaking = true;
};

// The allocation MILP for one decision point. Maximize sum(obj * var) +
// objective_constant subject to `rows`, the variable bounds and `sos2`.
struct MilpProblem {
  std::vector<MilpVariable> vars;
  std::vector<lp::Row> rows;
  std::vector<std::string> row_names;
  std::vector<Sos2Set> sos2;
  double objective_constant = 0.0;
  int big_m = 1;

  ClusterState state;
  SolveConfig config;
  std::vector<NodeId> nodes;  // pool, ascending

  // Variable indices. x and u are [job][node position in `nodes`].
  std::vector<std::vector<int>> x;
  std::vector<std::vector<int>> u;
  std::vector<int> y_lo;
  std::vector<int> y_up;
  std::vector<int> z_mig;
  std::vector<int> z_up;
  std::vector<int> z_dw;
  std::vector<std::vector<int>> w;

  int num_jobs() const { return static_cast<int>(state.jobs.size()); }
  int count_kind(VarKind kind) const;
  int add_var(std::string name, VarKind kind, double objective);
  void add_row(std::string name, std::vector<std::pair<int, double>> terms, lp::Sense sense,
               double rhs);

  // Continuous relaxation (binaries in [0, 1], SOS2 dropped).
  lp::LinearProgram relaxation() const;
  // Objective of a full variable assignment.
  double evaluate(std::span<const double> values) const;
  // Largest row violation of a full variable assignment (0 when feasible).
  double max_violation(std::span<const double> values) const;
};

// Throws InputError for an explicit big_m <= |pool|.
MilpProblem build_milp(const ClusterState& state, const SolveConfig& config,
                       const BuildOptions& options = {});

// CPLEX-LP-style text dump for inspection with external tools.
std::string export_lp(const MilpProblem& problem);

// LP-based branch and bound: best-bound node order, most-fractional binary
// branching, SOS2 set branching. On timeout returns the better of the
// incumbent and the current map, or the current map when no incumbent exists.
AllocationDecision solve_bb(const MilpProblem& problem, std::int64_t timeout_ms);

// Exact solver using the separable structure: budgeted DP over count vectors.
AllocationDecision solve_count_dp(const ClusterState& state, const SolveConfig& config);

inline constexpr std::int64_t kExhaustiveGuard = 10'000'000;

// Brute force over every count vector. Throws SearchSpaceError when the
// product of per-job choice set sizes exceeds `guard`.
AllocationDecision solve_exhaustive(const ClusterState& state, const SolveConfig& config,
                                    std::int64_t guard = kExhaustiveGuard);

}  // namespace fragtrain
