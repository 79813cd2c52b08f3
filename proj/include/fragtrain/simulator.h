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

#include "fragtrain/policies.h"
#include "fragtrain/trace.h"

namespace fragtrain {

struct SimulationConfig {
  PolicyConfig policy;
  // Adds measured solver wall time to every pause the decision starts.
  // Off by default: it makes runs non-reproducible.
  bool charge_solver_time = false;
  std::optional<double> horizon_s;  // relative to the log start
};

enum class PauseCause { kNone, kRescale, kPreemption };

struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;
  int nodes = 0;
  bool paused = false;
};

struct RescaleRecord {
  double t_s = 0.0;
  Direction direction = Direction::kUnchanged;
  int from = 0;
  int to = 0;
  double pause_s = 0.0;
  bool forced = false;  // nodes left the pool
};

struct TrainerTimeline {
  std::string name;
  double arrival_s = 0.0;
  std::optional<double> admit_s;
  std::optional<double> completion_s;
  std::vector<Interval> intervals;
  std::vector<RescaleRecord> rescales;
  double samples = 0.0;
};

struct JobDecision {
  std::string name;
  int count = 0;
  Direction direction = Direction::kUnchanged;
  double pause_s = 0.0;
};

// One policy invocation.
struct DecisionRecord {
  double t_s = 0.0;
  int n_idle = 0;
  std::vector<JobDecision> jobs;
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
  std::int64_t bb_nodes = 0;
  double solve_ms = 0.0;  // wall time, not written to reports
  bool kept_current_map = false;
  double outcome_samples = 0.0;  // accrued until the next decision
};

// Accounting between consecutive log events.
struct EventWindow {
  double t_s = 0.0;
  double end_s = 0.0;
  int n_idle = 0;
  double outcome_samples = 0.0;
  double rescale_cost_samples = 0.0;
  double preemption_cost_samples = 0.0;
};

struct SimulationReport {
  std::vector<TrainerTimeline> timelines;  // trainer input order
  std::vector<DecisionRecord> decisions;
  std::vector<EventWindow> event_windows;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  double a_e = 0.0;
  double rescale_cost_samples = 0.0;
  double preemption_cost_samples = 0.0;
  double resource_node_hours = 0.0;
  int completed = 0;

  double rescale_cost_per_event() const;
  // Mean admit-to-completion time of completed jobs; 0 when none completed.
  double mean_runtime_s() const;
};

// Throughput actually delivered on n nodes; a job below n_min cannot run.
double delivered_rate(const TrainerSpec& spec, int n);

struct AppliedDecision {
  ClusterState state;
  std::vector<double> pause_until;
  std::vector<double> pause_s;  // pause started by this decision, 0 if none
};

// Moves every job to its new node set. Growing jobs pause for r_up_s and
// shrinking ones for r_dw_s starting at t_s, replacing any pause in progress;
// unchanged jobs keep theirs. `extra_pause_s` is added to each new pause.
AppliedDecision apply_decision(const ClusterState& state, std::span<const double> pause_until,
                               const AllocationDecision& decision, double t_s,
                               double extra_pause_s = 0.0);

struct Accrual {
  std::vector<double> delta;                       // samples gained
  std::vector<double> paused_loss;                 // samples not produced while paused
  std::vector<std::optional<double>> completion_s;  // crossing time, if reached
};

// Work done in [from_s, to_s] by each job at its current size, outside its
// pause. A job whose `remaining` work is reached stops at the exact crossing.
Accrual accrue(const ClusterState& state, std::span<const double> pause_until,
               std::span<const double> remaining, double from_s, double to_s);

// Replays `log` against the trainers: at each node change, arrival and
// completion it preempts departed nodes, admits FCFS, asks the policy for a
// new map, applies it with pauses and accrues work until the next trigger.
// Throws SolverError when the policy fails.
SimulationReport run(const trace::EventLog& log, const std::vector<TrainerSpec>& trainers,
                     const SimulationConfig& config);

}  // namespace fragtrain
