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

#include <optional>
#include <vector>

#include "fragtrain/simulator.h"
#include "fragtrain/trace.h"

namespace fragtrain {

// Node-hours of idle resources over [t0_s, t1_s]; 0 for an empty window.
double resource_integral(const trace::EventLog& log, double t0_s, double t1_s);

// Size of the static cluster with the same node-hours. Throws InputError
// when t1_s <= t0_s.
double equivalent_nodes(const trace::EventLog& log, double t0_s, double t1_s);

struct StaticOutcome {
  double samples = 0.0;
  bool infeasible = false;  // no trainer fits on floor(n_eq) nodes
};

// Samples produced by the best one-shot allocation of floor(n_eq) nodes to
// all trainers, held for duration_s with no rescaling.
StaticOutcome static_baseline_outcome(const std::vector<TrainerSpec>& trainers, double n_eq,
                                      double duration_s);

// 100 * a_e / a_s. Throws InputError when a_s is not positive.
double utilization_efficiency(double a_e, double a_s);

struct WindowEfficiency {
  double t0_s = 0.0;
  double t1_s = 0.0;
  double eq_nodes = 0.0;
  double a_e = 0.0;
  double a_s = 0.0;
  std::optional<double> u_pct;  // empty when a_s == 0
};

struct EfficiencyReport {
  double resource_node_hours = 0.0;
  double eq_nodes = 0.0;
  double a_e = 0.0;
  double a_s = 0.0;
  std::optional<double> u_pct;
  bool baseline_infeasible = false;
  double window_s = 0.0;
  std::vector<WindowEfficiency> per_window;
};

// Samples accrued by the run inside [t0_s, t1_s], from the unpaused
// timeline intervals.
double samples_in_window(const SimulationReport& report,
                         const std::vector<TrainerSpec>& trainers, double t0_s, double t1_s);

inline constexpr double kDefaultWindowS = 6.0 * 3600.0;

EfficiencyReport efficiency_report(const trace::EventLog& log,
                                   const std::vector<TrainerSpec>& trainers,
                                   const SimulationReport& report,
                                   double window_s = kDefaultWindowS);

struct LedgerEntry {
  double t_s = 0.0;
  double rescale_cost_a = 0.0;
  double rescale_cost_b = 0.0;
  double outcome_a = 0.0;
  double outcome_b = 0.0;
  std::optional<double> speedup;  // outcome_a / outcome_b
};

struct PerEventLedger {
  std::vector<LedgerEntry> entries;
  int skipped = 0;  // events where outcome_b == 0
  double mean_speedup = 0.0;
};

// Pairs the event windows of two runs over the same log. Throws InputError
// when the windows do not line up.
PerEventLedger per_event_ledger(const SimulationReport& a, const SimulationReport& b);

}  // namespace fragtrain
