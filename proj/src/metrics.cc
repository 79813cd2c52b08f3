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

#include "fragtrain/metrics.h"

#include <algorithm>
#include <cmath>

#include "fragtrain/errors.h"
#include "fragtrain/milp.h"

namespace fragtrain {

double resource_integral(const trace::EventLog& log, double t0_s, double t1_s) {
  if (!(t1_s > t0_s)) return 0.0;
  return trace::node_seconds(log, t0_s, t1_s) / 3600.0;
}

double equivalent_nodes(const trace::EventLog& log, double t0_s, double t1_s) {
  if (!(t1_s > t0_s)) throw InputError("equivalent nodes need a window of positive length");
  return trace::node_seconds(log, t0_s, t1_s) / (t1_s - t0_s);
}

StaticOutcome static_baseline_outcome(const std::vector<TrainerSpec>& trainers, double n_eq,
                                      double duration_s) {
  if (!(duration_s > 0.0)) throw InputError("baseline duration must be positive");
  StaticOutcome out;
  const int nodes = n_eq > 0.0 ? static_cast<int>(std::floor(n_eq)) : 0;
  int smallest = 0;
  for (const auto& t : trainers) {
    smallest = smallest == 0 ? t.n_min : std::min(smallest, t.n_min);
  }
  if (trainers.empty() || nodes < smallest) {
    out.infeasible = true;
    return out;
  }
  ClusterState state;
  for (int i = 0; i < nodes; ++i) state.idle_nodes.insert("s" + std::to_string(i));
  for (auto spec : trainers) {
    spec.r_up_s = 0.0;
    spec.r_dw_s = 0.0;
    state.jobs.push_back({std::move(spec), {}});
  }
  SolveConfig cfg;
  cfg.t_fwd_s = duration_s;
  cfg.metric = ObjectiveMetric::kThroughput;
  AllocationDecision d = solve_count_dp(state, cfg);
  for (std::size_t j = 0; j < trainers.size(); ++j) {
    int n = d.counts[j];
    if (n > 0) out.samples += evaluate(trainers[j].curve, n) * duration_s;
  }
  return out;
}

double utilization_efficiency(double a_e, double a_s) {
  if (!(a_s > 0.0)) throw InputError("utilization efficiency is undefined for a_s = 0");
  return 100.0 * a_e / a_s;
}

double samples_in_window(const SimulationReport& report,
                         const std::vector<TrainerSpec>& trainers, double t0_s, double t1_s) {
  double total = 0.0;
  for (std::size_t j = 0; j < report.timelines.size(); ++j) {
    for (const auto& iv : report.timelines[j].intervals) {
      if (iv.paused) continue;
      double lo = std::max(iv.start_s, t0_s);
      double hi = std::min(iv.end_s, t1_s);
      if (hi > lo) total += delivered_rate(trainers[j], iv.nodes) * (hi - lo);
    }
  }
  return total;
}

EfficiencyReport efficiency_report(const trace::EventLog& log,
                                   const std::vector<TrainerSpec>& trainers,
                                   const SimulationReport& report, double window_s) {
  if (!(window_s > 0.0)) throw InputError("window length must be positive");
  if (trainers.size() != report.timelines.size()) {
    throw InputError("trainer list does not match the simulation report");
  }
  EfficiencyReport eff;
  eff.window_s = window_s;
  const double t0 = report.t_start_s;
  const double t1 = report.t_end_s;
  eff.resource_node_hours = resource_integral(log, t0, t1);
  eff.a_e = report.a_e;
  if (t1 > t0) {
    eff.eq_nodes = equivalent_nodes(log, t0, t1);
    StaticOutcome s = static_baseline_outcome(trainers, eff.eq_nodes, t1 - t0);
    eff.a_s = s.samples;
    eff.baseline_infeasible = s.infeasible;
    if (eff.a_s > 0.0) eff.u_pct = utilization_efficiency(eff.a_e, eff.a_s);
  }
  for (double w0 = t0; w0 < t1; w0 += window_s) {
    WindowEfficiency w;
    w.t0_s = w0;
    w.t1_s = std::min(w0 + window_s, t1);
    w.eq_nodes = equivalent_nodes(log, w.t0_s, w.t1_s);
    w.a_e = samples_in_window(report, trainers, w.t0_s, w.t1_s);
    w.a_s = static_baseline_outcome(trainers, w.eq_nodes, w.t1_s - w.t0_s).samples;
    if (w.a_s > 0.0) w.u_pct = utilization_efficiency(w.a_e, w.a_s);
    eff.per_window.push_back(w);
  }
  return eff;
}

PerEventLedger per_event_ledger(const SimulationReport& a, const SimulationReport& b) {
  if (a.event_windows.size() != b.event_windows.size() || a.t_start_s != b.t_start_s) {
    throw InputError("reports come from different event logs");
  }
  PerEventLedger ledger;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.event_windows.size(); ++i) {
    const EventWindow& wa = a.event_windows[i];
    const EventWindow& wb = b.event_windows[i];
    if (wa.t_s != wb.t_s || wa.n_idle != wb.n_idle) {
      throw InputError("event " + std::to_string(i) + " differs between the reports");
    }
    LedgerEntry e{wa.t_s, wa.rescale_cost_samples, wb.rescale_cost_samples, wa.outcome_samples,
                  wb.outcome_samples, std::nullopt};
    if (wb.outcome_samples > 0.0) {
      e.speedup = wa.outcome_samples / wb.outcome_samples;
      sum += *e.speedup;
    } else {
      ++ledger.skipped;
    }
    ledger.entries.push_back(e);
  }
  int defined = static_cast<int>(ledger.entries.size()) - ledger.skipped;
  if (defined > 0) ledger.mean_speedup = sum / defined;
  return ledger;
}

}  // namespace fragtrain
