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

#include "fragtrain/simulator.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <utility>

#include "fragtrain/errors.h"

namespace fragtrain {

double SimulationReport::rescale_cost_per_event() const {
  if (event_windows.empty()) return 0.0;
  return rescale_cost_samples / static_cast<double>(event_windows.size());
}

double SimulationReport::mean_runtime_s() const {
  double total = 0.0;
  int n = 0;
  for (const auto& tl : timelines) {
    if (tl.completion_s && tl.admit_s) {
      total += *tl.completion_s - *tl.admit_s;
      ++n;
    }
  }
  return n == 0 ? 0.0 : total / n;
}

double delivered_rate(const TrainerSpec& spec, int n) {
  if (n < spec.n_min) return 0.0;
  return evaluate(spec.curve, n);
}

AppliedDecision apply_decision(const ClusterState& state, std::span<const double> pause_until,
                               const AllocationDecision& decision, double t_s,
                               double extra_pause_s) {
  AppliedDecision out;
  out.state = state;
  out.pause_until.assign(pause_until.begin(), pause_until.end());
  out.pause_s.assign(state.jobs.size(), 0.0);
  for (std::size_t j = 0; j < state.jobs.size(); ++j) {
    const auto& spec = state.jobs[j].spec;
    int c = state.jobs[j].count();
    out.state.jobs[j].nodes = decision.assignment[j];
    int n = out.state.jobs[j].count();
    if (n == c) continue;
    double pause = rescaling_cost(spec, c, n) + extra_pause_s;
    out.pause_s[j] = pause;
    out.pause_until[j] = t_s + pause;
  }
  return out;
}

Accrual accrue(const ClusterState& state, std::span<const double> pause_until,
               std::span<const double> remaining, double from_s, double to_s) {
  const std::size_t jobs = state.jobs.size();
  Accrual a;
  a.delta.assign(jobs, 0.0);
  a.paused_loss.assign(jobs, 0.0);
  a.completion_s.assign(jobs, std::nullopt);
  for (std::size_t j = 0; j < jobs; ++j) {
    double rate = delivered_rate(state.jobs[j].spec, state.jobs[j].count());
    if (rate <= 0.0) continue;
    double paused = std::max(0.0, std::min(to_s, pause_until[j]) - from_s);
    a.paused_loss[j] = rate * paused;
    double active_from = std::max(from_s, pause_until[j]);
    double active = std::max(0.0, to_s - active_from);
    double need = remaining[j];
    if (rate * active >= need) {
      a.delta[j] = need;
      a.completion_s[j] = active_from + need / rate;
    } else {
      a.delta[j] = rate * active;
    }
  }
  return a;
}

namespace {

enum class Phase { kFuture, kPending, kRunning, kDone };

struct SimJob {
  const TrainerSpec* spec = nullptr;
  Phase phase = Phase::kFuture;
  NodeSet nodes;
  double pause_until = -std::numeric_limits<double>::infinity();
  PauseCause cause = PauseCause::kNone;
  double samples = 0.0;
};

void append_interval(TrainerTimeline& tl, double start, double end, int nodes, bool paused) {
  if (!(end > start)) return;
  if (!tl.intervals.empty()) {
    Interval& last = tl.intervals.back();
    if (last.end_s == start && last.nodes == nodes && last.paused == paused) {
      last.end_s = end;
      return;
    }
  }
  tl.intervals.push_back({start, end, nodes, paused});
}

class Simulation {
 public:
  Simulation(const trace::EventLog& log, const std::vector<TrainerSpec>& trainers,
             const SimulationConfig& config)
      : log_(log), trainers_(trainers), cfg_(config), jobs_(trainers.size()) {
    for (const auto& t : trainers) validate_trainer(t);
    trace::validate(log);
    if (cfg_.horizon_s && !(*cfg_.horizon_s > 0.0)) throw InputError("horizon must be positive");
    if (cfg_.policy.pj_max < 1) throw InputError("pj_max must be >= 1");
    order_.resize(trainers.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return trainers[a].arrival_s < trainers[b].arrival_s;
    });
    for (std::size_t i = 0; i < trainers.size(); ++i) {
      jobs_[i].spec = &trainers[i];
      report_.timelines.push_back({trainers[i].name, trainers[i].arrival_s, {}, {}, {}, {}, 0.0});
    }
  }

  SimulationReport run() {
    const double t0 = log_.t_start_s;
    double t_stop = log_.t_end_s;
    if (cfg_.horizon_s) t_stop = std::min(t_stop, t0 + *cfg_.horizon_s);
    report_.t_start_s = t0;
    report_.t_end_s = t0;
    if (!(t_stop > t0)) return finish();

    double t = t0;
    while (true) {
      bool changed = process_log_events(t);
      changed = process_arrivals(t) || changed;
      changed = std::exchange(completed_flag_, false) || changed;
      changed = admit(t) || changed;
      if (changed && !running_.empty()) decide(t);

      if (all_done()) break;
      double t_next = next_trigger(t, t_stop);
      advance(t, t_next);
      t = t_next;
      report_.t_end_s = t;
      if (t >= t_stop) break;
    }
    return finish();
  }

 private:
  bool process_log_events(double t) {
    bool any = false;
    while (next_event_ < log_.events.size() && log_.events[next_event_].t_s <= t) {
      const Event& e = log_.events[next_event_++];
      std::vector<int> lost(jobs_.size(), 0);
      for (const auto& n : e.leaves) {
        pool_.erase(n);
        for (std::size_t j : running_) {
          if (jobs_[j].nodes.erase(n)) ++lost[j];
        }
      }
      for (std::size_t j : running_) {
        if (lost[j] == 0) continue;
        SimJob& job = jobs_[j];
        int to = static_cast<int>(job.nodes.size());
        job.pause_until = t + job.spec->r_dw_s;
        job.cause = PauseCause::kPreemption;
        report_.timelines[j].rescales.push_back(
            {t, Direction::kDown, to + lost[j], to, job.spec->r_dw_s, true});
      }
      for (const auto& n : e.joins) pool_.insert(n);
      if (!report_.event_windows.empty()) report_.event_windows.back().end_s = t;
      report_.event_windows.push_back({t, t, static_cast<int>(pool_.size()), 0.0, 0.0, 0.0});
      any = true;
    }
    return any;
  }

  bool process_arrivals(double t) {
    bool any = false;
    while (next_arrival_ < order_.size() && trainers_[order_[next_arrival_]].arrival_s <= t) {
      std::size_t j = order_[next_arrival_++];
      jobs_[j].phase = Phase::kPending;
      pending_.push_back(j);
      any = true;
    }
    return any;
  }

  bool admit(double t) {
    std::size_t k = admit_fcfs(pending_.size(), running_.size(), cfg_.policy.pj_max);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = pending_.front();
      pending_.pop_front();
      jobs_[j].phase = Phase::kRunning;
      running_.push_back(j);
      report_.timelines[j].admit_s = t;
    }
    return k > 0;
  }

  ClusterState current_state() const {
    ClusterState s;
    s.idle_nodes = pool_;
    for (std::size_t j : running_) s.jobs.push_back({*jobs_[j].spec, jobs_[j].nodes});
    return s;
  }

  void decide(double t) {
    ClusterState state = current_state();
    auto start = std::chrono::steady_clock::now();
    AllocationDecision d;
    try {
      d = allocate(state, cfg_.policy);
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw SolverError("policy failed at t=" + std::to_string(t) + ": " + e.what());
    }
    double solve_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    std::vector<double> pause_until;
    for (std::size_t j : running_) pause_until.push_back(jobs_[j].pause_until);
    double extra = cfg_.charge_solver_time ? solve_ms / 1000.0 : 0.0;
    AppliedDecision applied = apply_decision(state, pause_until, d, t, extra);

    DecisionRecord rec;
    rec.t_s = t;
    rec.n_idle = static_cast<int>(pool_.size());
    rec.objective_value = d.objective_value;
    rec.status = d.status;
    rec.bb_nodes = d.stats.bb_nodes;
    rec.solve_ms = solve_ms;
    rec.kept_current_map = true;
    for (std::size_t i = 0; i < running_.size(); ++i) {
      std::size_t j = running_[i];
      SimJob& job = jobs_[j];
      int from = static_cast<int>(job.nodes.size());
      job.nodes = applied.state.jobs[i].nodes;
      int to = static_cast<int>(job.nodes.size());
      if (job.nodes != state.jobs[i].nodes) rec.kept_current_map = false;
      if (to != from) {
        job.pause_until = applied.pause_until[i];
        job.cause = PauseCause::kRescale;
        report_.timelines[j].rescales.push_back(
            {t, d.directions[i], from, to, applied.pause_s[i], false});
      }
      rec.jobs.push_back({job.spec->name, to, d.directions[i], applied.pause_s[i]});
    }
    report_.decisions.push_back(std::move(rec));
  }

  bool all_done() const {
    return next_arrival_ == order_.size() && pending_.empty() && running_.empty();
  }

  double next_trigger(double t, double t_stop) const {
    double next = t_stop;
    if (next_event_ < log_.events.size()) next = std::min(next, log_.events[next_event_].t_s);
    if (next_arrival_ < order_.size()) {
      next = std::min(next, trainers_[order_[next_arrival_]].arrival_s);
    }
    for (std::size_t j : running_) {
      const SimJob& job = jobs_[j];
      double rate = delivered_rate(*job.spec, static_cast<int>(job.nodes.size()));
      if (rate <= 0.0) continue;
      double remaining = job.spec->total_samples - job.samples;
      double done_at = std::max(t, job.pause_until) + remaining / rate;
      next = std::min(next, done_at);
    }
    return std::max(next, t);
  }

  void advance(double from, double to) {
    if (running_.empty()) return;
    ClusterState state = current_state();
    std::vector<double> pause_until, remaining;
    for (std::size_t j : running_) {
      pause_until.push_back(jobs_[j].pause_until);
      remaining.push_back(jobs_[j].spec->total_samples - jobs_[j].samples);
    }
    Accrual a = accrue(state, pause_until, remaining, from, to);
    EventWindow* window = report_.event_windows.empty() ? nullptr : &report_.event_windows.back();
    std::vector<std::size_t> still_running;
    for (std::size_t i = 0; i < running_.size(); ++i) {
      std::size_t j = running_[i];
      SimJob& job = jobs_[j];
      TrainerTimeline& tl = report_.timelines[j];
      int n = static_cast<int>(job.nodes.size());
      double pause_end = std::clamp(job.pause_until, from, to);
      double end = a.completion_s[i] ? *a.completion_s[i] : to;
      append_interval(tl, from, pause_end, n, true);
      append_interval(tl, pause_end, end, n, false);

      // Sub-ulp leftovers from the crossing time count as completion.
      bool done = a.completion_s[i].has_value() ||
                  remaining[i] - a.delta[i] <= 1e-12 * job.spec->total_samples;
      job.samples = done ? job.spec->total_samples : job.samples + a.delta[i];
      tl.samples = job.samples;
      report_.a_e += a.delta[i];
      if (!report_.decisions.empty()) report_.decisions.back().outcome_samples += a.delta[i];
      double loss = a.paused_loss[i];
      if (job.cause == PauseCause::kPreemption) {
        report_.preemption_cost_samples += loss;
        if (window) window->preemption_cost_samples += loss;
      } else {
        report_.rescale_cost_samples += loss;
        if (window) window->rescale_cost_samples += loss;
      }
      if (window) window->outcome_samples += a.delta[i];

      if (done) {
        job.phase = Phase::kDone;
        job.nodes.clear();
        tl.completion_s = a.completion_s[i] ? *a.completion_s[i] : to;
        ++report_.completed;
        completed_flag_ = true;
      } else {
        still_running.push_back(j);
      }
    }
    running_ = std::move(still_running);
  }

  SimulationReport finish() {
    if (!report_.event_windows.empty()) report_.event_windows.back().end_s = report_.t_end_s;
    // Windows opened by events at the stopping instant cover nothing.
    while (!report_.event_windows.empty() &&
           report_.event_windows.back().t_s >= report_.t_end_s &&
           report_.t_end_s > report_.t_start_s) {
      report_.event_windows.pop_back();
    }
    report_.resource_node_hours =
        trace::node_seconds(log_, report_.t_start_s, report_.t_end_s) / 3600.0;
    return std::move(report_);
  }

  const trace::EventLog& log_;
  const std::vector<TrainerSpec>& trainers_;
  SimulationConfig cfg_;
  std::vector<SimJob> jobs_;
  std::vector<std::size_t> order_;
  std::deque<std::size_t> pending_;
  std::vector<std::size_t> running_;
  NodeSet pool_;
  std::size_t next_event_ = 0;
  std::size_t next_arrival_ = 0;
  bool completed_flag_ = false;
  SimulationReport report_;
};

}  // namespace

SimulationReport run(const trace::EventLog& log, const std::vector<TrainerSpec>& trainers,
                     const SimulationConfig& config) {
  return Simulation(log, trainers, config).run();
}

}  // namespace fragtrain
