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

#include "fragtrain/report_io.h"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fragtrain/errors.h"
#include "fragtrain/format.h"

namespace fragtrain::report {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

template <typename F>
std::string joined(const std::vector<JobDecision>& jobs, F value) {
  std::string s;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (i) s += '|';
    s += jobs[i].name + '=' + value(jobs[i]);
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw InputError("cannot write " + path.string());
}

}  // namespace

json efficiency_json(const EfficiencyReport& e) {
  json windows = json::array();
  for (const auto& w : e.per_window) {
    windows.push_back({{"t0_s", w.t0_s},
                       {"t1_s", w.t1_s},
                       {"eq_nodes", w.eq_nodes},
                       {"a_e", w.a_e},
                       {"a_s", w.a_s},
                       {"u_pct", optional_number(w.u_pct)}});
  }
  return {{"resource_node_hours", e.resource_node_hours},
          {"eq_nodes", e.eq_nodes},
          {"a_e", e.a_e},
          {"a_s", e.a_s},
          {"u_pct", optional_number(e.u_pct)},
          {"baseline_infeasible", e.baseline_infeasible},
          {"window_s", e.window_s},
          {"per_window", windows}};
}

json summary_json(const SimulationReport& r, const SimulationConfig& c,
                  const EfficiencyReport& e) {
  json jobs = json::array();
  for (const auto& tl : r.timelines) {
    jobs.push_back({{"name", tl.name},
                    {"arrival_s", tl.arrival_s},
                    {"admit_s", optional_number(tl.admit_s)},
                    {"completion_s", optional_number(tl.completion_s)},
                    {"samples", tl.samples},
                    {"rescales", tl.rescales.size()}});
  }
  json config = {{"policy", std::string(to_string(c.policy.policy))},
                 {"solver", std::string(to_string(c.policy.solver))},
                 {"tfwd_s", c.policy.solve.t_fwd_s},
                 {"pjmax", c.policy.pj_max},
                 {"objective", std::string(to_string(c.policy.solve.metric))},
                 {"timeout_ms", c.policy.solve.timeout_ms},
                 {"charge_solver_time", c.charge_solver_time},
                 {"horizon_s", optional_number(c.horizon_s)}};
  return {{"config", config},
          {"t_start_s", r.t_start_s},
          {"t_end_s", r.t_end_s},
          {"events", r.event_windows.size()},
          {"decisions", r.decisions.size()},
          {"completed", r.completed},
          {"a_e", r.a_e},
          {"rescale_cost_samples", r.rescale_cost_samples},
          {"preemption_cost_samples", r.preemption_cost_samples},
          {"rescale_cost_per_event", r.rescale_cost_per_event()},
          {"mean_runtime_s", r.mean_runtime_s()},
          {"resource_node_hours", r.resource_node_hours},
          {"u_pct", optional_number(e.u_pct)},
          {"jobs", jobs}};
}

void write_decisions_csv(std::ostream& out, const SimulationReport& r) {
  out << "t_s,n_idle,counts,directions,pause_s,objective_value,status,bb_nodes,"
         "kept_current_map,outcome_samples\n";
  for (const auto& d : r.decisions) {
    out << format_double(d.t_s) << ',' << d.n_idle << ','
        << joined(d.jobs, [](const JobDecision& j) { return std::to_string(j.count); }) << ','
        << joined(d.jobs,
                  [](const JobDecision& j) { return std::string(to_string(j.direction)); })
        << ',' << joined(d.jobs, [](const JobDecision& j) { return format_double(j.pause_s); })
        << ',' << format_double(d.objective_value) << ',' << to_string(d.status) << ','
        << d.bb_nodes << ',' << (d.kept_current_map ? 1 : 0) << ','
        << format_double(d.outcome_samples) << '\n';
  }
}

void write_timeline_csv(std::ostream& out, const SimulationReport& r) {
  out << "name,arrival_s,admit_s,completion_s,start_s,end_s,nodes,paused\n";
  for (const auto& tl : r.timelines) {
    for (const auto& iv : tl.intervals) {
      out << tl.name << ',' << format_double(tl.arrival_s) << ',' << optional_field(tl.admit_s)
          << ',' << optional_field(tl.completion_s) << ',' << format_double(iv.start_s) << ','
          << format_double(iv.end_s) << ',' << iv.nodes << ',' << (iv.paused ? 1 : 0) << '\n';
    }
  }
}

void write_windows_csv(std::ostream& out, const EfficiencyReport& e) {
  out << "t0_s,t1_s,eq_nodes,a_e,a_s,u_pct\n";
  for (const auto& w : e.per_window) {
    out << format_double(w.t0_s) << ',' << format_double(w.t1_s) << ','
        << format_double(w.eq_nodes) << ',' << format_double(w.a_e) << ','
        << format_double(w.a_s) << ',' << optional_field(w.u_pct) << '\n';
  }
}

void write_trace_stats_csv(std::ostream& out, const trace::TraceStats& s) {
  out << "metric,value\n"
      << "hours," << format_double(s.hours) << '\n'
      << "inc_per_h," << format_double(s.inc_per_h) << '\n'
      << "dec_per_h," << format_double(s.dec_per_h) << '\n'
      << "eq_nodes," << format_double(s.eq_nodes) << '\n'
      << "idle_node_hours," << format_double(s.idle_node_hours) << '\n'
      << "fragments," << s.fragment_lengths_s.size() << '\n';
}

void write_cdf_csv(std::ostream& out, const trace::TraceStats& s) {
  out << "length_s,fraction\n";
  for (const auto& [len, frac] : s.cdf) out << format_double(len) << ',' << format_double(frac) << '\n';
}

void write_run(const std::string& dir, const SimulationReport& r, const SimulationConfig& c,
               const EfficiencyReport& e) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir + ": " + ec.message());
  const fs::path base(dir);
  write_file(base / kSummaryFile, summary_json(r, c, e).dump(2) + "\n");
  write_file(base / kEfficiencyFile, efficiency_json(e).dump(2) + "\n");
  std::ostringstream decisions, timeline, windows;
  write_decisions_csv(decisions, r);
  write_timeline_csv(timeline, r);
  write_windows_csv(windows, e);
  write_file(base / kDecisionsFile, decisions.str());
  write_file(base / kTimelineFile, timeline.str());
  write_file(base / kWindowsFile, windows.str());
}

}  // namespace fragtrain::report
