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

#include <iosfwd>
#include <string>

#include "fragtrain/metrics.h"
#include "fragtrain/simulator.h"
#include "fragtrain/trace.h"

namespace fragtrain::report {

// Run-level totals plus the configuration that produced them.
nlohmann::json summary_json(const SimulationReport& report, const SimulationConfig& config,
                            const EfficiencyReport& efficiency);
nlohmann::json efficiency_json(const EfficiencyReport& efficiency);

// One row per policy invocation. Per-job fields are `name=value` pairs
// joined with '|', in admission order.
void write_decisions_csv(std::ostream& out, const SimulationReport& report);
// One row per timeline interval.
void write_timeline_csv(std::ostream& out, const SimulationReport& report);
void write_windows_csv(std::ostream& out, const EfficiencyReport& efficiency);
void write_trace_stats_csv(std::ostream& out, const trace::TraceStats& stats);
void write_cdf_csv(std::ostream& out, const trace::TraceStats& stats);

inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kDecisionsFile = "decisions.csv";
inline constexpr const char* kTimelineFile = "timeline.csv";
inline constexpr const char* kEfficiencyFile = "efficiency.json";
inline constexpr const char* kWindowsFile = "windows.csv";

// Writes all five run reports into `dir`, creating it if needed.
void write_run(const std::string& dir, const SimulationReport& report,
               const SimulationConfig& config, const EfficiencyReport& efficiency);

}  // namespace fragtrain::report
