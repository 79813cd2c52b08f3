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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fragtrain/model.h"

namespace fragtrain::trace {

// Node join/leave events, one per distinct timestamp, over [t_start_s, t_end_s].
struct EventLog {
  std::vector<Event> events;
  double t_start_s = 0.0;
  double t_end_s = 0.0;

  double duration_s() const { return t_end_s - t_start_s; }
  bool operator==(const EventLog&) const = default;
};

// Reads JSON Lines records {"t": seconds, "join": [ids], "leave": [ids]}.
// Records sharing a timestamp are merged into one event; a record with both
// lists empty only extends the log end. Throws TraceError (with the line
// number) for malformed records, decreasing timestamps, joins of present
// nodes and leaves of absent ones.
EventLog parse(std::istream& in);
EventLog read_file(const std::string& path);

// One record per event, plus an empty end marker when the log extends past
// its last event. parse(write(log)) == log.
void write(std::ostream& out, const EventLog& log);

// Validates membership transitions of an in-memory log. Throws TraceError.
void validate(const EventLog& log);

// Pool size right after each event: (t_s, |N|).
std::vector<std::pair<double, int>> pool_steps(const EventLog& log);

// Integral of |N(t)| over [t0, t1] clipped to the log span, in node-seconds.
double node_seconds(const EventLog& log, double t0, double t1);

// Every maximal idle interval of every node; intervals still open at the
// log end are closed there.
std::vector<Fragment> fragments(const EventLog& log);

struct TraceStats {
  double hours = 0.0;
  double inc_per_h = 0.0;
  double dec_per_h = 0.0;
  double eq_nodes = 0.0;
  double idle_node_hours = 0.0;
  std::vector<double> fragment_lengths_s;          // ascending
  std::vector<std::pair<double, double>> cdf;      // (length_s, cumulative fraction)
};

// Throws InputError for a zero-duration log. Fragments shorter than
// `min_fragment_s` are left out of the length distribution.
TraceStats stats(const EventLog& log, double min_fragment_s = 0.0);

struct SynthConfig {
  int n_pool = 64;
  double join_rate_per_h = 10.0;
  double mean_residency_s = 3600.0;
  double duration_s = 86400.0;
  int initial_present = 0;  // nodes already idle at t = 0
};

// Poisson join arrivals (each picks a uniformly random absent node) with
// exponential idle residency, truncated at duration_s. Deterministic in `seed`.
EventLog synth(const SynthConfig& config, std::uint64_t seed);

}  // namespace fragtrain::trace
