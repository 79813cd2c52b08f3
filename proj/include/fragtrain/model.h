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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fragtrain/scalability.h"
#include "json.hpp"

namespace fragtrain {

// Node names pass through from logs unchanged.
using NodeId = std::string;
using NodeSet = std::set<NodeId>;

enum class ObjectiveMetric { kThroughput, kScalingEfficiency };

std::string_view to_string(ObjectiveMetric metric);
// Accepts "throughput" and "scaling-efficiency". Throws InputError otherwise.
ObjectiveMetric parse_objective_metric(std::string_view text);

// An elastic job: admissible sizes, rescale pauses, throughput curve and
// total work.
struct TrainerSpec {
  std::string name;
  int n_min = 1;
  int n_max = 1;
  double r_up_s = 0.0;
  double r_dw_s = 0.0;
  double total_samples = 1.0;
  ScalabilityCurve curve;
  double arrival_s = 0.0;

  // True for 0 and for every count in [n_min, n_max].
  bool admissible(int n) const { return n == 0 || (n >= n_min && n <= n_max); }

  bool operator==(const TrainerSpec&) const = default;
};

// Throws InputError describing the first broken invariant.
void validate_trainer(const TrainerSpec& spec);

struct JobState {
  TrainerSpec spec;
  NodeSet nodes;  // current map c restricted to this job

  int count() const { return static_cast<int>(nodes.size()); }
  bool operator==(const JobState&) const = default;
};

// The harvestable pool plus the running jobs in arrival order.
//
// `idle_nodes` is the whole pool N: nodes the batch scheduler cannot use,
// whether or not a job currently holds them.
struct ClusterState {
  NodeSet idle_nodes;
  std::vector<JobState> jobs;

  // idle_nodes together with every node a job holds.
  NodeSet universe() const;
  int universe_size() const { return static_cast<int>(universe().size()); }
  std::vector<int> current_counts() const;

  bool operator==(const ClusterState&) const = default;
};

struct Violation {
  enum class Kind { kNodeDoubleAssigned, kCountBelowMinimum, kCountAboveMaximum };
  Kind kind;
  std::string message;
};

// Empty result means the map is valid: every node belongs to at most one job
// and every job holds 0 nodes or a count within [n_min, n_max].
std::vector<Violation> validate_state(const ClusterState& state);

struct Event {
  double t_s = 0.0;
  std::vector<NodeId> joins;
  std::vector<NodeId> leaves;

  bool operator==(const Event&) const = default;
};

struct Fragment {
  NodeId node;
  double start_s = 0.0;
  double end_s = 0.0;

  double length_s() const { return end_s - start_s; }
  bool operator==(const Fragment&) const = default;
};

// JSON forms. Trainer files are arrays of objects with the TrainerSpec field
// names; curves are arrays of [nodes, samples_per_second] pairs.
nlohmann::json to_json(const TrainerSpec& spec);
TrainerSpec trainer_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClusterState& state);
ClusterState cluster_state_from_json(const nlohmann::json& j);

std::vector<TrainerSpec> read_trainers(std::istream& in);
std::vector<TrainerSpec> read_trainers_file(const std::string& path);
void write_trainers(std::ostream& out, const std::vector<TrainerSpec>& trainers);

}  // namespace fragtrain
