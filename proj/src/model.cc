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

#include "fragtrain/model.h"

#include <fstream>
#include <map>
#include <sstream>

#include "fragtrain/errors.h"

namespace fragtrain {

std::string_view to_string(ObjectiveMetric metric) {
  switch (metric) {
    case ObjectiveMetric::kThroughput:
      return "throughput";
    case ObjectiveMetric::kScalingEfficiency:
      return "scaling-efficiency";
  }
  return "unknown";
}

ObjectiveMetric parse_objective_metric(std::string_view text) {
  if (text == "throughput") return ObjectiveMetric::kThroughput;
  if (text == "scaling-efficiency") return ObjectiveMetric::kScalingEfficiency;
  throw InputError("unknown objective metric '" + std::string(text) + "'");
}

void validate_trainer(const TrainerSpec& s) {
  auto fail = [&](const std::string& why) {
    throw InputError("trainer '" + s.name + "': " + why);
  };
  if (s.name.empty()) throw InputError("trainer with empty name");
  if (s.n_min < 1) fail("n_min must be >= 1");
  if (s.n_max < s.n_min) fail("n_max must be >= n_min");
  if (s.curve.size() < 2) fail("missing scalability curve");
  if (s.n_max > s.curve.max_nodes()) fail("n_max exceeds the last curve grid point");
  // Counts below the first grid point have no defined throughput.
  if (s.n_min < s.curve.min_nodes()) fail("n_min is below the first curve grid point");
  if (s.r_up_s < 0.0 || s.r_dw_s < 0.0) fail("rescale costs must be non-negative");
  if (!(s.total_samples > 0.0)) fail("total_samples must be positive");
  if (s.arrival_s < 0.0) fail("arrival_s must be non-negative");
}

NodeSet ClusterState::universe() const {
  NodeSet all = idle_nodes;
  for (const auto& job : jobs) all.insert(job.nodes.begin(), job.nodes.end());
  return all;
}

std::vector<int> ClusterState::current_counts() const {
  std::vector<int> counts;
  counts.reserve(jobs.size());
  for (const auto& job : jobs) counts.push_back(job.count());
  return counts;
}

std::vector<Violation> validate_state(const ClusterState& state) {
  std::vector<Violation> out;
  std::map<NodeId, std::size_t> owner;
  for (std::size_t j = 0; j < state.jobs.size(); ++j) {
    const auto& job = state.jobs[j];
    for (const auto& n : job.nodes) {
      auto [it, inserted] = owner.emplace(n, j);
      if (!inserted) {
        out.push_back({Violation::Kind::kNodeDoubleAssigned,
                       "node double-assigned: '" + n + "' held by '" +
                           state.jobs[it->second].spec.name + "' and '" + job.spec.name + "'"});
      }
    }
    int c = job.count();
    if (c > 0 && c < job.spec.n_min) {
      out.push_back({Violation::Kind::kCountBelowMinimum,
                     "count below minimum: '" + job.spec.name + "' holds " + std::to_string(c) +
                         " < n_min " + std::to_string(job.spec.n_min)});
    }
    if (c > job.spec.n_max) {
      out.push_back({Violation::Kind::kCountAboveMaximum,
                     "count above maximum: '" + job.spec.name + "' holds " + std::to_string(c) +
                         " > n_max " + std::to_string(job.spec.n_max)});
    }
  }
  return out;
}

nlohmann::json to_json(const TrainerSpec& s) {
  nlohmann::json curve = nlohmann::json::array();
  for (int i = 0; i < s.curve.size(); ++i) {
    curve.push_back(nlohmann::json::array({s.curve.grid()[i], s.curve.rates()[i]}));
  }
  return {{"name", s.name},         {"n_min", s.n_min},
          {"n_max", s.n_max},       {"r_up_s", s.r_up_s},
          {"r_dw_s", s.r_dw_s},     {"total_samples", s.total_samples},
          {"curve", curve},         {"arrival_s", s.arrival_s}};
}

TrainerSpec trainer_from_json(const nlohmann::json& j) {
  static const char* kFields[] = {"name",   "n_min",         "n_max", "r_up_s",
                                  "r_dw_s", "total_samples", "curve", "arrival_s"};
  if (!j.is_object()) throw InputError("trainer entry is not a JSON object");
  for (const char* f : kFields) {
    if (!j.contains(f)) throw InputError(std::string("trainer entry missing field '") + f + "'");
  }
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* f : kFields) known = known || key == f;
    if (!known) throw InputError("trainer entry has unknown field '" + key + "'");
  }
  TrainerSpec s;
  try {
    s.name = j.at("name").get<std::string>();
    s.n_min = j.at("n_min").get<int>();
    s.n_max = j.at("n_max").get<int>();
    s.r_up_s = j.at("r_up_s").get<double>();
    s.r_dw_s = j.at("r_dw_s").get<double>();
    s.total_samples = j.at("total_samples").get<double>();
    s.arrival_s = j.at("arrival_s").get<double>();
    std::vector<int> grid;
    std::vector<double> rates;
    for (const auto& point : j.at("curve")) {
      if (!point.is_array() || point.size() != 2) {
        throw InputError("trainer '" + s.name + "': curve points must be [nodes, rate] pairs");
      }
      grid.push_back(point[0].get<int>());
      rates.push_back(point[1].get<double>());
    }
    s.curve = ScalabilityCurve(std::move(grid), std::move(rates));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("trainer '" + s.name + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError("trainer '" + s.name + "': " + e.what());
  }
  validate_trainer(s);
  return s;
}

nlohmann::json to_json(const ClusterState& state) {
  nlohmann::json jobs = nlohmann::json::array();
  for (const auto& job : state.jobs) {
    jobs.push_back({{"spec", to_json(job.spec)}, {"current_nodes", job.nodes}});
  }
  return {{"idle_nodes", state.idle_nodes}, {"jobs", jobs}};
}

ClusterState cluster_state_from_json(const nlohmann::json& j) {
  ClusterState state;
  try {
    state.idle_nodes = j.at("idle_nodes").get<NodeSet>();
    for (const auto& job : j.at("jobs")) {
      state.jobs.push_back(
          {trainer_from_json(job.at("spec")), job.at("current_nodes").get<NodeSet>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("cluster state: ") + e.what());
  }
  return state;
}

std::vector<TrainerSpec> read_trainers(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("trainer file: ") + e.what());
  }
  if (!j.is_array()) throw InputError("trainer file must hold a JSON array");
  std::vector<TrainerSpec> out;
  for (const auto& entry : j) out.push_back(trainer_from_json(entry));
  std::set<std::string> names;
  for (const auto& t : out) {
    if (!names.insert(t.name).second) throw InputError("duplicate trainer name '" + t.name + "'");
  }
  return out;
}

std::vector<TrainerSpec> read_trainers_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trainer file '" + path + "'");
  return read_trainers(in);
}

void write_trainers(std::ostream& out, const std::vector<TrainerSpec>& trainers) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : trainers) j.push_back(to_json(t));
  out << j.dump(2) << '\n';
}

}  // namespace fragtrain
