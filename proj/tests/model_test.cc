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

#include <gtest/gtest.h>

#include <sstream>

#include "fragtrain/errors.h"
#include "test_support.h"

namespace fragtrain {
namespace {

using testing::nodes;
using testing::shufflenet_curve;
using testing::trainer;

bool has_violation(const std::vector<Violation>& v, Violation::Kind kind, const char* text) {
  for (const auto& x : v) {
    if (x.kind == kind && x.message.find(text) != std::string::npos) return true;
  }
  return false;
}

TEST(ValidateState, DisjointJobsWithinBoundsAreValid) {
  ClusterState s;
  s.idle_nodes = nodes({"a", "b", "c", "d"});
  s.jobs.push_back({trainer("x", shufflenet_curve(), 1, 4), nodes({"a", "b"})});
  s.jobs.push_back({trainer("y", shufflenet_curve(), 2, 4), nodes({"c", "d"})});
  EXPECT_TRUE(validate_state(s).empty());
}

TEST(ValidateState, DoubleAssignedNode) {
  ClusterState s;
  s.idle_nodes = nodes({"a", "b"});
  s.jobs.push_back({trainer("x", shufflenet_curve(), 1, 4), nodes({"a"})});
  s.jobs.push_back({trainer("y", shufflenet_curve(), 1, 4), nodes({"a", "b"})});
  EXPECT_TRUE(has_violation(validate_state(s), Violation::Kind::kNodeDoubleAssigned,
                            "node double-assigned"));
}

TEST(ValidateState, CountBelowMinimum) {
  ClusterState s;
  s.idle_nodes = nodes({"a", "b"});
  s.jobs.push_back({trainer("x", shufflenet_curve(), 2, 4), nodes({"a"})});
  EXPECT_TRUE(has_violation(validate_state(s), Violation::Kind::kCountBelowMinimum,
                            "count below minimum"));
}

TEST(ValidateState, CountAboveMaximum) {
  ClusterState s;
  s.idle_nodes = nodes({"a", "b", "c"});
  s.jobs.push_back({trainer("x", shufflenet_curve(), 1, 2), nodes({"a", "b", "c"})});
  auto v = validate_state(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::kCountAboveMaximum);
}

TEST(ValidateState, IdleJobIsValidRegardlessOfMinimum) {
  ClusterState s;
  s.jobs.push_back({trainer("x", shufflenet_curve(), 8, 16), {}});
  EXPECT_TRUE(validate_state(s).empty());
}

TEST(ClusterState, UniverseIncludesHeldNodes) {
  ClusterState s;
  s.idle_nodes = nodes({"a"});
  s.jobs.push_back({trainer("x", shufflenet_curve(), 1, 4), nodes({"b"})});
  EXPECT_EQ(s.universe(), nodes({"a", "b"}));
  EXPECT_EQ(s.current_counts(), std::vector<int>{1});
}

TEST(ValidateTrainer, Invariants) {
  EXPECT_NO_THROW(validate_trainer(trainer("ok", shufflenet_curve(), 1, 64)));
  EXPECT_THROW(validate_trainer(trainer("", shufflenet_curve(), 1, 64)), InputError);
  EXPECT_THROW(validate_trainer(trainer("a", shufflenet_curve(), 0, 64)), InputError);
  EXPECT_THROW(validate_trainer(trainer("a", shufflenet_curve(), 4, 2)), InputError);
  EXPECT_THROW(validate_trainer(trainer("a", shufflenet_curve(), 1, 65)), InputError);
  EXPECT_THROW(validate_trainer(trainer("a", shufflenet_curve(), 1, 64, -1.0)), InputError);
  EXPECT_THROW(validate_trainer(trainer("a", shufflenet_curve(), 1, 64, 0, 0, 0.0)), InputError);
  EXPECT_THROW(validate_trainer(trainer("a", shufflenet_curve(), 1, 64, 0, 0, 1, -1)), InputError);
  // Scale-down slower than scale-up is allowed.
  EXPECT_NO_THROW(validate_trainer(trainer("a", shufflenet_curve(), 1, 64, 5.0, 50.0)));
}

TEST(ObjectiveMetric, ParsesNames) {
  EXPECT_EQ(parse_objective_metric("throughput"), ObjectiveMetric::kThroughput);
  EXPECT_EQ(parse_objective_metric("scaling-efficiency"), ObjectiveMetric::kScalingEfficiency);
  EXPECT_THROW(parse_objective_metric("speed"), InputError);
  EXPECT_EQ(to_string(ObjectiveMetric::kScalingEfficiency), "scaling-efficiency");
}

TEST(Json, ClusterStateRoundTrip) {
  ClusterState s;
  s.idle_nodes = nodes({"a", "b", "c"});
  s.jobs.push_back({trainer("x", shufflenet_curve(), 1, 4, 20, 5, 1e6, 3.5), nodes({"a"})});
  s.jobs.push_back({trainer("y", ScalabilityCurve({2, 3}, {0.25, 0.5}), 2, 3), {}});
  EXPECT_EQ(cluster_state_from_json(nlohmann::json::parse(to_json(s).dump())), s);
}

TEST(Json, TrainerFileRoundTrip) {
  std::vector<TrainerSpec> ts{trainer("x", shufflenet_curve(), 1, 64, 20, 10, 5e8),
                              trainer("y", shufflenet_curve(), 2, 8, 0, 0, 1, 100)};
  std::stringstream buf;
  write_trainers(buf, ts);
  EXPECT_EQ(read_trainers(buf), ts);
}

TEST(Json, RejectsBadTrainerFiles) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_trainers(in);
  };
  const std::string ok =
      R"({"name":"a","n_min":1,"n_max":2,"r_up_s":0,"r_dw_s":0,"total_samples":1,)"
      R"("curve":[[1,1],[2,2]],"arrival_s":0)";
  EXPECT_EQ(parse("[" + ok + "}]").size(), 1u);
  EXPECT_THROW(parse("{}"), InputError);
  EXPECT_THROW(parse("[" + ok + "}," + ok + "}]"), InputError);     // duplicate name
  EXPECT_THROW(parse("[" + ok + R"(,"extra":1})" + "]"), InputError);  // unknown field
  EXPECT_THROW(parse(R"([{"name":"a"}])"), InputError);              // missing fields
  EXPECT_THROW(parse("[" + ok.substr(0, ok.find("\"curve\"")) +
                     R"("curve":[[2,1],[1,2]],"arrival_s":0}])"),
               InputError);
  EXPECT_THROW(parse("not json"), InputError);
}

}  // namespace
}  // namespace fragtrain
