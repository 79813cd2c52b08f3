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

#include <cstddef>
#include <string_view>

#include "fragtrain/milp.h"

namespace fragtrain {

enum class PolicyKind { kMilp, kEqualShare };
enum class SolverKind { kBranchAndBound, kCountDp };

std::string_view to_string(PolicyKind p);
std::string_view to_string(SolverKind s);

struct PolicyConfig {
  int pj_max = 10;  // maximum concurrently admitted jobs
  PolicyKind policy = PolicyKind::kMilp;
  SolverKind solver = SolverKind::kCountDp;
  SolveConfig solve;
};

// Spreads the pool evenly over the jobs in arrival order. Targets outside a
// job's admissible range are clamped (above n_max to n_max; below n_min the
// latest-arrived such job drops to 0) and the rest is re-spread until
// nothing changes.
std::vector<int> equal_share_counts(const ClusterState& state);
AllocationDecision equal_share(const ClusterState& state, const PolicyConfig& config);

// MILP policy: builds and solves the model with the configured solver.
AllocationDecision milp_allocate(const ClusterState& state, const PolicyConfig& config);

// Dispatches on config.policy.
AllocationDecision allocate(const ClusterState& state, const PolicyConfig& config);

// How many of `queued` pending jobs (FCFS prefix) to admit.
std::size_t admit_fcfs(std::size_t queued, std::size_t running, int pj_max);

}  // namespace fragtrain
