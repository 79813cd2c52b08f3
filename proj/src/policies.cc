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

#include "fragtrain/policies.h"

#include <algorithm>

namespace fragtrain {

std::string_view to_string(PolicyKind p) {
  return p == PolicyKind::kMilp ? "milp" : "equal-share";
}

std::string_view to_string(SolverKind s) {
  return s == SolverKind::kBranchAndBound ? "bb" : "count-dp";
}

std::vector<int> equal_share_counts(const ClusterState& state) {
  const int jobs = static_cast<int>(state.jobs.size());
  std::vector<int> counts(jobs, 0);
  std::vector<bool> open(jobs, true);
  int fixed_total = 0;
  const int pool = state.universe_size();
  while (true) {
    std::vector<int> idx;
    for (int j = 0; j < jobs; ++j) {
      if (open[j]) idx.push_back(j);
    }
    if (idx.empty()) break;
    const int remaining = pool - fixed_total;
    const int k = static_cast<int>(idx.size());
    std::vector<int> target(k, remaining / k);
    for (int i = 0; i < remaining % k; ++i) ++target[i];

    bool capped = false;
    for (int i = 0; i < k; ++i) {
      const auto& spec = state.jobs[idx[i]].spec;
      if (target[i] > spec.n_max) {
        counts[idx[i]] = spec.n_max;
        fixed_total += spec.n_max;
        open[idx[i]] = false;
        capped = true;
      }
    }
    if (capped) continue;

    int dropped = -1;
    for (int i = k - 1; i >= 0 && dropped < 0; --i) {
      if (target[i] < state.jobs[idx[i]].spec.n_min) dropped = idx[i];
    }
    if (dropped >= 0) {
      counts[dropped] = 0;
      open[dropped] = false;
      continue;
    }
    for (int i = 0; i < k; ++i) counts[idx[i]] = target[i];
    break;
  }
  return counts;
}

AllocationDecision equal_share(const ClusterState& state, const PolicyConfig& config) {
  std::vector<int> counts = equal_share_counts(state);
  return make_decision(state, counts, config.solve, SolveStatus::kHeuristic);
}

AllocationDecision milp_allocate(const ClusterState& state, const PolicyConfig& config) {
  if (config.solver == SolverKind::kBranchAndBound) {
    return solve_bb(build_milp(state, config.solve), config.solve.timeout_ms);
  }
  if (config.solve.timeout_ms <= 0) {
    return keep_current(state, config.solve, SolveStatus::kTimeoutKeptCurrent);
  }
  return solve_count_dp(state, config.solve);
}

AllocationDecision allocate(const ClusterState& state, const PolicyConfig& config) {
  return config.policy == PolicyKind::kMilp ? milp_allocate(state, config)
                                            : equal_share(state, config);
}

std::size_t admit_fcfs(std::size_t queued, std::size_t running, int pj_max) {
  std::size_t cap = pj_max > 0 ? static_cast<std::size_t>(pj_max) : 0;
  if (running >= cap) return 0;
  return std::min(queued, cap - running);
}

}  // namespace fragtrain
