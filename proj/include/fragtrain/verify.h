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
#include <functional>
#include <iosfwd>
#include <random>
#include <string>

#include "fragtrain/milp.h"

namespace fragtrain::verify {

struct Instance {
  ClusterState state;
  SolveConfig config;
};

struct InstanceBounds {
  int max_jobs = 4;
  int max_nodes = 12;
  int min_grid = 2;
  int max_grid = 5;
};

// Random jobs with random piecewise-linear curves, costs, objective metric,
// T_fwd and a random current map (occasionally below n_min).
Instance random_instance(std::mt19937_64& rng, const InstanceBounds& bounds);

nlohmann::json to_json(const Instance& instance);

struct Options {
  int instances = 200;
  std::uint64_t seed = 7;
  InstanceBounds bounds;
  std::int64_t bb_timeout_ms = 60'000;
  // Test hook: perturbs the count-DP result before comparison.
  std::function<void(AllocationDecision&)> fault;
};

struct Outcome {
  int checked = 0;
  bool ok = true;
  std::string reproducer;  // JSON of the first disagreeing instance
};

// Cross-checks branch and bound, count DP and enumeration on random
// instances. Stops at the first disagreement beyond 1e-9 relative.
Outcome run(const Options& options);

// |a - b| <= tol * max(1, |a|, |b|)
bool agree(double a, double b, double tol = 1e-9);

}  // namespace fragtrain::verify
