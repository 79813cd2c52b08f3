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

#include "fragtrain/verify.h"

#include <algorithm>
#include <cmath>

#include "fragtrain/format.h"

namespace fragtrain::verify {

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

std::string padded(const std::string& prefix, int i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
  return prefix + digits;
}

ScalabilityCurve random_curve(std::mt19937_64& rng, int points, int top) {
  std::vector<int> pool(top);
  for (int i = 0; i < top; ++i) pool[i] = i + 1;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<int> grid(pool.begin(), pool.begin() + points);
  std::sort(grid.begin(), grid.end());
  std::vector<double> rates;
  double rate = uniform_real(rng, 0.5, 20.0);
  for (int i = 0; i < points; ++i) {
    rates.push_back(rate);
    // Mostly increasing, sometimes flat or decreasing past a knee.
    rate = std::max(0.0, rate + uniform_real(rng, -0.3, 1.0) * rate);
  }
  return ScalabilityCurve(std::move(grid), std::move(rates));
}

}  // namespace

Instance random_instance(std::mt19937_64& rng, const InstanceBounds& b) {
  Instance inst;
  const int jobs = uniform_int(rng, 1, b.max_jobs);
  const int pool = uniform_int(rng, 1, b.max_nodes);
  std::vector<NodeId> nodes;
  for (int i = 0; i < pool; ++i) nodes.push_back(padded("n", i));
  inst.state.idle_nodes.insert(nodes.begin(), nodes.end());
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::size_t next_free = 0;

  for (int j = 0; j < jobs; ++j) {
    TrainerSpec spec;
    spec.name = padded("j", j);
    int top = std::max(b.max_grid, pool + 2);
    int points = uniform_int(rng, b.min_grid, std::min(b.max_grid, top));
    spec.curve = random_curve(rng, points, top);
    spec.n_min = uniform_int(rng, spec.curve.min_nodes(), spec.curve.max_nodes());
    spec.n_max = uniform_int(rng, spec.n_min, spec.curve.max_nodes());
    spec.r_up_s = uniform_real(rng, 0.0, 60.0);
    spec.r_dw_s = uniform_real(rng, 0.0, 60.0);
    spec.total_samples = 1e9;

    int free = pool - static_cast<int>(next_free);
    int want = 0;
    double roll = uniform_real(rng, 0.0, 1.0);
    if (roll < 0.15 && free > 0) {
      want = uniform_int(rng, 1, std::min(free, spec.n_max));  // may be below n_min
    } else if (roll < 0.75 && free >= spec.n_min) {
      want = uniform_int(rng, spec.n_min, std::min(free, spec.n_max));
    }
    NodeSet held(nodes.begin() + next_free, nodes.begin() + next_free + want);
    next_free += want;
    inst.state.jobs.push_back({std::move(spec), std::move(held)});
  }
  inst.config.metric =
      uniform_int(rng, 0, 1) ? ObjectiveMetric::kThroughput : ObjectiveMetric::kScalingEfficiency;
  inst.config.t_fwd_s = uniform_real(rng, 1.0, 600.0);
  return inst;
}

nlohmann::json to_json(const Instance& instance) {
  return {{"state", fragtrain::to_json(instance.state)},
          {"t_fwd_s", instance.config.t_fwd_s},
          {"objective", std::string(to_string(instance.config.metric))}};
}

bool agree(double a, double b, double tol) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

Outcome run(const Options& options) {
  Outcome out;
  std::mt19937_64 rng(options.seed);
  for (int i = 0; i < options.instances; ++i) {
    Instance inst = random_instance(rng, options.bounds);
    AllocationDecision ex = solve_exhaustive(inst.state, inst.config);
    AllocationDecision dp = solve_count_dp(inst.state, inst.config);
    if (options.fault) options.fault(dp);
    AllocationDecision bb = solve_bb(build_milp(inst.state, inst.config), options.bb_timeout_ms);
    ++out.checked;
    bool ok = bb.status == SolveStatus::kOptimal && agree(ex.objective_value, dp.objective_value) &&
              agree(ex.objective_value, bb.objective_value);
    if (!ok) {
      nlohmann::json rep = to_json(inst);
      rep["instance"] = i;
      rep["seed"] = options.seed;
      rep["exhaustive"] = format_double(ex.objective_value);
      rep["count_dp"] = format_double(dp.objective_value);
      rep["bb"] = format_double(bb.objective_value);
      rep["bb_status"] = std::string(to_string(bb.status));
      out.ok = false;
      out.reproducer = rep.dump();
      return out;
    }
  }
  return out;
}

}  // namespace fragtrain::verify
