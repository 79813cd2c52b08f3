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

#include "fragtrain/milp.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "fragtrain/errors.h"
#include "fragtrain/verify.h"
#include "test_support.h"

namespace fragtrain {
namespace {

using testing::linear_curve;
using testing::nodes;
using testing::numbered;
using testing::trainer;

ScalabilityCurve concave4() { return ScalabilityCurve({1, 2, 3, 4}, {1.0, 1.8, 2.4, 2.8}); }

SolveConfig config(double t_fwd, ObjectiveMetric metric = ObjectiveMetric::kThroughput) {
  SolveConfig c;
  c.t_fwd_s = t_fwd;
  c.metric = metric;
  c.timeout_ms = 60'000;
  return c;
}

ClusterState two_concave_jobs() {
  ClusterState s;
  s.idle_nodes = numbered(4);
  s.jobs.push_back({trainer("a", concave4(), 1, 4), {}});
  s.jobs.push_back({trainer("b", concave4(), 1, 4), {}});
  return s;
}

// Independent brute force of the per-job gains over every count vector.
double brute_force_best(const ClusterState& s, const SolveConfig& cfg) {
  const int pool = s.universe_size();
  std::function<double(std::size_t, int)> go = [&](std::size_t j, int left) -> double {
    if (j == s.jobs.size()) return 0.0;
    const auto& spec = s.jobs[j].spec;
    const int c = s.jobs[j].count();
    double best = -INFINITY;
    for (int n = 0; n <= std::min(left, spec.n_max); ++n) {
      if (n != 0 && n < spec.n_min) continue;
      auto f = [&](int k) {
        if (k < spec.n_min) return 0.0;
        double r = evaluate(spec.curve, k);
        return cfg.metric == ObjectiveMetric::kThroughput ? r : r / spec.curve.rates()[0];
      };
      double cost = n > c ? spec.r_up_s : (n < c ? spec.r_dw_s : 0.0);
      best = std::max(best, cfg.t_fwd_s * f(n) - f(c) * cost + go(j + 1, left - n));
    }
    return best;
  };
  return go(0, pool);
}

TEST(RescalingCost, Branches) {
  auto t = trainer("a", linear_curve(1, 8), 1, 8, 20, 5);
  EXPECT_EQ(rescaling_cost(t, 4, 4), 0.0);
  EXPECT_EQ(rescaling_cost(t, 4, 7), 20.0);
  EXPECT_EQ(rescaling_cost(t, 4, 0), 5.0);
}

TEST(DecisionGain, HandEvaluations) {
  auto t = trainer("a", linear_curve(100, 8), 1, 8, 10, 0);
  SolveConfig cfg = config(1.0);
  EXPECT_DOUBLE_EQ(decision_gain(t, 2, 2, cfg), 200.0);
  EXPECT_DOUBLE_EQ(decision_gain(t, 2, 3, cfg), 1.0 * 300 - 200.0 * 10);
  EXPECT_DOUBLE_EQ(decision_gain(t, 0, 0, cfg), 0.0);
  EXPECT_THROW(decision_gain(trainer("b", linear_curve(1, 8), 2, 4), 0, 1, cfg),
               std::out_of_range);
  EXPECT_THROW(decision_gain(t, 0, 9, cfg), std::out_of_range);
}

TEST(DecisionGain, ScalingEfficiencyUsesSpeedup) {
  auto t = trainer("a", ScalabilityCurve({2, 4}, {10.0, 15.0}), 2, 4);
  EXPECT_DOUBLE_EQ(decision_gain(t, 0, 4, config(2.0, ObjectiveMetric::kScalingEfficiency)),
                   2.0 * 1.5);
}

TEST(SolveConfig, BigMDefaultAndValidation) {
  SolveConfig c;
  EXPECT_EQ(c.resolved_big_m(10), 11);
  c.big_m = 10;
  EXPECT_THROW(c.resolved_big_m(10), InputError);
  c.big_m = 100;
  EXPECT_EQ(c.resolved_big_m(10), 100);
}

TEST(BuildMilp, VariableTallyForSmallestInstance) {
  ClusterState s;
  s.idle_nodes = nodes({"a"});
  s.jobs.push_back({trainer("j", ScalabilityCurve({1, 2}, {1.0, 2.0}), 1, 1), {}});
  MilpProblem p = build_milp(s, config(1.0));
  EXPECT_EQ(p.x.size() * p.x[0].size(), 1u);
  EXPECT_EQ(p.y_lo.size() + p.y_up.size(), 2u);
  EXPECT_EQ(p.u.size() * p.u[0].size(), 1u);
  EXPECT_EQ(p.z_mig.size(), 1u);
  EXPECT_EQ(p.z_up.size() + p.z_dw.size(), 2u);
  EXPECT_EQ(p.w[0].size(), 2u);
  EXPECT_EQ(p.count_kind(VarKind::kContinuous), 2);
  EXPECT_EQ(p.count_kind(VarKind::kBinary), 7);
  EXPECT_EQ(p.sos2.size(), 1u);
  EXPECT_EQ(p.big_m, 2);
}

TEST(BuildMilp, DefaultBigM) {
  ClusterState s;
  s.idle_nodes = numbered(10);
  s.jobs.push_back({trainer("j", linear_curve(1, 4), 1, 4), {}});
  EXPECT_EQ(build_milp(s, config(1.0)).big_m, 11);
}

TEST(BuildMilp, EmptyJobListHasZeroObjective) {
  ClusterState s;
  s.idle_nodes = numbered(3);
  MilpProblem p = build_milp(s, config(1.0));
  EXPECT_EQ(p.objective_constant, 0.0);
  EXPECT_TRUE(p.vars.empty());
  AllocationDecision d = solve_bb(p, 1000);
  EXPECT_EQ(d.status, SolveStatus::kOptimal);
  EXPECT_EQ(d.objective_value, 0.0);
}

TEST(BuildMilp, IntegerPointsReproduceObjective) {
  // Setting x to a realized assignment and w to the SOS2 weights must satisfy
  // every row and price the objective like allocation_objective.
  ClusterState s = two_concave_jobs();
  s.jobs[0].spec.r_up_s = 3;
  s.jobs[0].nodes = nodes({"n00"});
  MilpProblem p = build_milp(s, config(2.0), {.symmetry_breaking = false});
  std::vector<int> counts{3, 1};
  auto assignment = realize_counts(s, counts);
  std::vector<double> v(p.vars.size(), 0.0);
  for (int j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
      bool now = assignment[j].count(p.nodes[k]) > 0;
      bool before = s.jobs[j].nodes.count(p.nodes[k]) > 0;
      v[p.x[j][k]] = now;
      v[p.u[j][k]] = now != before;
    }
    int c = s.jobs[j].count();
    v[p.z_mig[j]] = counts[j] > c ? 0 : 1;
    v[p.z_up[j]] = counts[j] > c;
    v[p.z_dw[j]] = counts[j] < c;
    auto w = sos2_weights(s.jobs[j].spec.curve, counts[j]);
    for (std::size_t i = 0; i < w.size(); ++i) v[p.w[j][i]] = w[i];
  }
  EXPECT_LE(p.max_violation(v), 1e-9);
  EXPECT_NEAR(p.evaluate(v), allocation_objective(s, counts, config(2.0)), 1e-9);
}

TEST(SolveBb, TimeoutZeroKeepsCurrent) {
  ClusterState s = two_concave_jobs();
  s.jobs[0].nodes = nodes({"n02"});
  AllocationDecision d = solve_bb(build_milp(s, config(1.0)), 0);
  EXPECT_EQ(d.status, SolveStatus::kTimeoutKeptCurrent);
  EXPECT_EQ(d.assignment[0], nodes({"n02"}));
  EXPECT_TRUE(d.assignment[1].empty());
}

TEST(SolveBb, SingleJobTakesBothNodes) {
  ClusterState s;
  s.idle_nodes = numbered(2);
  s.jobs.push_back({trainer("j", linear_curve(1, 2), 1, 2), {}});
  AllocationDecision d = solve_bb(build_milp(s, config(1.0)), 10'000);
  EXPECT_EQ(d.status, SolveStatus::kOptimal);
  EXPECT_EQ(d.counts, std::vector<int>{2});
}

TEST(Solvers, TwoConcaveJobsSplitEvenly) {
  ClusterState s = two_concave_jobs();
  EXPECT_NEAR(brute_force_best(s, config(1.0)), 3.6, 1e-12);
  for (const auto& d : {solve_bb(build_milp(s, config(1.0)), 10'000),
                        solve_count_dp(s, config(1.0)), solve_exhaustive(s, config(1.0))}) {
    EXPECT_EQ(d.counts, (std::vector<int>{2, 2}));
    EXPECT_NEAR(d.objective_value, 3.6, 1e-9);
    EXPECT_EQ(d.status, SolveStatus::kOptimal);
  }
}

TEST(CountDp, SingleJobPicksArgmax) {
  ClusterState s;
  s.idle_nodes = numbered(10);
  s.jobs.push_back({trainer("j", ScalabilityCurve({1, 4, 8}, {1.0, 5.0, 4.0}), 1, 8), {}});
  EXPECT_EQ(solve_count_dp(s, config(1.0)).counts, std::vector<int>{4});
}

TEST(CountDp, EmptyPoolLeavesEveryJobIdle) {
  ClusterState s = two_concave_jobs();
  s.idle_nodes.clear();
  AllocationDecision d = solve_count_dp(s, config(1.0));
  EXPECT_EQ(d.counts, (std::vector<int>{0, 0}));
  EXPECT_EQ(d.objective_value, 0.0);
}

TEST(AllocationObjective, AllDownPaysScaleDownCost) {
  ClusterState s = two_concave_jobs();
  s.jobs[0].spec.r_dw_s = 7;
  s.jobs[1].spec.r_dw_s = 3;
  s.jobs[0].nodes = nodes({"n00", "n01"});
  s.jobs[1].nodes = nodes({"n02"});
  double expected = -(1.8 * 7 + 1.0 * 3);
  EXPECT_DOUBLE_EQ(allocation_objective(s, std::vector<int>{0, 0}, config(5.0)), expected);
}

TEST(SolveExhaustive, CandidateCounts) {
  ClusterState one;
  one.idle_nodes = numbered(2);
  one.jobs.push_back({trainer("j", linear_curve(1, 2), 1, 2), {}});
  EXPECT_EQ(solve_exhaustive(one, config(1.0)).stats.candidates, 3);
  ClusterState two;
  two.idle_nodes = numbered(4);
  two.jobs.push_back({trainer("a", linear_curve(1, 4), 1, 4), {}});
  two.jobs.push_back({trainer("b", linear_curve(1, 4), 1, 4), {}});
  EXPECT_EQ(solve_exhaustive(two, config(1.0)).stats.candidates, 25);
}

TEST(SolveExhaustive, GuardRefusesLargeSpaces) {
  ClusterState s = two_concave_jobs();
  EXPECT_THROW(solve_exhaustive(s, config(1.0), 24), SearchSpaceError);
}

TEST(RealizeCounts, IdentityKeepsMap) {
  ClusterState s = two_concave_jobs();
  s.jobs[0].nodes = nodes({"n01", "n03"});
  s.jobs[1].nodes = nodes({"n00"});
  auto a = realize_counts(s, std::vector<int>{2, 1});
  EXPECT_EQ(a[0], s.jobs[0].nodes);
  EXPECT_EQ(a[1], s.jobs[1].nodes);
}

TEST(RealizeCounts, ShrinkKeepsLowestIds) {
  ClusterState s;
  s.idle_nodes = nodes({"a", "b", "c", "d"});
  s.jobs.push_back({trainer("j", linear_curve(1, 4), 1, 4), nodes({"a", "b", "c", "d"})});
  auto a = realize_counts(s, std::vector<int>{2});
  EXPECT_EQ(a[0], nodes({"a", "b"}));
}

TEST(RealizeCounts, GrowingJobReceivesReleasedNodes) {
  ClusterState s;
  s.idle_nodes = nodes({"a", "b", "c", "d"});
  s.jobs.push_back({trainer("A", linear_curve(1, 4), 1, 4), nodes({"a", "b", "c", "d"})});
  s.jobs.push_back({trainer("B", linear_curve(1, 4), 1, 4), {}});
  auto a = realize_counts(s, std::vector<int>{2, 2});
  EXPECT_EQ(a[0], nodes({"a", "b"}));
  EXPECT_EQ(a[1], nodes({"c", "d"}));
}

TEST(RealizeCounts, RejectsInfeasibleCounts) {
  ClusterState s = two_concave_jobs();
  EXPECT_THROW(realize_counts(s, std::vector<int>{4, 1}), InfeasibleError);
  EXPECT_THROW(realize_counts(s, std::vector<int>{5, 0}), InfeasibleError);
}

TEST(IsMigrationFree, SymmetricDifference) {
  EXPECT_TRUE(is_migration_free(nodes({"a", "b"}), nodes({"a", "b", "c"})));
  EXPECT_TRUE(is_migration_free(nodes({"a", "b"}), nodes({"b"})));
  EXPECT_FALSE(is_migration_free(nodes({"a", "b"}), nodes({"b", "c"})));
}

TEST(Solvers, BigMInsensitive) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 15; ++i) {
    auto inst = verify::random_instance(rng, {.max_jobs = 3, .max_nodes = 6});
    SolveConfig small = inst.config, large = inst.config;
    int pool = inst.state.universe_size();
    small.big_m = pool + 1;
    large.big_m = 10 * pool;
    auto a = solve_bb(build_milp(inst.state, small), 60'000);
    auto b = solve_bb(build_milp(inst.state, large), 60'000);
    EXPECT_EQ(a.counts, b.counts) << "instance " << i;
    EXPECT_TRUE(verify::agree(a.objective_value, b.objective_value)) << "instance " << i;
  }
}

TEST(Solvers, SymmetryRowsDoNotChangeOptimum) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 15; ++i) {
    auto inst = verify::random_instance(rng, {.max_jobs = 3, .max_nodes = 6});
    auto with = solve_bb(build_milp(inst.state, inst.config), 60'000);
    auto without =
        solve_bb(build_milp(inst.state, inst.config, {.symmetry_breaking = false}), 60'000);
    EXPECT_TRUE(verify::agree(with.objective_value, without.objective_value)) << "instance " << i;
  }
}

TEST(Solvers, AgreeWithIndependentBruteForce) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 60; ++i) {
    auto inst = verify::random_instance(rng, {.max_jobs = 4, .max_nodes = 10});
    double oracle = brute_force_best(inst.state, inst.config);
    auto dp = solve_count_dp(inst.state, inst.config);
    auto bb = solve_bb(build_milp(inst.state, inst.config), 60'000);
    EXPECT_TRUE(verify::agree(dp.objective_value, oracle)) << "instance " << i;
    EXPECT_TRUE(verify::agree(bb.objective_value, oracle)) << "instance " << i;
    // The reported value must be the value of the returned counts.
    EXPECT_NEAR(dp.objective_value, allocation_objective(inst.state, dp.counts, inst.config),
                1e-9 * std::max(1.0, std::fabs(oracle)));
  }
}

TEST(Solvers, SubMinimumCurrentMapIsRepaired) {
  ClusterState s;
  s.idle_nodes = numbered(4);
  s.jobs.push_back({trainer("j", linear_curve(1, 4), 3, 4, 5, 5), nodes({"n00"})});
  for (const auto& d : {solve_count_dp(s, config(10.0)),
                        solve_bb(build_milp(s, config(10.0)), 10'000)}) {
    EXPECT_EQ(d.counts, std::vector<int>{4});
    EXPECT_TRUE(d.assignment[0].count("n00"));
  }
}

TEST(ExportLp, MentionsEveryRowFamily) {
  ClusterState s = two_concave_jobs();
  std::string text = export_lp(build_milp(s, config(1.0)));
  for (const char* token : {"Maximize", "Subject To", "Bounds", "Binaries", "SOS", "End"}) {
    EXPECT_NE(text.find(token), std::string::npos) << token;
  }
}

}  // namespace
}  // namespace fragtrain
