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

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>

#include "fragtrain/errors.h"
#include "fragtrain/milp.h"

namespace fragtrain {

namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr double kSos2ZeroTol = 1e-9;

struct BbNode {
  std::vector<double> lower;
  std::vector<double> upper;
  double bound = 0.0;
  std::int64_t id = 0;
};

struct WorseBound {
  bool operator()(const BbNode& a, const BbNode& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpProblem& p, std::int64_t timeout_ms)
      : p_(p), base_(p.relaxation()),
        deadline_(std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms)) {
    stay_feasible_ = validate_state(p.state).empty();
    if (stay_feasible_) {
      stay_obj_ = allocation_objective(p.state, p.state.current_counts(), p.config);
    }
  }

  AllocationDecision run() {
    auto start = std::chrono::steady_clock::now();
    BbNode root{base_.lower, base_.upper, 0.0, 0};
    bool timed_out = false;
    if (auto r = solve(root)) consider(std::move(root), *r);
    while (!open_.empty() && !lp_timed_out_) {
      if (std::chrono::steady_clock::now() >= deadline_) {
        timed_out = true;
        break;
      }
      BbNode node = open_.top();
      open_.pop();
      if (node.bound <= threshold() + tolerance()) continue;
      expand(node);
    }

    timed_out = timed_out || lp_timed_out_;
    AllocationDecision d;
    if (have_incumbent_) {
      d = from_incumbent(timed_out ? SolveStatus::kTimeoutFeasible : SolveStatus::kOptimal);
    } else if (timed_out) {
      d = keep_current(p_.state, p_.config, SolveStatus::kTimeoutKeptCurrent);
    } else if (stay_feasible_) {
      d = keep_current(p_.state, p_.config, SolveStatus::kOptimal);
    } else {
      throw SolverError("branch and bound finished without a feasible allocation");
    }
    d.stats.bb_nodes = nodes_;
    d.stats.lp_iterations = lp_iterations_;
    d.stats.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return d;
  }

 private:
  double threshold() const {
    if (have_incumbent_) return incumbent_obj_;
    return stay_feasible_ ? stay_obj_ : -std::numeric_limits<double>::infinity();
  }

  double tolerance() const {
    double t = threshold();
    return std::isfinite(t) ? 1e-10 * std::max(1.0, std::abs(t)) : 0.0;
  }

  std::optional<lp::Result> solve(const BbNode& node) {
    base_.lower = node.lower;
    base_.upper = node.upper;
    lp::Options options;
    options.deadline = deadline_;
    lp::Result r = lp::solve(base_, options);
    ++nodes_;
    lp_iterations_ += r.iterations;
    if (r.status == lp::Status::kInfeasible) return std::nullopt;
    if (r.status == lp::Status::kTimeLimit) {
      lp_timed_out_ = true;
      return std::nullopt;
    }
    if (r.status != lp::Status::kOptimal) {
      throw SolverError("LP relaxation failed at branch-and-bound node " +
                        std::to_string(node.id));
    }
    return r;
  }

  // Most fractional binary, lowest index on ties; -1 if all integral.
  int pick_binary(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = kIntegralityTol;
    for (std::size_t i = 0; i < p_.vars.size(); ++i) {
      if (p_.vars[i].kind != VarKind::kBinary) continue;
      double frac = std::abs(x[i] - std::round(x[i]));
      if (frac > best_frac) {
        best_frac = frac;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  // First SOS2 set whose nonzeros are not confined to two adjacent members.
  // Returns (set index, split position) or (-1, -1).
  std::pair<int, int> pick_sos2(const std::vector<double>& x) const {
    for (std::size_t s = 0; s < p_.sos2.size(); ++s) {
      const auto& vars = p_.sos2[s].vars;
      int lo = -1;
      int hi = -1;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (x[vars[i]] > kSos2ZeroTol) {
          if (lo < 0) lo = static_cast<int>(i);
          hi = static_cast<int>(i);
        }
      }
      if (lo >= 0 && hi - lo >= 2) return {static_cast<int>(s), (lo + hi) / 2};
    }
    return {-1, -1};
  }

  void consider(BbNode node, const lp::Result& r) {
    node.bound = r.objective + p_.objective_constant;
    if (node.bound <= threshold() + tolerance()) return;
    int var = pick_binary(r.x);
    auto [set, split] = var < 0 ? pick_sos2(r.x) : std::pair{-1, -1};
    if (var < 0 && set < 0) {
      accept(r.x);
      return;
    }
    node.id = next_id_++;
    pending_x_.emplace(node.id, r.x);
    open_.push(std::move(node));
  }

  void expand(const BbNode& node) {
    auto it = pending_x_.find(node.id);
    std::vector<double> x = std::move(it->second);
    pending_x_.erase(it);

    std::vector<BbNode> children(2, node);
    int var = pick_binary(x);
    if (var >= 0) {
      children[0].upper[var] = 0.0;
      children[1].lower[var] = 1.0;
    } else {
      auto [set, split] = pick_sos2(x);
      const auto& vars = p_.sos2[set].vars;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (static_cast<int>(i) > split) children[0].upper[vars[i]] = 0.0;
        if (static_cast<int>(i) < split) children[1].upper[vars[i]] = 0.0;
      }
    }
    for (auto& child : children) {
      if (lp_timed_out_) return;
      if (auto r = solve(child)) consider(std::move(child), *r);
    }
  }

  void accept(const std::vector<double>& x) {
    std::vector<int> counts(p_.num_jobs(), 0);
    for (int j = 0; j < p_.num_jobs(); ++j) {
      for (int v : p_.x[j]) counts[j] += x[v] > 0.5 ? 1 : 0;
    }
    double obj = allocation_objective(p_.state, counts, p_.config);
    if (obj > threshold() + tolerance()) {
      incumbent_ = x;
      incumbent_obj_ = obj;
      have_incumbent_ = true;
    }
  }

  AllocationDecision from_incumbent(SolveStatus status) const {
    AllocationDecision d;
    for (int j = 0; j < p_.num_jobs(); ++j) {
      NodeSet nodes;
      for (std::size_t k = 0; k < p_.nodes.size(); ++k) {
        if (incumbent_[p_.x[j][k]] > 0.5) nodes.insert(p_.nodes[k]);
      }
      int c = p_.state.jobs[j].count();
      int n = static_cast<int>(nodes.size());
      d.counts.push_back(n);
      d.directions.push_back(n > c ? Direction::kUp : n < c ? Direction::kDown
                                                            : Direction::kUnchanged);
      d.assignment.push_back(std::move(nodes));
    }
    d.objective_value = incumbent_obj_;
    d.status = status;
    return d;
  }

  const MilpProblem& p_;
  lp::LinearProgram base_;
  std::chrono::steady_clock::time_point deadline_;
  bool stay_feasible_ = false;
  double stay_obj_ = 0.0;

  std::priority_queue<BbNode, std::vector<BbNode>, WorseBound> open_;
  std::map<std::int64_t, std::vector<double>> pending_x_;
  std::int64_t next_id_ = 1;
  std::int64_t nodes_ = 0;
  std::int64_t lp_iterations_ = 0;
  bool lp_timed_out_ = false;

  bool have_incumbent_ = false;
  std::vector<double> incumbent_;
  double incumbent_obj_ = 0.0;
};

}  // namespace

AllocationDecision solve_bb(const MilpProblem& problem, std::int64_t timeout_ms) {
  if (timeout_ms <= 0) {
    return keep_current(problem.state, problem.config, SolveStatus::kTimeoutKeptCurrent);
  }
  return BranchAndBound(problem, timeout_ms).run();
}

}  // namespace fragtrain
