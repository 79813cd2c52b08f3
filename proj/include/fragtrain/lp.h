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

#include <chrono>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace fragtrain::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Row {
  std::vector<std::pair<int, double>> terms;  // (column, coefficient)
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// maximize objective . x  subject to rows and lower <= x <= upper.
// Lower bounds must be finite; upper bounds may be kInfinity.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int add_var(double obj, double lo, double hi);
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kTimeLimit };

struct Result {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

struct Options {
  double feasibility_tol = 1e-9;
  int max_iterations = 0;  // 0 picks a size-based default
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Dense two-phase primal simplex with implicit variable bounds.
Result solve(const LinearProgram& problem, const Options& options = {});

}  // namespace fragtrain::lp
