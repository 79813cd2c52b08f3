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

#include <vector>

namespace fragtrain {

// Piecewise-linear throughput model of one elastic job.
//
// `grid` holds strictly increasing node counts (grid[0] >= 1) and `rates`
// the measured throughput at each of them, in samples per second. Between
// grid points the curve is the straight line joining its neighbours, which
// is exactly what an SOS2-constrained weight vector can express.
class ScalabilityCurve {
 public:
  ScalabilityCurve() = default;
  // Throws std::invalid_argument if the invariants do not hold.
  ScalabilityCurve(std::vector<int> grid, std::vector<double> rates);

  const std::vector<int>& grid() const { return grid_; }
  const std::vector<double>& rates() const { return rates_; }
  int size() const { return static_cast<int>(grid_.size()); }
  int min_nodes() const { return grid_.front(); }
  int max_nodes() const { return grid_.back(); }
  double max_rate() const;

  bool operator==(const ScalabilityCurve&) const = default;

 private:
  std::vector<int> grid_;
  std::vector<double> rates_;
};

// Throughput at `n` nodes. Exact at grid points, linear in between, 0 for n == 0.
// Throws std::out_of_range for 0 < n < grid[0] or n > grid[last].
double evaluate(const ScalabilityCurve& curve, int n);

// Convex weights over the grid with at most two adjacent nonzeros such that
// sum(w) == 1 and sum(w[i] * grid[i]) == n.
// Throws std::out_of_range when n lies outside the grid.
std::vector<double> sos2_weights(const ScalabilityCurve& curve, int n);

// Speedup relative to the smallest grid point: rates[i] / rates[0].
// Throws std::invalid_argument when rates[0] == 0.
ScalabilityCurve normalize_speedup(const ScalabilityCurve& curve);

}  // namespace fragtrain
