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

#include "fragtrain/scalability.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fragtrain {

ScalabilityCurve::ScalabilityCurve(std::vector<int> grid, std::vector<double> rates)
    : grid_(std::move(grid)), rates_(std::move(rates)) {
  if (grid_.size() != rates_.size()) {
    throw std::invalid_argument("scalability curve: grid and rates differ in length");
  }
  if (grid_.size() < 2) {
    throw std::invalid_argument("scalability curve: needs at least two points");
  }
  if (grid_.front() < 1) {
    throw std::invalid_argument("scalability curve: first grid point must be >= 1");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (grid_[i] <= grid_[i - 1]) {
      throw std::invalid_argument("scalability curve: grid must be strictly increasing");
    }
  }
  for (double r : rates_) {
    if (!(r >= 0.0)) {
      throw std::invalid_argument("scalability curve: rates must be non-negative");
    }
  }
}

double ScalabilityCurve::max_rate() const {
  return rates_.empty() ? 0.0 : *std::max_element(rates_.begin(), rates_.end());
}

namespace {

// Index k of the segment [grid[k], grid[k+1]] containing n.
int segment_of(const ScalabilityCurve& curve, int n) {
  if (n < curve.min_nodes() || n > curve.max_nodes()) {
    throw std::out_of_range("node count " + std::to_string(n) + " outside curve range [" +
                            std::to_string(curve.min_nodes()) + ", " +
                            std::to_string(curve.max_nodes()) + "]");
  }
  const auto& g = curve.grid();
  auto it = std::upper_bound(g.begin(), g.end(), n);
  int k = static_cast<int>(it - g.begin()) - 1;
  return std::min(k, curve.size() - 2);
}

}  // namespace

double evaluate(const ScalabilityCurve& curve, int n) {
  if (n == 0) return 0.0;
  int k = segment_of(curve, n);
  const auto& g = curve.grid();
  const auto& r = curve.rates();
  if (n == g[k]) return r[k];
  if (n == g[k + 1]) return r[k + 1];
  double t = static_cast<double>(n - g[k]) / static_cast<double>(g[k + 1] - g[k]);
  return r[k] + t * (r[k + 1] - r[k]);
}

std::vector<double> sos2_weights(const ScalabilityCurve& curve, int n) {
  int k = segment_of(curve, n);
  const auto& g = curve.grid();
  std::vector<double> w(g.size(), 0.0);
  if (n == g[k]) {
    w[k] = 1.0;
  } else if (n == g[k + 1]) {
    w[k + 1] = 1.0;
  } else {
    double hi = static_cast<double>(n - g[k]) / static_cast<double>(g[k + 1] - g[k]);
    w[k] = 1.0 - hi;
    w[k + 1] = hi;
  }
  return w;
}

ScalabilityCurve normalize_speedup(const ScalabilityCurve& curve) {
  const auto& r = curve.rates();
  if (r.empty() || r.front() == 0.0) {
    throw std::invalid_argument("cannot normalize a curve whose first rate is 0");
  }
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] / r.front();
  return ScalabilityCurve(curve.grid(), std::move(out));
}

}  // namespace fragtrain
