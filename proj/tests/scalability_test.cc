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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "test_support.h"

namespace fragtrain {
namespace {

using testing::shufflenet_curve;

// Two-point interpolation written independently of the library.
double line_through(double x0, double y0, double x1, double y1, double x) {
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

TEST(ScalabilityCurve, RejectsMalformedCurves) {
  EXPECT_THROW(ScalabilityCurve({1}, {1.0}), std::invalid_argument);
  EXPECT_THROW(ScalabilityCurve({1, 2}, {1.0}), std::invalid_argument);
  EXPECT_THROW(ScalabilityCurve({0, 2}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(ScalabilityCurve({2, 2}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(ScalabilityCurve({3, 2}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(ScalabilityCurve({1, 2}, {1.0, -2.0}), std::invalid_argument);
}

TEST(Evaluate, ShuffleNetAtOneNode) { EXPECT_EQ(evaluate(shufflenet_curve(), 1), 2800.0); }

TEST(Evaluate, ZeroNodesGiveZero) { EXPECT_EQ(evaluate(shufflenet_curve(), 0), 0.0); }

TEST(Evaluate, ShuffleNetBetweenGridPoints) {
  double expected = line_through(32, 74100, 64, 145100, 48);
  EXPECT_DOUBLE_EQ(expected, 109600.0);
  EXPECT_DOUBLE_EQ(evaluate(shufflenet_curve(), 48), expected);
}

TEST(Evaluate, ExactAtEveryGridPoint) {
  auto c = shufflenet_curve();
  for (int i = 0; i < c.size(); ++i) EXPECT_EQ(evaluate(c, c.grid()[i]), c.rates()[i]);
}

TEST(Evaluate, OutOfRangeThrows) {
  ScalabilityCurve c({2, 4}, {1.0, 2.0});
  EXPECT_THROW(evaluate(c, 1), std::out_of_range);
  EXPECT_THROW(evaluate(c, 5), std::out_of_range);
  EXPECT_THROW(evaluate(c, -1), std::out_of_range);
}

TEST(Sos2Weights, GridPointIsIndicator) {
  auto c = shufflenet_curve();
  auto w = sos2_weights(c, 16);
  for (int i = 0; i < c.size(); ++i) EXPECT_EQ(w[i], i == 4 ? 1.0 : 0.0);
}

TEST(Sos2Weights, MidpointSplitsEvenly) {
  auto w = sos2_weights(shufflenet_curve(), 48);
  EXPECT_DOUBLE_EQ(w[5], 0.5);
  EXPECT_DOUBLE_EQ(w[6], 0.5);
  double rate = 0.0;
  for (int i = 0; i < 7; ++i) rate += w[i] * shufflenet_curve().rates()[i];
  EXPECT_DOUBLE_EQ(rate, 109600.0);
}

TEST(Sos2Weights, ConvexAdjacentAndReconstructing) {
  auto c = shufflenet_curve();
  for (int n = 1; n <= 64; ++n) {
    auto w = sos2_weights(c, n);
    double sum = 0.0, nodes = 0.0, rate = 0.0;
    int first = -1, last = -1;
    for (int i = 0; i < c.size(); ++i) {
      EXPECT_GE(w[i], 0.0);
      sum += w[i];
      nodes += w[i] * c.grid()[i];
      rate += w[i] * c.rates()[i];
      if (w[i] != 0.0) {
        if (first < 0) first = i;
        last = i;
      }
    }
    EXPECT_NEAR(sum, 1.0, 1e-15);
    EXPECT_NEAR(nodes, n, 1e-12);
    EXPECT_LE(std::fabs(rate - evaluate(c, n)), 1e-12 * c.max_rate());
    EXPECT_LE(last - first, 1);
  }
  EXPECT_THROW(sos2_weights(c, 0), std::out_of_range);
  EXPECT_THROW(sos2_weights(c, 65), std::out_of_range);
}

TEST(NormalizeSpeedup, ShuffleNet) {
  auto n = normalize_speedup(shufflenet_curve());
  EXPECT_EQ(n.rates()[0], 1.0);
  EXPECT_NEAR(n.rates()[6], 145.1 / 2.8, 1e-12);
  EXPECT_NEAR(n.rates()[6], 51.82, 0.005);
  EXPECT_EQ(n.grid(), shufflenet_curve().grid());
}

TEST(NormalizeSpeedup, ConstantCurve) {
  auto n = normalize_speedup(ScalabilityCurve({1, 3}, {5.0, 5.0}));
  EXPECT_EQ(n.rates(), (std::vector<double>{1.0, 1.0}));
}

TEST(NormalizeSpeedup, ZeroBaseRateThrows) {
  EXPECT_THROW(normalize_speedup(ScalabilityCurve({1, 2}, {0.0, 1.0})), std::invalid_argument);
}

TEST(NormalizeSpeedup, PreservesArgmax) {
  ScalabilityCurve c({2, 5, 9, 12}, {3.0, 9.0, 11.0, 7.0});
  auto n = normalize_speedup(c);
  int best_a = 2, best_b = 2;
  for (int k = 2; k <= 12; ++k) {
    if (evaluate(c, k) > evaluate(c, best_a)) best_a = k;
    if (evaluate(n, k) > evaluate(n, best_b)) best_b = k;
  }
  EXPECT_EQ(best_a, best_b);
}

}  // namespace
}  // namespace fragtrain
