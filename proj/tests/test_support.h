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

#include <string>
#include <vector>

#include "fragtrain/model.h"

namespace fragtrain::testing {

inline ScalabilityCurve shufflenet_curve() {
  return ScalabilityCurve({1, 2, 4, 8, 16, 32, 64},
                          {2800, 5300, 10000, 20400, 38900, 74100, 145100});
}

inline ScalabilityCurve linear_curve(double per_node, int max_nodes) {
  return ScalabilityCurve({1, max_nodes}, {per_node, per_node * max_nodes});
}

inline TrainerSpec trainer(std::string name, ScalabilityCurve curve, int n_min, int n_max,
                           double r_up = 0.0, double r_dw = 0.0, double total = 1e12,
                           double arrival = 0.0) {
  TrainerSpec s;
  s.name = std::move(name);
  s.curve = std::move(curve);
  s.n_min = n_min;
  s.n_max = n_max;
  s.r_up_s = r_up;
  s.r_dw_s = r_dw;
  s.total_samples = total;
  s.arrival_s = arrival;
  return s;
}

inline NodeSet nodes(std::initializer_list<const char*> ids) {
  NodeSet s;
  for (const char* id : ids) s.insert(id);
  return s;
}

inline NodeSet numbered(int count, int first = 0) {
  NodeSet s;
  for (int i = first; i < first + count; ++i) {
    std::string d = std::to_string(i);
    s.insert("n" + std::string(d.size() < 2 ? 1 : 0, '0') + d);
  }
  return s;
}

}  // namespace fragtrain::testing
