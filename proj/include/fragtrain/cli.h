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
#include <optional>
#include <string>
#include <vector>

#include "fragtrain/simulator.h"

namespace fragtrain::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInternalError = 2, kVerifyFailed = 3 };

struct RunArguments {
  std::string trace_path;
  std::string trainers_path;
  std::string policy = "milp";
  std::string solver = "count-dp";
  double tfwd_s = 120.0;
  int pjmax = 10;
  std::string objective = "throughput";
  std::int64_t timeout_ms = 10'000;
  std::uint64_t seed = 0;
  std::optional<double> horizon_s;
  double window_h = 6.0;
  bool charge_solver_time = false;
  std::string out_dir = "out";
};

// Throws InputError for unknown policy, solver or objective names.
SimulationConfig to_config(const RunArguments& args);

struct Sweep {
  std::string parameter;  // "tfwd" or "pjmax"
  std::vector<double> values;
  std::vector<double> duplicates;  // dropped, first occurrence kept
};

// "tfwd=10,60,120" or "pjmax=5..35" / "pjmax=5..35:5". Throws InputError.
Sweep parse_sweep(const std::string& text);

struct Hooks {
  // Test hook forwarded to verify::Options::fault.
  std::function<void(AllocationDecision&)> verify_fault;
};

// Entry point. Log verbosity comes from FRAGTRAIN_LOG
// (error, warn, info, debug; default warn).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
         const Hooks& hooks = {});
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
         const Hooks& hooks = {});

}  // namespace fragtrain::cli
