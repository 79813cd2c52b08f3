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

#include "fragtrain/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fragtrain/errors.h"
#include "fragtrain/format.h"
#include "fragtrain/metrics.h"
#include "fragtrain/report_io.h"
#include "fragtrain/trace.h"
#include "fragtrain/verify.h"

namespace fragtrain::cli {

namespace {

enum class Level { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err) {
    const char* env = std::getenv("FRAGTRAIN_LOG");
    std::string v = env ? env : "";
    if (v == "error") level_ = Level::kError;
    else if (v == "info") level_ = Level::kInfo;
    else if (v == "debug") level_ = Level::kDebug;
  }

  std::ostream* at(Level l) {
    if (l > level_) return nullptr;
    static constexpr const char* kTags[] = {"error: ", "warning: ", "info: ", "debug: "};
    err_ << kTags[static_cast<int>(l)];
    return &err_;
  }

 private:
  std::ostream& err_;
  Level level_ = Level::kWarn;
};

#define FT_LOG(log, level, msg)                          \
  do {                                                   \
    if (std::ostream* s_ = (log).at(level)) *s_ << msg << '\n'; \
  } while (0)

void add_run_options(CLI::App& cmd, RunArguments& a) {
  cmd.add_option("--trace", a.trace_path, "JSON Lines node event log")->required();
  cmd.add_option("--trainers", a.trainers_path, "JSON array of trainer specs")->required();
  cmd.add_option("--policy", a.policy, "milp | equal-share")
      ->check(CLI::IsMember({"milp", "equal-share"}));
  cmd.add_option("--solver", a.solver, "bb | count-dp")->check(CLI::IsMember({"bb", "count-dp"}));
  cmd.add_option("--tfwd", a.tfwd_s, "forward-looking time in seconds")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--pjmax", a.pjmax, "maximum concurrently admitted jobs")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--objective", a.objective, "throughput | scaling-efficiency")
      ->check(CLI::IsMember({"throughput", "scaling-efficiency"}));
  cmd.add_option("--timeout-ms", a.timeout_ms, "solver time limit per decision")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--seed", a.seed, "recorded in the summary");
  cmd.add_option("--horizon", a.horizon_s, "stop after this many seconds")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--window-h", a.window_h, "windowed efficiency length in hours")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--charge-solver-time", a.charge_solver_time,
               "add measured solve time to rescale pauses");
  cmd.add_option("--out", a.out_dir, "output directory");
}

struct RunResult {
  SimulationReport report;
  EfficiencyReport efficiency;
};

RunResult simulate(const RunArguments& a, const SimulationConfig& cfg,
                   const trace::EventLog& log, const std::vector<TrainerSpec>& trainers) {
  RunResult r;
  r.report = run(log, trainers, cfg);
  r.efficiency = efficiency_report(log, trainers, r.report, a.window_h * 3600.0);
  return r;
}

int cmd_run(const RunArguments& a, std::ostream& out, Log& log) {
  SimulationConfig cfg = to_config(a);
  trace::EventLog events = trace::read_file(a.trace_path);
  std::vector<TrainerSpec> trainers = read_trainers_file(a.trainers_path);
  FT_LOG(log, Level::kInfo, "replaying " << events.events.size() << " events with "
                                         << trainers.size() << " trainers");
  RunResult r = simulate(a, cfg, events, trainers);
  report::write_run(a.out_dir, r.report, cfg, r.efficiency);
  out << "events=" << r.report.event_windows.size() << " decisions=" << r.report.decisions.size()
      << " completed=" << r.report.completed << " a_e=" << format_double(r.report.a_e)
      << " u_pct=" << (r.efficiency.u_pct ? format_double(*r.efficiency.u_pct) : "n/a") << '\n';
  return kOk;
}

int cmd_trace_stats(const std::string& path, const std::string& out_dir, double min_fragment_s,
                    std::ostream& out) {
  trace::TraceStats s = trace::stats(trace::read_file(path), min_fragment_s);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw InputError("cannot create " + out_dir + ": " + ec.message());
  std::ofstream stats_file(std::filesystem::path(out_dir) / "trace_stats.csv", std::ios::binary);
  std::ofstream cdf_file(std::filesystem::path(out_dir) / "trace_cdf.csv", std::ios::binary);
  report::write_trace_stats_csv(stats_file, s);
  report::write_cdf_csv(cdf_file, s);
  if (!stats_file || !cdf_file) throw InputError("cannot write into " + out_dir);
  report::write_trace_stats_csv(out, s);
  return kOk;
}

int cmd_verify(verify::Options options, std::ostream& out, std::ostream& err) {
  int per_job = std::max(options.bounds.max_nodes, options.bounds.max_grid) + 2;
  double space = std::pow(static_cast<double>(per_job), options.bounds.max_jobs);
  if (space > static_cast<double>(kExhaustiveGuard)) {
    throw InputError("bounds exceed the enumeration guard");
  }
  verify::Outcome o = verify::run(options);
  if (!o.ok) {
    err << "disagreement on instance " << o.checked - 1 << "\nreproducer: " << o.reproducer
        << '\n';
    return kVerifyFailed;
  }
  out << "verified " << o.checked << " instances\n";
  return kOk;
}

int cmd_sweep(RunArguments a, const std::string& spec, std::ostream& out, Log& log) {
  Sweep sweep = parse_sweep(spec);
  for (double d : sweep.duplicates) {
    FT_LOG(log, Level::kWarn, "duplicate " << sweep.parameter << " value " << format_double(d)
                                           << " ignored");
  }
  trace::EventLog events = trace::read_file(a.trace_path);
  std::vector<TrainerSpec> trainers = read_trainers_file(a.trainers_path);
  std::ostringstream csv;
  csv << "parameter,value,u_pct,rescale_cost_per_event,avg_runtime_s,resource_node_hours\n";
  for (double v : sweep.values) {
    if (sweep.parameter == "tfwd") {
      a.tfwd_s = v;
    } else {
      a.pjmax = static_cast<int>(v);
    }
    FT_LOG(log, Level::kInfo, "sweep " << sweep.parameter << '=' << format_double(v));
    RunResult r = simulate(a, to_config(a), events, trainers);
    csv << sweep.parameter << ',' << format_double(v) << ','
        << (r.efficiency.u_pct ? format_double(*r.efficiency.u_pct) : "") << ','
        << format_double(r.report.rescale_cost_per_event()) << ','
        << format_double(r.report.mean_runtime_s()) << ','
        << format_double(r.report.resource_node_hours) << '\n';
  }
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw InputError("cannot create " + a.out_dir + ": " + ec.message());
  std::ofstream file(std::filesystem::path(a.out_dir) / "sweep.csv", std::ios::binary);
  file << csv.str();
  if (!file) throw InputError("cannot write sweep.csv");
  out << csv.str();
  return kOk;
}

int cmd_synth(const trace::SynthConfig& cfg, std::uint64_t seed, const std::string& path,
              std::ostream& out) {
  trace::EventLog log = trace::synth(cfg, seed);
  if (path.empty() || path == "-") {
    trace::write(out, log);
    return kOk;
  }
  std::ofstream file(path, std::ios::binary);
  trace::write(file, log);
  if (!file) throw InputError("cannot write " + path);
  return kOk;
}

}  // namespace

SimulationConfig to_config(const RunArguments& a) {
  SimulationConfig cfg;
  if (a.policy == "milp") cfg.policy.policy = PolicyKind::kMilp;
  else if (a.policy == "equal-share") cfg.policy.policy = PolicyKind::kEqualShare;
  else throw InputError("unknown policy '" + a.policy + "'");
  if (a.solver == "bb") cfg.policy.solver = SolverKind::kBranchAndBound;
  else if (a.solver == "count-dp") cfg.policy.solver = SolverKind::kCountDp;
  else throw InputError("unknown solver '" + a.solver + "'");
  if (!(a.tfwd_s > 0.0)) throw InputError("--tfwd must be positive");
  if (a.pjmax < 1) throw InputError("--pjmax must be at least 1");
  if (a.timeout_ms < 0) throw InputError("--timeout-ms must not be negative");
  cfg.policy.pj_max = a.pjmax;
  cfg.policy.solve.t_fwd_s = a.tfwd_s;
  cfg.policy.solve.metric = parse_objective_metric(a.objective);
  cfg.policy.solve.timeout_ms = a.timeout_ms;
  cfg.horizon_s = a.horizon_s;
  cfg.charge_solver_time = a.charge_solver_time;
  return cfg;
}

Sweep parse_sweep(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos) throw InputError("sweep must look like name=values");
  Sweep s;
  s.parameter = text.substr(0, eq);
  if (s.parameter != "tfwd" && s.parameter != "pjmax") {
    throw InputError("cannot sweep '" + s.parameter + "' (use tfwd or pjmax)");
  }
  std::string body = text.substr(eq + 1);
  auto number = [&](const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size() || !std::isfinite(v)) {
      throw InputError("bad sweep value '" + token + "'");
    }
    if (s.parameter == "pjmax" && (v < 1 || v != std::floor(v))) {
      throw InputError("pjmax values must be positive integers");
    }
    if (s.parameter == "tfwd" && !(v > 0.0)) throw InputError("tfwd values must be positive");
    return v;
  };
  std::vector<double> raw;
  if (auto dots = body.find(".."); dots != std::string::npos) {
    std::string rest = body.substr(dots + 2);
    double step = 1.0;
    if (auto colon = rest.find(':'); colon != std::string::npos) {
      step = number(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    double lo = number(body.substr(0, dots));
    double hi = number(rest);
    if (!(step > 0.0) || hi < lo) throw InputError("bad sweep range '" + body + "'");
    for (int i = 0; lo + i * step <= hi + 1e-9 * step; ++i) raw.push_back(lo + i * step);
  } else {
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t comma = body.find(',', start);
      if (comma == std::string::npos) comma = body.size();
      raw.push_back(number(body.substr(start, comma - start)));
      start = comma + 1;
    }
  }
  for (double v : raw) {
    if (std::find(s.values.begin(), s.values.end(), v) != s.values.end()) {
      s.duplicates.push_back(v);
    } else {
      s.values.push_back(v);
    }
  }
  return s;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
         const Hooks& hooks) {
  Log log(err);
  CLI::App app{"Elastic job allocation on harvested idle nodes"};
  app.require_subcommand(1);

  RunArguments run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "replay a trace under a policy");
  add_run_options(*run_cmd, run_args);

  RunArguments sweep_args;
  std::string sweep_spec;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "one run per parameter value");
  add_run_options(*sweep_cmd, sweep_args);
  sweep_cmd->add_option("--sweep", sweep_spec, "tfwd=10,60,120 or pjmax=5..35[:step]")
      ->required();

  std::string stats_trace, stats_out = "out";
  double min_fragment_s = 0.0;
  CLI::App* stats_cmd = app.add_subcommand("trace-stats", "characterize a node event log");
  stats_cmd->add_option("--trace", stats_trace, "JSON Lines node event log")->required();
  stats_cmd->add_option("--out", stats_out, "output directory");
  stats_cmd->add_option("--min-fragment", min_fragment_s, "drop shorter fragments (seconds)")
      ->check(CLI::NonNegativeNumber);

  verify::Options vopt;
  CLI::App* verify_cmd = app.add_subcommand("verify", "cross-check the exact solvers");
  verify_cmd->add_option("--instances", vopt.instances)->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--seed", vopt.seed);
  verify_cmd->add_option("--max-jobs", vopt.bounds.max_jobs)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--max-nodes", vopt.bounds.max_nodes)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--timeout-ms", vopt.bb_timeout_ms)->check(CLI::PositiveNumber);

  trace::SynthConfig synth_cfg;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic node event log");
  synth_cmd->add_option("--pool", synth_cfg.n_pool)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--join-rate", synth_cfg.join_rate_per_h, "joins per hour")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--residency", synth_cfg.mean_residency_s, "mean idle seconds")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--duration", synth_cfg.duration_s)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--initial", synth_cfg.initial_present)->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", synth_seed);
  synth_cmd->add_option("--out", synth_out, "output file, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*run_cmd) return cmd_run(run_args, out, log);
    if (*sweep_cmd) return cmd_sweep(sweep_args, sweep_spec, out, log);
    if (*stats_cmd) return cmd_trace_stats(stats_trace, stats_out, min_fragment_s, out);
    if (*verify_cmd) {
      vopt.fault = hooks.verify_fault;
      return cmd_verify(vopt, out, err);
    }
    if (*synth_cmd) return cmd_synth(synth_cfg, synth_seed, synth_out, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kInternalError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInputError;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
         const Hooks& hooks) {
  std::vector<const char*> argv{"fragtrain"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return main(static_cast<int>(argv.size()), argv.data(), out, err, hooks);
}

}  // namespace fragtrain::cli
