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

#include "fragtrain/trace.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "fragtrain/errors.h"

namespace fragtrain::trace {

namespace {

// Applies one event to the present set, checking membership transitions.
void apply(std::set<NodeId>& present, const Event& e, std::size_t line) {
  std::set<NodeId> seen;
  for (const auto& n : e.joins) {
    if (!seen.insert(n).second) throw TraceError("node '" + n + "' listed twice", line);
  }
  for (const auto& n : e.leaves) {
    if (!seen.insert(n).second) {
      throw TraceError("node '" + n + "' both joins and leaves at t=" + std::to_string(e.t_s),
                       line);
    }
  }
  for (const auto& n : e.leaves) {
    if (!present.erase(n)) throw TraceError("leave of absent node '" + n + "'", line);
  }
  for (const auto& n : e.joins) {
    if (!present.insert(n).second) throw TraceError("join of present node '" + n + "'", line);
  }
}

std::vector<NodeId> id_list(const nlohmann::json& j, const char* key, std::size_t line) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw TraceError(std::string("'") + key + "' must be an array", line);
  std::vector<NodeId> out;
  for (const auto& id : v) {
    if (!id.is_string() || id.get<std::string>().empty()) {
      throw TraceError(std::string("'") + key + "' entries must be non-empty strings", line);
    }
    out.push_back(id.get<std::string>());
  }
  return out;
}

}  // namespace

EventLog parse(std::istream& in) {
  EventLog log;
  std::set<NodeId> present;
  std::string text;
  std::size_t line = 0;
  bool any = false;
  std::vector<NodeId> joins, leaves;
  double t_prev = 0.0;

  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw TraceError(std::string("invalid JSON: ") + e.what(), line);
    }
    if (!j.is_object()) throw TraceError("record is not a JSON object", line);
    for (const char* key : {"t", "join", "leave"}) {
      if (!j.contains(key)) throw TraceError(std::string("missing field '") + key + "'", line);
    }
    if (j.size() != 3) throw TraceError("record has fields other than t, join, leave", line);
    if (!j.at("t").is_number()) throw TraceError("'t' must be a number", line);
    double t = j.at("t").get<double>();
    if (!std::isfinite(t) || t < 0.0) throw TraceError("'t' must be non-negative", line);
    if (any && t < t_prev) {
      throw TraceError("timestamp " + std::to_string(t) + " goes back before " +
                           std::to_string(t_prev),
                       line);
    }
    auto jn = id_list(j, "join", line);
    auto lv = id_list(j, "leave", line);
    if (!any) log.t_start_s = t;
    any = true;
    t_prev = t;
    log.t_end_s = t;
    if (jn.empty() && lv.empty()) continue;

    Event e{t, std::move(jn), std::move(lv)};
    apply(present, e, line);
    if (!log.events.empty() && log.events.back().t_s == t) {
      Event& prev = log.events.back();
      for (const auto& n : e.joins) {
        auto it = std::find(prev.leaves.begin(), prev.leaves.end(), n);
        if (it != prev.leaves.end()) {
          throw TraceError("node '" + n + "' both joins and leaves at t=" + std::to_string(t),
                           line);
        }
      }
      for (const auto& n : e.leaves) {
        auto it = std::find(prev.joins.begin(), prev.joins.end(), n);
        if (it != prev.joins.end()) {
          throw TraceError("node '" + n + "' both joins and leaves at t=" + std::to_string(t),
                           line);
        }
      }
      prev.joins.insert(prev.joins.end(), e.joins.begin(), e.joins.end());
      prev.leaves.insert(prev.leaves.end(), e.leaves.begin(), e.leaves.end());
    } else {
      log.events.push_back(std::move(e));
    }
  }
  return log;
}

EventLog read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace file '" + path + "'");
  return parse(in);
}

void write(std::ostream& out, const EventLog& log) {
  auto record = [&](double t, const std::vector<NodeId>& joins, const std::vector<NodeId>& leaves) {
    out << nlohmann::json{{"t", t}, {"join", joins}, {"leave", leaves}}.dump() << '\n';
  };
  const std::vector<NodeId> none;
  bool start_marker = log.events.empty() ? (log.t_start_s != 0.0 || log.t_end_s != 0.0)
                                         : log.t_start_s < log.events.front().t_s;
  if (start_marker) record(log.t_start_s, none, none);
  for (const auto& e : log.events) record(e.t_s, e.joins, e.leaves);
  double last = log.events.empty() ? log.t_start_s : log.events.back().t_s;
  if (log.t_end_s > last) record(log.t_end_s, none, none);
}

void validate(const EventLog& log) {
  std::set<NodeId> present;
  double prev = -1.0;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const Event& e = log.events[i];
    if (e.t_s <= prev) throw TraceError("event timestamps must strictly increase", 0);
    if (e.joins.empty() && e.leaves.empty()) throw TraceError("empty event", 0);
    if (e.t_s < log.t_start_s || e.t_s > log.t_end_s) {
      throw TraceError("event outside the log span", 0);
    }
    prev = e.t_s;
    apply(present, e, 0);
  }
}

std::vector<std::pair<double, int>> pool_steps(const EventLog& log) {
  std::vector<std::pair<double, int>> out;
  int size = 0;
  for (const auto& e : log.events) {
    size += static_cast<int>(e.joins.size()) - static_cast<int>(e.leaves.size());
    out.emplace_back(e.t_s, size);
  }
  return out;
}

double node_seconds(const EventLog& log, double t0, double t1) {
  t0 = std::max(t0, log.t_start_s);
  t1 = std::min(t1, log.t_end_s);
  if (!(t1 > t0)) return 0.0;
  auto steps = pool_steps(log);
  double total = 0.0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    double a = steps[k].first;
    double b = k + 1 < steps.size() ? steps[k + 1].first : log.t_end_s;
    double lo = std::max(a, t0);
    double hi = std::min(b, t1);
    if (hi > lo) total += steps[k].second * (hi - lo);
  }
  return total;
}

std::vector<Fragment> fragments(const EventLog& log) {
  std::map<NodeId, double> open;
  std::vector<Fragment> out;
  for (const auto& e : log.events) {
    for (const auto& n : e.leaves) {
      auto it = open.find(n);
      out.push_back({n, it->second, e.t_s});
      open.erase(it);
    }
    for (const auto& n : e.joins) open[n] = e.t_s;
  }
  for (const auto& [n, start] : open) {
    if (log.t_end_s > start) out.push_back({n, start, log.t_end_s});
  }
  std::sort(out.begin(), out.end(), [](const Fragment& a, const Fragment& b) {
    return std::tie(a.start_s, a.node) < std::tie(b.start_s, b.node);
  });
  return out;
}

TraceStats stats(const EventLog& log, double min_fragment_s) {
  TraceStats s;
  double duration = log.duration_s();
  if (!(duration > 0.0)) throw InputError("trace spans zero seconds");
  s.hours = duration / 3600.0;
  int inc = 0;
  int dec = 0;
  for (const auto& e : log.events) {
    inc += e.joins.empty() ? 0 : 1;
    dec += e.leaves.empty() ? 0 : 1;
  }
  s.inc_per_h = inc / s.hours;
  s.dec_per_h = dec / s.hours;
  double ns = node_seconds(log, log.t_start_s, log.t_end_s);
  s.idle_node_hours = ns / 3600.0;
  s.eq_nodes = ns / duration;
  for (const auto& f : fragments(log)) {
    if (f.length_s() >= min_fragment_s) s.fragment_lengths_s.push_back(f.length_s());
  }
  std::sort(s.fragment_lengths_s.begin(), s.fragment_lengths_s.end());
  const double total = static_cast<double>(s.fragment_lengths_s.size());
  for (std::size_t i = 0; i < s.fragment_lengths_s.size(); ++i) {
    double len = s.fragment_lengths_s[i];
    double frac = static_cast<double>(i + 1) / total;
    if (!s.cdf.empty() && s.cdf.back().first == len) {
      s.cdf.back().second = frac;
    } else {
      s.cdf.emplace_back(len, frac);
    }
  }
  return s;
}

EventLog synth(const SynthConfig& cfg, std::uint64_t seed) {
  if (cfg.n_pool < 0 || cfg.join_rate_per_h < 0.0 || cfg.mean_residency_s <= 0.0 ||
      cfg.duration_s <= 0.0 || cfg.initial_present < 0 || cfg.initial_present > cfg.n_pool) {
    throw InputError("invalid synthetic trace configuration");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto exponential = [&](double mean) { return -mean * std::log1p(-uniform()); };

  int width = static_cast<int>(std::to_string(std::max(cfg.n_pool - 1, 0)).size());
  width = std::max(width, 3);
  std::vector<NodeId> names;
  for (int i = 0; i < cfg.n_pool; ++i) {
    std::string digits = std::to_string(i);
    names.push_back("n" + std::string(width - digits.size(), '0') + digits);
  }

  struct Change {
    double t;
    bool join;
    NodeId node;
  };
  std::vector<Change> changes;
  std::set<NodeId> absent(names.begin(), names.end());
  using Leave = std::pair<double, NodeId>;
  std::priority_queue<Leave, std::vector<Leave>, std::greater<>> leaves;

  auto join = [&](double t, NodeId n) {
    absent.erase(n);
    changes.push_back({t, true, n});
    double until = t + exponential(cfg.mean_residency_s);
    if (until < cfg.duration_s) leaves.emplace(until, n);
  };
  auto drain = [&](double t) {
    while (!leaves.empty() && leaves.top().first <= t) {
      auto [tl, n] = leaves.top();
      leaves.pop();
      absent.insert(n);
      changes.push_back({tl, false, n});
    }
  };

  for (int i = 0; i < cfg.initial_present; ++i) join(0.0, names[i]);
  if (cfg.join_rate_per_h > 0.0) {
    const double mean_gap = 3600.0 / cfg.join_rate_per_h;
    double t = 0.0;
    while (true) {
      t += exponential(mean_gap);
      if (t >= cfg.duration_s) break;
      drain(t);
      if (absent.empty()) continue;
      auto it = absent.begin();
      std::advance(it, static_cast<long>(uniform() * static_cast<double>(absent.size())));
      join(t, *it);
    }
  }
  drain(cfg.duration_s);

  std::stable_sort(changes.begin(), changes.end(),
                   [](const Change& a, const Change& b) { return a.t < b.t; });
  EventLog log;
  log.t_start_s = 0.0;
  log.t_end_s = cfg.duration_s;
  for (const auto& c : changes) {
    if (log.events.empty() || log.events.back().t_s != c.t) log.events.push_back({c.t, {}, {}});
    (c.join ? log.events.back().joins : log.events.back().leaves).push_back(c.node);
  }
  validate(log);
  return log;
}

}  // namespace fragtrain::trace
