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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "fragtrain/errors.h"

namespace fragtrain::trace {
namespace {

EventLog parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

std::size_t error_line(const std::string& text) {
  try {
    parse_text(text);
  } catch (const TraceError& e) {
    return e.line();
  }
  return 0;
}

TEST(Parse, MinimalLog) {
  EventLog log = parse_text(
      "{\"t\":0,\"join\":[\"a\"],\"leave\":[]}\n"
      "{\"t\":600,\"join\":[],\"leave\":[\"a\"]}\n");
  ASSERT_EQ(log.events.size(), 2u);
  EXPECT_EQ(log.events[0].joins, std::vector<NodeId>{"a"});
  EXPECT_EQ(log.events[1].leaves, std::vector<NodeId>{"a"});
  EXPECT_EQ(log.t_start_s, 0.0);
  EXPECT_EQ(log.t_end_s, 600.0);
}

TEST(Parse, LeaveOfUnknownNode) {
  EXPECT_EQ(error_line("{\"t\":0,\"join\":[],\"leave\":[\"x\"]}\n"), 1u);
}

TEST(Parse, JoinOfPresentNode) {
  EXPECT_EQ(error_line("{\"t\":0,\"join\":[\"a\"],\"leave\":[]}\n"
                       "{\"t\":5,\"join\":[\"a\"],\"leave\":[]}\n"),
            2u);
}

TEST(Parse, DecreasingTimestampReportsLine) {
  EXPECT_EQ(error_line("{\"t\":10,\"join\":[\"a\"],\"leave\":[]}\n"
                       "\n"
                       "{\"t\":5,\"join\":[\"b\"],\"leave\":[]}\n"),
            3u);
}

TEST(Parse, MalformedRecords) {
  EXPECT_EQ(error_line("{\"t\":0,\"join\":[\"a\"]}\n"), 1u);
  EXPECT_EQ(error_line("{\"t\":0,\"join\":[\"a\"],\"leave\":[],\"x\":1}\n"), 1u);
  EXPECT_EQ(error_line("{\"t\":\"0\",\"join\":[],\"leave\":[]}\n"), 1u);
  EXPECT_EQ(error_line("not json\n"), 1u);
  EXPECT_EQ(error_line("{\"t\":-1,\"join\":[],\"leave\":[]}\n"), 1u);
}

TEST(Parse, CoalescesSameTimestamp) {
  EventLog log = parse_text(
      "{\"t\":100,\"join\":[\"a\"],\"leave\":[]}\n"
      "{\"t\":100,\"join\":[\"b\"],\"leave\":[]}\n"
      "{\"t\":200,\"join\":[],\"leave\":[\"a\"]}\n");
  ASSERT_EQ(log.events.size(), 2u);
  EXPECT_EQ(log.events[0].joins, (std::vector<NodeId>{"a", "b"}));
}

TEST(Parse, JoinAndLeaveOfSameNodeInOneInstantIsRejected) {
  EXPECT_THROW(parse_text("{\"t\":0,\"join\":[\"a\"],\"leave\":[]}\n"
                          "{\"t\":9,\"join\":[],\"leave\":[\"a\"]}\n"
                          "{\"t\":9,\"join\":[\"a\"],\"leave\":[]}\n"),
               TraceError);
}

TEST(Parse, EmptyRecordExtendsEnd) {
  EventLog log = parse_text(
      "{\"t\":0,\"join\":[\"a\"],\"leave\":[]}\n"
      "{\"t\":3600,\"join\":[],\"leave\":[]}\n");
  EXPECT_EQ(log.events.size(), 1u);
  EXPECT_EQ(log.t_end_s, 3600.0);
}

TEST(Write, RoundTrips) {
  EventLog log = synth({.n_pool = 12, .join_rate_per_h = 20, .mean_residency_s = 900,
                        .duration_s = 7200, .initial_present = 3},
                       4);
  std::stringstream buf;
  write(buf, log);
  EXPECT_EQ(parse(buf), log);
}

EventLog handmade() {
  // a: [0, 100] and [500, 900]; b: [400, 1000) open at the end.
  EventLog log;
  log.t_start_s = 0;
  log.t_end_s = 1000;
  log.events = {{0, {"a"}, {}}, {100, {}, {"a"}}, {400, {"b"}, {}}, {500, {"a"}, {}},
                {900, {}, {"a"}}};
  return log;
}

TEST(Fragments, DisjointAndTruncated) {
  auto f = fragments(handmade());
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], (Fragment{"a", 0, 100}));
  EXPECT_EQ(f[1], (Fragment{"b", 400, 1000}));
  EXPECT_EQ(f[2], (Fragment{"a", 500, 900}));
}

TEST(Fragments, SingleInterval) {
  EventLog log;
  log.t_end_s = 600;
  log.events = {{0, {"a"}, {}}, {600, {}, {"a"}}};
  auto f = fragments(log);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].length_s(), 600.0);
}

TEST(Fragments, ReplayReproducesPoolSize) {
  EventLog log = synth({.n_pool = 20, .join_rate_per_h = 30, .mean_residency_s = 1200,
                        .duration_s = 20000, .initial_present = 5},
                       17);
  auto f = fragments(log);
  for (const auto& [t, size] : pool_steps(log)) {
    int live = 0;
    for (const auto& fr : f) live += fr.start_s <= t && t < fr.end_s;
    EXPECT_EQ(live, size) << "t=" << t;
  }
  double total = 0;
  for (const auto& fr : f) total += fr.length_s();
  EXPECT_NEAR(total, stats(log).idle_node_hours * 3600.0, 1e-6);
}

TEST(Stats, CountsEventsPerHour) {
  EventLog log;
  log.t_end_s = 3600;
  log.events = {{0, {"a", "b"}, {}},     {600, {"c"}, {}},   {1200, {}, {"a"}},
                {1800, {"a"}, {"b"}},    {2400, {"d"}, {}},  {3000, {}, {"c"}}};
  TraceStats s = stats(log);
  EXPECT_DOUBLE_EQ(s.inc_per_h, 4.0);
  EXPECT_DOUBLE_EQ(s.dec_per_h, 3.0);
}

TEST(Stats, ConstantPool) {
  EventLog log;
  log.t_end_s = 3600;
  log.events = {{0, {"a", "b"}, {}}};
  TraceStats s = stats(log);
  EXPECT_EQ(s.eq_nodes, 2.0);
  EXPECT_EQ(s.idle_node_hours, 2.0);
  ASSERT_EQ(s.cdf.size(), 1u);
  EXPECT_EQ(s.cdf.back(), (std::pair<double, double>{3600.0, 1.0}));
}

TEST(Stats, ZeroDurationThrows) {
  EXPECT_THROW(stats(EventLog{}), InputError);
}

TEST(Stats, MinimumFragmentFilter) {
  TraceStats s = stats(handmade(), 200);
  EXPECT_EQ(s.fragment_lengths_s, (std::vector<double>{400, 600}));
}

TEST(Stats, InvariantUnderRecordSplitting) {
  std::string whole =
      "{\"t\":0,\"join\":[\"a\",\"b\"],\"leave\":[]}\n"
      "{\"t\":700,\"join\":[\"c\"],\"leave\":[\"a\"]}\n"
      "{\"t\":3600,\"join\":[],\"leave\":[]}\n";
  std::string split =
      "{\"t\":0,\"join\":[\"a\"],\"leave\":[]}\n"
      "{\"t\":0,\"join\":[\"b\"],\"leave\":[]}\n"
      "{\"t\":700,\"join\":[],\"leave\":[\"a\"]}\n"
      "{\"t\":700,\"join\":[\"c\"],\"leave\":[]}\n"
      "{\"t\":3600,\"join\":[],\"leave\":[]}\n";
  TraceStats a = stats(parse_text(whole));
  TraceStats b = stats(parse_text(split));
  EXPECT_EQ(a.inc_per_h, b.inc_per_h);
  EXPECT_EQ(a.dec_per_h, b.dec_per_h);
  EXPECT_EQ(a.eq_nodes, b.eq_nodes);
  EXPECT_EQ(a.cdf, b.cdf);
}

TEST(Synth, ZeroRateIsEmpty) {
  EXPECT_TRUE(synth({.join_rate_per_h = 0}, 1).events.empty());
}

TEST(Synth, DeterministicInSeed) {
  SynthConfig cfg{.n_pool = 16, .join_rate_per_h = 12};
  EXPECT_EQ(synth(cfg, 99), synth(cfg, 99));
  EXPECT_NE(synth(cfg, 99), synth(cfg, 100));
}

TEST(Synth, JoinCountsConcentrate) {
  const double rate = 10.0, duration = 86400.0;
  const double mean = rate * duration / 3600.0;
  SynthConfig cfg{.n_pool = 5000, .join_rate_per_h = rate, .mean_residency_s = 3600,
                  .duration_s = duration};
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    EventLog log = synth(cfg, seed);
    int joins = 0;
    for (const auto& e : log.events) joins += e.joins.empty() ? 0 : 1;
    inside += std::fabs(joins - mean) <= 3.0 * std::sqrt(mean);
  }
  EXPECT_GE(inside, 990);
}

}  // namespace
}  // namespace fragtrain::trace
