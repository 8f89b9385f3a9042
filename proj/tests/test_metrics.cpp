#include <doctest.h>

#include <numeric>
#include <sstream>

#include "wban/metrics.hpp"

using namespace wban;

TEST_CASE("pdr is undefined without offered frames") {
  ClassCounters c;
  CHECK_FALSE(pdr(c).has_value());
  c.offered = 100;
  c.delivered = 84;
  CHECK(*pdr(c) == doctest::Approx(0.84));
  c.delivered = 1;
  c.offered = 1;
  CHECK(*pdr(c) == 1.0);
}

TEST_CASE("pdr by node and by class") {
  MetricsLedger l;
  l.node(1).at(TrafficClass::NormalHigh) = {10, 9, 1, {}};
  l.node(1).at(TrafficClass::Emergency) = {2, 2, 0, {}};
  l.node(2).at(TrafficClass::NormalHigh) = {10, 5, 5, {}};
  CHECK(*pdr(l, NodeId{1}) == doctest::Approx(11.0 / 12.0));
  CHECK(*pdr(l, TrafficClass::NormalHigh) == doctest::Approx(14.0 / 20.0));
  CHECK_FALSE(pdr(l, TrafficClass::NormalLow).has_value());
}

TEST_CASE("energy integrates power over state time") {
  const EnergyModel m;
  StateDurations sleep_only{};
  sleep_only[static_cast<std::size_t>(RadioState::Sleep)] = kUsPerSecond;
  CHECK(energy_mj(sleep_only, m) == doctest::Approx(0.06));

  StateDurations mixed{};
  mixed[static_cast<std::size_t>(RadioState::Tx)] = 10 * kUsPerMs;
  mixed[static_cast<std::size_t>(RadioState::Sleep)] = 990 * kUsPerMs;
  CHECK(energy_mj(mixed, m) == doctest::Approx(0.01 * 52.2 + 0.99 * 0.06));
  CHECK(energy_mj(StateDurations{}, m) == 0.0);
}

TEST_CASE("energy model validation") {
  EnergyModel m;
  CHECK_NOTHROW(m.validate());
  m.idle_listen_mw = 60;
  CHECK_THROWS(m.validate());
  m = {};
  m.sleep_mw = -1;
  CHECK_THROWS(m.validate());
}

TEST_CASE("state tracker splits time exactly") {
  RadioStateTracker t(RadioState::Sleep, 0);
  t.set(100, RadioState::IdleListen);
  t.set(150, RadioState::Tx);
  t.set(170, RadioState::Sleep);
  t.finish(1000);
  const auto& d = t.totals();
  CHECK(d[static_cast<std::size_t>(RadioState::IdleListen)] == 50);
  CHECK(d[static_cast<std::size_t>(RadioState::Tx)] == 20);
  CHECK(d[static_cast<std::size_t>(RadioState::Sleep)] == 930);
  CHECK(std::accumulate(d.begin(), d.end(), SimTime{0}) == 1000);
}

TEST_CASE("nearest-rank statistics") {
  std::vector<SimTime> one{1000};
  const auto s1 = *latency_stats(one);
  CHECK(s1.mean_us == 1000);
  CHECK(s1.p50_us == 1000);
  CHECK(s1.p99_us == 1000);
  CHECK(s1.max_us == 1000);

  std::vector<SimTime> hundred(100);
  for (int i = 0; i < 100; ++i) hundred[i] = (100 - i) * kUsPerMs;  // unsorted on purpose
  const auto s = *latency_stats(hundred);
  CHECK(s.p50_us == 50 * kUsPerMs);
  CHECK(s.p99_us == 99 * kUsPerMs);
  CHECK(s.max_us == 100 * kUsPerMs);
  CHECK(s.mean_us == doctest::Approx(50.5 * kUsPerMs));
  CHECK_FALSE(latency_stats(std::vector<SimTime>{}).has_value());
}

TEST_CASE("merge adds counters and pools samples") {
  MetricsLedger a, b;
  a.node(1).at(TrafficClass::NormalHigh) = {3, 2, 1, {30, 10}};
  a.superframes = 10;
  a.bnc_awake_superframes = 2;
  b.node(1).at(TrafficClass::NormalHigh) = {1, 1, 0, {20}};
  b.node(2).spurious_wakeups = 4;
  b.superframes = 10;
  b.bnc_awake_superframes = 3;
  MetricsLedger ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);
  ab.normalize();
  ba.normalize();
  CHECK(ab.runs == 2);
  const auto& c = ab.node(1).at(TrafficClass::NormalHigh);
  CHECK(c.offered == 4);
  CHECK(c.latencies == std::vector<SimTime>{10, 20, 30});
  CHECK(ab.node(2).spurious_wakeups == 4);
  CHECK(*ab.bnc_awake_fraction() == doctest::Approx(0.25));

  std::ostringstream x, y;
  write_node_csv(x, {"agg", "1..2", "csma"}, ab, EnergyModel{});
  write_node_csv(y, {"agg", "1..2", "csma"}, ba, EnergyModel{});
  CHECK(x.str() == y.str());
}

TEST_CASE("node CSV layout") {
  MetricsLedger l;
  l.node(1).at(TrafficClass::NormalHigh) = {4, 3, 1, {1000, 2000, 3000}};
  l.node(1).state_us[static_cast<std::size_t>(RadioState::Sleep)] = kUsPerSecond;
  l.node(1).spurious_wakeups = 2;
  std::ostringstream os;
  write_node_csv(os, {"r1", "7", "csma"}, l, EnergyModel{});
  const std::string expected =
      "run_id,seed,mac,node_id,class,offered,delivered,dropped,pdr,mean_latency_us,p50_us,p99_us,max_us,energy_mj,"
      "spurious_wakeups\n"
      "r1,7,csma,1,all,4,3,1,0.750000,2000.000,2000,3000,3000,0.060000,2\n"
      "r1,7,csma,1,normal_high,4,3,1,0.750000,2000.000,2000,3000,3000,,\n";
  CHECK(os.str() == expected);
}

TEST_CASE("a node with no traffic leaves ratio and latency cells empty") {
  MetricsLedger l;
  l.node(0);
  std::ostringstream os;
  write_node_csv(os, {"r", "1", "tdma"}, l, EnergyModel{}, false);
  CHECK(os.str() == "r,1,tdma,0,all,0,0,0,,,,,,0.000000,0\n");
}

TEST_CASE("summary CSV carries the coordinator awake fraction") {
  MetricsLedger l;
  l.horizon_us = 100;
  l.superframes = 430;
  l.bnc_awake_superframes = 52;
  std::ostringstream os;
  write_summary_csv(os, {"r", "1", "csma"}, l, false);
  CHECK(os.str().find(",430,52,0.120930,") != std::string::npos);
}
