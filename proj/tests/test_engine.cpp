#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "wban/engine.hpp"

using namespace wban;

TEST_CASE("events fire in time order with insertion-order ties") {
  EventQueue q;
  std::vector<std::uint64_t> order;
  q.schedule(10, EventKind::TxEnd, 1, 3);
  q.schedule(5, EventKind::TxEnd, 1, 1);
  q.schedule(10, EventKind::TxEnd, 1, 4);
  q.schedule(5, EventKind::TxEnd, 1, 2);
  q.run_until(100, [&](const Event& e) { order.push_back(e.arg); });
  CHECK(order == std::vector<std::uint64_t>{1, 2, 3, 4});
  CHECK(q.now() == 100);
}

TEST_CASE("an event scheduled at now fires before later events") {
  EventQueue q;
  std::vector<int> seen;
  q.schedule(3, EventKind::BeaconDue, 0, 0);
  q.schedule(7, EventKind::BeaconDue, 0, 2);
  q.run_until(10, [&](const Event& e) {
    seen.push_back(static_cast<int>(e.arg));
    if (e.arg == 0) q.schedule(q.now(), EventKind::BeaconDue, 0, 1);
  });
  CHECK(seen == std::vector<int>{0, 1, 2});
}

TEST_CASE("cancelled events never dispatch") {
  EventQueue q;
  int fired = 0;
  auto h = q.schedule(5, EventKind::AckTimeout, 2);
  q.schedule(6, EventKind::AckTimeout, 3);
  CHECK(q.cancel(h));
  CHECK_FALSE(h.valid());
  CHECK_FALSE(q.cancel(h));
  q.run_until(10, [&](const Event& e) {
    CHECK(e.node == 3);
    ++fired;
  });
  CHECK(fired == 1);
}

TEST_CASE("run_until on an empty queue returns the end time") {
  EventQueue q;
  CHECK(q.run_until(42, [](const Event&) { FAIL("nothing to dispatch"); }) == 42);
}

TEST_CASE("events past the end time stay queued") {
  EventQueue q;
  int fired = 0;
  q.schedule(5, EventKind::TxEnd);
  q.schedule(15, EventKind::TxEnd);
  q.run_until(10, [&](const Event&) { ++fired; });
  CHECK(fired == 1);
  CHECK(q.pending() == 1);
  CHECK(q.now() == 10);
}

TEST_CASE("scheduling into the past is a logic error") {
  EventQueue q;
  q.schedule(5, EventKind::TxEnd);
  q.run_until(5, [](const Event&) {});
  CHECK_THROWS(q.schedule(4, EventKind::TxEnd));
}

TEST_CASE("dispatcher failures carry the recent event tail") {
  EventQueue q;
  for (int i = 1; i <= 3; ++i) q.schedule(i, EventKind::CcaDue, static_cast<NodeId>(i));
  try {
    q.run_until(10, [](const Event& e) {
      if (e.fire_at == 3) throw std::runtime_error("boom");
    });
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    const std::string what = e.what();
    CHECK(what.find("boom") != std::string::npos);
    CHECK(what.find("2 CcaDue 2") != std::string::npos);
  }
}

TEST_CASE("substreams are reproducible and independent of each other") {
  Rng a = Rng::substream(7, 3), b = Rng::substream(7, 3), c = Rng::substream(7, 4);
  bool differs = false;
  for (int i = 0; i < 32; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs |= x != c.next();
  }
  CHECK(differs);
  CHECK(mac_stream(5) != traffic_stream(5));
  CHECK(traffic_stream(5) != mac_stream(6));
}

TEST_CASE("uniform_int covers its whole range and nothing else") {
  Rng r(11);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 10000; ++i) {
    const auto v = r.uniform_int(3, 10);
    REQUIRE(v >= 3);
    REQUIRE(v <= 10);
    seen.insert(v);
  }
  CHECK(seen.size() == 8);
}

TEST_CASE("exponential draws have the requested mean") {
  Rng r(5);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += r.exponential(3.0);
  CHECK(sum / n == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("certain bernoulli outcomes consume no draws") {
  Rng a(9), b(9);
  CHECK(a.bernoulli(1.0));
  CHECK_FALSE(a.bernoulli(0.0));
  CHECK(a.next() == b.next());
}
