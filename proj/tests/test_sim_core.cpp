#include <catch2/catch_amalgamated.hpp>

#include "vanetsim/event_queue.hpp"
#include "vanetsim/rng.hpp"

using namespace vanetsim;

TEST_CASE("events dispatch in (fire_at, sequence) order") {
  EventQueue q;
  std::vector<int> order;
  q.schedule(SimTime::from_ms(5), EventKind::TimerExpiry, [&] { order.push_back(2); });
  q.schedule(SimTime::from_ms(1), EventKind::TimerExpiry, [&] { order.push_back(1); });
  q.schedule(SimTime::from_ms(9), EventKind::TimerExpiry, [&] { order.push_back(3); });
  REQUIRE(q.run_until(SimTime::from_ms(10)) == 3);
  REQUIRE(order == std::vector<int>{1, 2, 3});
  REQUIRE(q.now() == SimTime::from_ms(10));
}

TEST_CASE("event scheduled at t=0 during setup dispatches first") {
  EventQueue q;
  std::vector<int> order;
  q.schedule(SimTime::from_ms(1), EventKind::TimerExpiry, [&] { order.push_back(2); });
  q.schedule(SimTime::zero(), EventKind::TimerExpiry, [&] { order.push_back(1); });
  q.run_until(SimTime::from_ms(2));
  REQUIRE(order == std::vector<int>{1, 2});
}

TEST_CASE("equal fire times dispatch in scheduling order") {
  EventQueue q;
  std::vector<int> order;
  for (int i = 0; i < 5; ++i)
    q.schedule(SimTime::from_ms(3), EventKind::TimerExpiry, [&, i] { order.push_back(i); });
  q.run_until(SimTime::from_ms(3));
  REQUIRE(order == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("cancelled events never dispatch") {
  EventQueue q;
  bool fired = false;
  const auto handle =
      q.schedule(SimTime::from_ms(2), EventKind::TimerExpiry, [&] { fired = true; });
  q.cancel(handle);
  REQUIRE(q.run_until(SimTime::from_ms(5)) == 0);
  REQUIRE_FALSE(fired);
}

TEST_CASE("empty queue run_until just advances the clock") {
  EventQueue q;
  REQUIRE(q.run_until(SimTime::from_seconds(400.0)) == 0);
  REQUIRE(q.now() == SimTime::from_seconds(400.0));
}

TEST_CASE("run stops exactly at the requested end time") {
  EventQueue q;
  int fired = 0;
  q.schedule(SimTime::from_seconds(399.0), EventKind::TimerExpiry, [&] { ++fired; });
  q.schedule(SimTime::from_seconds(401.0), EventKind::TimerExpiry, [&] { ++fired; });
  q.run_until(SimTime::from_seconds(400.0));
  REQUIRE(fired == 1);
  REQUIRE(q.now() == SimTime::from_seconds(400.0));
}

TEST_CASE("scheduling in the past aborts the run") {
  EventQueue q;
  q.schedule(SimTime::from_ms(1), EventKind::TimerExpiry, [&] {
    REQUIRE_THROWS_AS(
        q.schedule(SimTime::zero(), EventKind::TimerExpiry, [] {}), SimError);
  });
  q.run_until(SimTime::from_ms(2));
}

TEST_CASE("clock never moves backwards across dispatches") {
  EventQueue q;
  RngStream rng(7, RngStreamId::Radio);
  SimTime last = SimTime::zero();
  bool monotone = true;
  for (int i = 0; i < 1000; ++i) {
    const auto at = SimTime::from_ns(static_cast<std::int64_t>(rng.uniform_index(1'000'000)));
    q.schedule(at, EventKind::TimerExpiry, [&, at] {
      monotone = monotone && q.now() >= last && q.now() == at;
      last = q.now();
    });
  }
  q.run_until(SimTime::from_ms(2));
  REQUIRE(monotone);
}

TEST_CASE("identical seed and stream reproduce the same value sequence") {
  RngStream a(42, RngStreamId::Mobility);
  RngStream b(42, RngStreamId::Mobility);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("different streams of one seed diverge") {
  RngStream a(42, RngStreamId::Mobility);
  RngStream b(42, RngStreamId::Traffic);
  int equal = 0;
  for (int i = 0; i < 100; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  REQUIRE(equal == 0);
}

TEST_CASE("uniform_index stays in range and covers its support") {
  RngStream rng(1, RngStreamId::Topology);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[rng.uniform_index(7)];
  for (int h : hits) REQUIRE(h > 0);
}
