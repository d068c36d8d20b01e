#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "vanetsim/routing_table.hpp"

using namespace vanetsim;

namespace {

PathRecord path(NodeId next, NodeId last, int hops, double speed, double stop,
                double expiry_s = 100.0) {
  PathRecord p;
  p.next_hop = next;
  p.last_hop = last;
  p.hop_count = hops;
  p.speed_metric = Half{static_cast<std::int64_t>(speed * 2)};
  p.stop_metric = Half{static_cast<std::int64_t>(stop * 2)};
  p.expiry = SimTime::from_seconds(expiry_s);
  return p;
}

const SimTime kNow = SimTime::from_seconds(1.0);
const Duration kLife = Duration::from_seconds(3.0);

}  // namespace

TEST_CASE("selection follows the (speed, stop, hops) lexicographic order") {
  RouteEntry entry;
  entry.paths = {path(1, 11, 4, 3, 1), path(2, 12, 2, 2, 5), path(3, 13, 6, 2, 1)};
  const auto* best = entry.select_path(kNow);
  REQUIRE(best != nullptr);
  REQUIRE(best->next_hop == 3);  // triple (2,1,6) wins
  REQUIRE(best->hop_count == 6);
}

TEST_CASE("single path selects itself") {
  RouteEntry entry;
  entry.paths = {path(7, 7, 3, 9, 9)};
  REQUIRE(entry.select_path(kNow)->next_hop == 7);
}

TEST_CASE("fully equal triples break ties toward the lower next hop") {
  RouteEntry entry;
  entry.paths = {path(9, 1, 3, 2, 2), path(4, 2, 3, 2, 2)};
  REQUIRE(entry.select_path(kNow)->next_hop == 4);
}

TEST_CASE("expired paths are never selected") {
  RouteEntry entry;
  entry.paths = {path(1, 1, 1, 0, 0, 0.5), path(2, 2, 9, 9, 9, 100.0)};
  REQUIRE(entry.select_path(kNow)->next_hop == 2);
  entry.paths[1].expiry = SimTime::from_seconds(0.5);
  REQUIRE(entry.select_path(kNow) == nullptr);
}

TEST_CASE("selection agrees with a brute-force enumeration oracle") {
  RngStream rng(7, RngStreamId::Topology);
  for (int trial = 0; trial < 2000; ++trial) {
    RouteEntry entry;
    const int n = 1 + static_cast<int>(rng.uniform_index(6));
    for (int i = 0; i < n; ++i) {
      auto p = path(static_cast<NodeId>(10 + i), static_cast<NodeId>(100 + i),
                    1 + static_cast<int>(rng.uniform_index(8)),
                    static_cast<double>(rng.uniform_index(6)),
                    static_cast<double>(rng.uniform_index(4)));
      entry.paths.push_back(p);
    }
    // Independent scan: minimum raw tuple.
    using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t, NodeId>;
    Key best{INT64_MAX, INT64_MAX, INT64_MAX, kNoNode};
    for (const auto& p : entry.paths)
      best = std::min(best, Key{p.speed_metric.halves, p.stop_metric.halves, p.hop_count,
                                p.next_hop});
    REQUIRE(entry.select_path(kNow)->next_hop == std::get<3>(best));
  }
}

TEST_CASE("fresher seqno discards all older paths") {
  RouteEntry entry;
  REQUIRE(accept_advertisement(entry, 5, 2, 1, 11, Half{}, Half{}, kNow, kLife) ==
          AdvertVerdict::AdoptedNewSeqno);
  REQUIRE(accept_advertisement(entry, 5, 2, 2, 12, Half{}, Half{}, kNow, kLife) ==
          AdvertVerdict::Inserted);
  REQUIRE(entry.paths.size() == 2);

  REQUIRE(accept_advertisement(entry, 6, 4, 3, 13, Half{}, Half{}, kNow, kLife) ==
          AdvertVerdict::AdoptedNewSeqno);
  REQUIRE(entry.seqno == 6);
  REQUIRE(entry.paths.size() == 1);
  REQUIRE(entry.paths[0].next_hop == 3);
}

TEST_CASE("stale seqno advertisements are rejected") {
  RouteEntry entry;
  accept_advertisement(entry, 5, 2, 1, 11, Half{}, Half{}, kNow, kLife);
  REQUIRE(accept_advertisement(entry, 4, 0, 2, 12, Half{}, Half{}, kNow, kLife) ==
          AdvertVerdict::Rejected);
}

TEST_CASE("empty entry accepts any valid advertisement") {
  RouteEntry entry;
  REQUIRE(installed(accept_advertisement(entry, 1, 0, 4, 4, Half{}, Half{}, kNow, kLife)));
  REQUIRE(entry.paths[0].hop_count == 1);
}

TEST_CASE("hop counts at or above the frozen advertised bound are rejected") {
  RouteEntry entry;
  accept_advertisement(entry, 5, 2, 1, 11, Half{}, Half{}, kNow, kLife);
  entry.freeze_advertisement(Half{}, Half{});  // advertised = 3
  REQUIRE(entry.advertised_hop_count == 3);

  // Equal-to-advertised with a fresh disjoint tag: rejected (loop freedom).
  REQUIRE(accept_advertisement(entry, 5, 3, 2, 12, Half{}, Half{}, kNow, kLife) ==
          AdvertVerdict::Rejected);
  // Strictly below: accepted.
  REQUIRE(accept_advertisement(entry, 5, 2, 2, 12, Half{}, Half{}, kNow, kLife) ==
          AdvertVerdict::Inserted);
}

TEST_CASE("duplicate (next,last) refreshes instead of inserting") {
  RouteEntry entry;
  accept_advertisement(entry, 5, 2, 1, 11, Half{}, Half{}, kNow, kLife);
  const auto verdict = accept_advertisement(entry, 5, 2, 1, 11, Half{}, Half{},
                                            kNow + Duration::from_seconds(1), kLife);
  REQUIRE(verdict == AdvertVerdict::Refreshed);
  REQUIRE(entry.paths.size() == 1);
  REQUIRE(entry.paths[0].expiry == kNow + Duration::from_seconds(1) + kLife);
}

TEST_CASE("link-disjointness rejects shared next hops and shared last hops") {
  RouteEntry entry;
  accept_advertisement(entry, 5, 1, 1, 11, Half{}, Half{}, kNow, kLife);
  // shared next hop
  REQUIRE(accept_advertisement(entry, 5, 1, 1, 12, Half{}, Half{}, kNow, kLife) ==
          AdvertVerdict::Rejected);
  // shared last hop
  REQUIRE(accept_advertisement(entry, 5, 1, 2, 11, Half{}, Half{}, kNow, kLife) ==
          AdvertVerdict::Rejected);
  // disjoint in both
  REQUIRE(accept_advertisement(entry, 5, 1, 2, 12, Half{}, Half{}, kNow, kLife) ==
          AdvertVerdict::Inserted);

  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& p : entry.paths) REQUIRE(pairs.insert({p.next_hop, p.last_hop}).second);
}

TEST_CASE("invalidate bumps the seqno and resets the advertisement") {
  RouteEntry entry;
  accept_advertisement(entry, 5, 2, 1, 11, Half{}, Half{}, kNow, kLife);
  entry.freeze_advertisement(Half{3}, Half{1});
  entry.invalidate();
  REQUIRE(entry.paths.empty());
  REQUIRE(entry.seqno == 6);
  REQUIRE(entry.advertised_hop_count == kUnadvertised);
}

TEST_CASE("remove_paths_via drops exactly the broken neighbor's paths") {
  RouteEntry entry;
  entry.paths = {path(1, 11, 2, 0, 0), path(2, 12, 3, 0, 0), path(1, 13, 4, 0, 0)};
  REQUIRE(entry.remove_paths_via(1) == 2);
  REQUIRE(entry.paths.size() == 1);
  REQUIRE(entry.paths[0].next_hop == 2);
}

TEST_CASE("half-unit rationals behave exactly") {
  REQUIRE(Half::mean(3, 4).halves == 7);          // 3.5
  REQUIRE_FALSE(Half::mean(3, 4).is_integral());
  REQUIRE(Half::mean(10, 20) == Half::from_int(15));
  REQUIRE(abs_diff(Half::mean(10, 20), 12) == Half::from_int(3));
  REQUIRE(max(Half{5}, Half{4}) == Half{5});
  REQUIRE(Half{7} < Half{8});
}
