#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "vanetsim/half.hpp"
#include "vanetsim/mobility.hpp"
#include "vanetsim/node_id.hpp"
#include "vanetsim/packets.hpp"
#include "vanetsim/time.hpp"

namespace vanetsim {

// Path ranking key. Lexicographic: minimum speed metric first, then minimum
// stop_times metric, then minimum hop count; member order drives the
// comparison. With all metrics zero this degenerates to plain hop count.
struct MetricTriple {
  Half speed_metric{};
  Half stop_metric{};
  std::int32_t hop_count{0};

  auto operator<=>(const MetricTriple&) const = default;
};

inline constexpr std::int32_t kUnadvertised = std::numeric_limits<std::int32_t>::max();

// One maintained path. (next_hop, last_hop) is the link-disjointness tag:
// within an entry no two paths may share a next hop or a last hop.
struct PathRecord {
  NodeId next_hop{0};
  NodeId last_hop{0};
  std::int32_t hop_count{0};
  Half speed_metric{};
  Half stop_metric{};
  SimTime expiry;
};

inline MetricTriple triple_of(const PathRecord& p) {
  return MetricTriple{p.speed_metric, p.stop_metric, p.hop_count};
}

// Per-destination multipath route state. All stored paths belong to the
// current seqno; advertised_hop_count is frozen the first time this entry is
// advertised under that seqno and only resets when the seqno moves.
struct RouteEntry {
  std::uint32_t seqno{0};
  bool seqno_valid{false};
  std::int32_t advertised_hop_count{kUnadvertised};
  Half advertised_speed_metric{};
  Half advertised_stop_metric{};
  // Last learned kinematics of the destination, for replies from stored state.
  Heading dest_dir{Heading::North};
  SpeedCmps dest_speed{0};
  std::int32_t dest_stop{0};
  bool dest_info_valid{false};
  std::vector<PathRecord> paths;
  // Upstream neighbors routing through us; targets for route-error reports.
  std::set<NodeId> precursors;

  void prune_expired(SimTime now) {
    std::erase_if(paths, [now](const PathRecord& p) { return p.expiry <= now; });
  }

  bool has_valid_path(SimTime now) const {
    return std::any_of(paths.begin(), paths.end(),
                       [now](const PathRecord& p) { return p.expiry > now; });
  }

  // Minimum unexpired path under the metric order; ties broken by the lowest
  // next-hop id so selection is deterministic.
  PathRecord* select_path(SimTime now) {
    PathRecord* best = nullptr;
    for (auto& p : paths) {
      if (p.expiry <= now) continue;
      if (!best || std::pair(triple_of(p), p.next_hop) <
                       std::pair(triple_of(*best), best->next_hop))
        best = &p;
    }
    return best;
  }

  const PathRecord* select_path(SimTime now) const {
    return const_cast<RouteEntry*>(this)->select_path(now);
  }

  PathRecord* find_pair(NodeId next, NodeId last) {
    for (auto& p : paths)
      if (p.next_hop == next && p.last_hop == last) return &p;
    return nullptr;
  }

  // Link-disjointness: a new path must differ from every stored path in both
  // its next hop and its last hop.
  bool disjoint_from_all(NodeId next, NodeId last) const {
    return std::none_of(paths.begin(), paths.end(), [&](const PathRecord& p) {
      return p.next_hop == next || p.last_hop == last;
    });
  }

  std::int32_t max_hop_count() const {
    std::int32_t m = 0;
    for (const auto& p : paths) m = std::max(m, p.hop_count);
    return m;
  }

  // Drops every path through a broken neighbor; returns how many were lost.
  std::size_t remove_paths_via(NodeId next_hop) {
    const auto before = paths.size();
    std::erase_if(paths, [next_hop](const PathRecord& p) { return p.next_hop == next_hop; });
    return before - paths.size();
  }

  // Seqno bump on loss of the last path, so stale advertisements for the old
  // seqno cannot resurrect the route.
  void invalidate() {
    paths.clear();
    if (seqno_valid) ++seqno;
    advertised_hop_count = kUnadvertised;
    advertised_speed_metric = Half::zero();
    advertised_stop_metric = Half::zero();
  }

  // Called when this entry is first advertised under the current seqno.
  void freeze_advertisement(Half speed_metric, Half stop_metric) {
    if (advertised_hop_count != kUnadvertised) return;
    advertised_hop_count = max_hop_count();
    advertised_speed_metric = speed_metric;
    advertised_stop_metric = stop_metric;
  }
};

enum class AdvertVerdict : std::uint8_t {
  AdoptedNewSeqno,  // fresher seqno: old paths discarded, path installed
  Inserted,         // same seqno, new disjoint alternate path installed
  Refreshed,        // same seqno, existing path's lifetime extended
  Rejected,         // stale seqno, hop-count bound violated, or not disjoint
};

inline bool installed(AdvertVerdict v) {
  return v == AdvertVerdict::AdoptedNewSeqno || v == AdvertVerdict::Inserted;
}
inline bool usable(AdvertVerdict v) { return v != AdvertVerdict::Rejected; }

// Core route-update rule shared by RREQ (reverse path) and RREP (forward
// path) processing. adv_hop_count is the hop count carried by the
// advertisement; the path installs with adv_hop_count + 1 hops.
//
// A fresher seqno replaces everything. At the current seqno an advertisement
// is accepted only strictly below the frozen advertised hop count, which is
// the loop-freedom invariant: no accepted path may reach the hop count this
// node has already advertised.
inline AdvertVerdict accept_advertisement(RouteEntry& entry, std::uint32_t seqno,
                                          std::int32_t adv_hop_count, NodeId next_hop,
                                          NodeId last_hop, Half speed_metric,
                                          Half stop_metric, SimTime now,
                                          Duration lifetime) {
  entry.prune_expired(now);
  const SimTime expiry = now + lifetime;

  if (!entry.seqno_valid || seqno > entry.seqno) {
    entry.seqno = seqno;
    entry.seqno_valid = true;
    entry.paths.clear();
    entry.advertised_hop_count = kUnadvertised;
    entry.advertised_speed_metric = Half::zero();
    entry.advertised_stop_metric = Half::zero();
    entry.paths.push_back(PathRecord{next_hop, last_hop, adv_hop_count + 1, speed_metric,
                                     stop_metric, expiry});
    return AdvertVerdict::AdoptedNewSeqno;
  }

  if (seqno < entry.seqno) return AdvertVerdict::Rejected;

  if (entry.advertised_hop_count != kUnadvertised &&
      adv_hop_count >= entry.advertised_hop_count)
    return AdvertVerdict::Rejected;

  if (PathRecord* existing = entry.find_pair(next_hop, last_hop)) {
    if (existing->hop_count != adv_hop_count + 1) return AdvertVerdict::Rejected;
    existing->expiry = std::max(existing->expiry, expiry);
    existing->speed_metric = speed_metric;
    existing->stop_metric = stop_metric;
    return AdvertVerdict::Refreshed;
  }

  if (!entry.disjoint_from_all(next_hop, last_hop)) return AdvertVerdict::Rejected;

  entry.paths.push_back(
      PathRecord{next_hop, last_hop, adv_hop_count + 1, speed_metric, stop_metric, expiry});
  return AdvertVerdict::Inserted;
}

using RoutingTable = std::map<NodeId, RouteEntry>;

}  // namespace vanetsim
