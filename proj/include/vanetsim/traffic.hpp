#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "vanetsim/event_queue.hpp"
#include "vanetsim/node_id.hpp"
#include "vanetsim/rng.hpp"
#include "vanetsim/time.hpp"

namespace vanetsim {

// One constant-bit-rate UDP-style connection.
struct Flow {
  std::uint16_t id{0};
  NodeId source{0};
  NodeId destination{0};
  double rate_pps{4.0};
  std::uint16_t payload_bytes{512};
  SimTime start;
  SimTime stop;
};

// Draws `count` flows over distinct ordered (source, destination) pairs.
// Endpoint selection comes from the topology stream; start offsets spread the
// flows over the start window using the traffic stream.
inline std::vector<Flow> spawn_flows(std::size_t node_count, std::size_t count,
                                     double rate_pps, std::uint16_t payload_bytes,
                                     Duration start_window, SimTime stop,
                                     RngStream& topology_rng, RngStream& traffic_rng) {
  const std::size_t max_pairs = node_count * (node_count - 1);
  if (node_count < 2 || count > max_pairs)
    throw SimError("flow count exceeds available source-destination pairs");

  std::set<std::pair<NodeId, NodeId>> used;
  std::vector<Flow> flows;
  flows.reserve(count);
  while (flows.size() < count) {
    const auto s = static_cast<NodeId>(topology_rng.uniform_index(node_count));
    const auto d = static_cast<NodeId>(topology_rng.uniform_index(node_count));
    if (s == d || !used.insert({s, d}).second) continue;
    Flow f;
    f.id = static_cast<std::uint16_t>(flows.size());
    f.source = s;
    f.destination = d;
    f.rate_pps = rate_pps;
    f.payload_bytes = payload_bytes;
    f.start = traffic_rng.uniform_duration(Duration{start_window.ns - 1});
    f.stop = stop;
    flows.push_back(f);
  }
  return flows;
}

}  // namespace vanetsim
