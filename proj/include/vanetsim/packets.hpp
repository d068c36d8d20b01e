#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "vanetsim/half.hpp"
#include "vanetsim/mobility.hpp"
#include "vanetsim/node_id.hpp"

namespace vanetsim {

// Protocol-visible speeds are integer centimeters/second; sampled kinematic
// speeds are quantized once at the protocol boundary so that all metric
// arithmetic is exact.
using SpeedCmps = std::int32_t;

inline SpeedCmps quantize_speed(double mps) {
  return static_cast<SpeedCmps>(std::llround(mps * 100.0));
}

// Route request, flooded during discovery. first_hop tags the neighbor of
// the source through which this flood copy left, which is what makes
// link-disjoint reverse paths recognizable downstream.
struct RouteRequest {
  std::uint32_t rreq_id{0};
  NodeId source{0};
  std::uint32_t source_seqno{0};
  NodeId destination{0};
  std::optional<std::uint32_t> dest_seqno_known;
  std::uint8_t hop_count{0};
  NodeId first_hop{0};
  Heading src_dir{Heading::North};
  SpeedCmps src_speed{0};
  std::int32_t src_stoptimes{0};
  Half speed_metric{};  // centi-m/s, halves
  Half stop_metric{};   // stop counts, halves

  bool operator==(const RouteRequest&) const = default;
};

// Route reply, unicast back along reverse paths. last_hop tags the link
// adjacent to the destination of the advertised path.
struct RouteReply {
  NodeId source{0};       // the route-discovery originator the reply travels to
  NodeId destination{0};  // the node the advertised route leads to
  std::uint32_t dest_seqno{0};
  std::uint8_t hop_count{0};
  NodeId last_hop{0};
  Half avg_speed{};  // centi-m/s, halves
  Half avg_stop{};
  Half speed_metric{};
  Half stop_metric{};
  Heading src_dir{Heading::North};
  Heading dest_dir{Heading::North};

  bool operator==(const RouteReply&) const = default;
};

struct RouteError {
  struct Unreachable {
    NodeId destination{0};
    std::uint32_t seqno{0};
    bool operator==(const Unreachable&) const = default;
  };
  std::vector<Unreachable> unreachable;

  bool operator==(const RouteError&) const = default;
};

struct DataPacket {
  std::uint16_t flow{0};
  std::uint32_t seq{0};
  NodeId source{0};
  NodeId destination{0};
  std::uint16_t payload_bytes{0};
  std::uint8_t hops{0};  // transmissions so far; in-memory only, not on the wire

  bool operator==(const DataPacket&) const = default;
};

using Packet = std::variant<RouteRequest, RouteReply, RouteError, DataPacket>;

// RREQ/RREP/RERR are routing control traffic; everything else is data.
inline bool is_control(const Packet& p) {
  return !std::holds_alternative<DataPacket>(p);
}

}  // namespace vanetsim
