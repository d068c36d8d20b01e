#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "vanetsim/packets.hpp"

namespace vanetsim {

enum class Protocol : std::uint8_t { Aomdv, SdAomdv, SsdAomdv };

inline const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Aomdv: return "aomdv";
    case Protocol::SdAomdv: return "sd-aomdv";
    case Protocol::SsdAomdv: return "ssd-aomdv";
  }
  return "?";
}

inline std::optional<Protocol> parse_protocol(std::string_view s) {
  if (s == "aomdv") return Protocol::Aomdv;
  if (s == "sd-aomdv") return Protocol::SdAomdv;
  if (s == "ssd-aomdv") return Protocol::SsdAomdv;
  return std::nullopt;
}

// The pluggable part of the route machinery: which mobility ingredients the
// protocol folds into its routing metric. Plain AOMDV uses none of them and
// degenerates to hop-count routing; SD adds speed and direction; SSD adds
// stop_times on top.
class MetricPolicy {
 public:
  constexpr explicit MetricPolicy(Protocol p) : protocol_(p) {}

  Protocol protocol() const { return protocol_; }
  bool direction_aware() const { return protocol_ != Protocol::Aomdv; }
  bool speed_aware() const { return protocol_ != Protocol::Aomdv; }
  bool stop_aware() const { return protocol_ == Protocol::SsdAomdv; }

  // An intermediate node is admissible when it moves in the source's or the
  // destination's direction; endpoints are never subjected to this check.
  bool admits(Heading node_dir, Heading src_dir, Heading dest_dir) const {
    if (!direction_aware()) return true;
    return node_dir == src_dir || node_dir == dest_dir;
  }

  // Only the source direction is known while a request travels outward.
  bool admits_for_request(Heading node_dir, Heading src_dir) const {
    if (!direction_aware()) return true;
    return node_dir == src_dir;
  }

  // Request-side accumulation against the source's values (the destination's
  // are unknown until the reply).
  void update_request_metrics(RouteRequest& rreq, SpeedCmps own_speed,
                              std::int32_t own_stops) const {
    if (speed_aware())
      rreq.speed_metric =
          max(rreq.speed_metric, abs_diff(Half::from_int(rreq.src_speed), own_speed));
    if (stop_aware())
      rreq.stop_metric =
          max(rreq.stop_metric, abs_diff(Half::from_int(rreq.src_stoptimes), own_stops));
  }

  // Reply-side accumulation: each forwarder contributes its distance to the
  // carried source/destination average.
  void update_reply_metrics(RouteReply& rrep, SpeedCmps own_speed,
                            std::int32_t own_stops) const {
    if (speed_aware())
      rrep.speed_metric = max(rrep.speed_metric, abs_diff(rrep.avg_speed, own_speed));
    if (stop_aware())
      rrep.stop_metric = max(rrep.stop_metric, abs_diff(rrep.avg_stop, own_stops));
  }

 private:
  Protocol protocol_;
};

}  // namespace vanetsim
