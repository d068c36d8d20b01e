#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vanetsim/codec.hpp"
#include "vanetsim/event_queue.hpp"
#include "vanetsim/grid.hpp"
#include "vanetsim/node_id.hpp"
#include "vanetsim/packets.hpp"
#include "vanetsim/rng.hpp"

namespace vanetsim {

struct RadioConfig {
  double range_m{250.0};
  std::int64_t bitrate_bps{2'000'000};
  Duration broadcast_jitter_max{Duration::from_ms(10)};
  double loss_probability{0.0};
  // Emulated MAC-level retransmission failure latency for dead unicast links.
  Duration link_failure_delay{Duration::from_ms(50)};
};

// Unit-disk connectivity; distance exactly equal to the range counts as
// connected (fixed convention, boundary inclusive).
inline std::vector<NodeId> neighbors(NodeId self, std::span<const Position> positions,
                                     double range_m) {
  std::vector<NodeId> out;
  for (NodeId id = 0; id < positions.size(); ++id) {
    if (id == self) continue;
    if (distance(positions[self], positions[id]) <= range_m) out.push_back(id);
  }
  return out;
}

// Abstract broadcast/unicast channel. No CSMA or collision model: randomized
// broadcast jitter breaks rebroadcast synchronization instead, and unicast
// into a dead link surfaces as a delayed link-failure notification.
class Radio {
 public:
  struct Sizes {
    std::uint64_t control_transmissions{0};
    std::uint64_t data_transmissions{0};
  };

  using DeliverFn = std::function<void(NodeId receiver, NodeId sender, const Packet&)>;
  using FailureFn = std::function<void(NodeId sender, NodeId target, const Packet&)>;

  Radio(RadioConfig config, EventQueue& engine, RngStream& rng)
      : config_(config), engine_(&engine), rng_(&rng) {}

  void set_positions(std::span<const Position> positions) { positions_ = positions; }
  void set_deliver(DeliverFn fn) { deliver_ = std::move(fn); }
  void set_failure(FailureFn fn) { failure_ = std::move(fn); }

  const RadioConfig& config() const { return config_; }
  std::uint64_t control_transmissions() const { return counters_.control_transmissions; }
  std::uint64_t data_transmissions() const { return counters_.data_transmissions; }

  void broadcast(NodeId sender, const Packet& packet) {
    count(packet);
    const Duration tx = transfer_delay(packet);
    for (NodeId id : neighbors(sender, positions_, config_.range_m)) {
      if (config_.loss_probability > 0.0 && rng_->bernoulli(config_.loss_probability))
        continue;
      Duration jitter = config_.broadcast_jitter_max.ns > 0
                            ? rng_->uniform_duration(config_.broadcast_jitter_max)
                            : Duration::zero();
      schedule_delivery(id, sender, packet, tx + jitter);
    }
  }

  void unicast(NodeId sender, NodeId target, const Packet& packet) {
    count(packet);
    const bool in_range =
        distance(positions_[sender], positions_[target]) <= config_.range_m;
    if (!in_range) {
      // Link dead: one failure notification per attempted packet.
      Packet copy = packet;
      NodeId s = sender, t = target;
      engine_->schedule(engine_->now() + config_.link_failure_delay, EventKind::TimerExpiry,
                        [this, s, t, copy] { failure_(s, t, copy); });
      return;
    }
    if (config_.loss_probability > 0.0 && rng_->bernoulli(config_.loss_probability)) return;
    schedule_delivery(target, sender, packet, transfer_delay(packet));
  }

  Duration transfer_delay(const Packet& packet) const {
    const auto bits = static_cast<std::int64_t>(wire_size(packet)) * 8;
    return Duration::from_ns((bits * 1'000'000'000 + config_.bitrate_bps / 2) /
                             config_.bitrate_bps);
  }

 private:
  void count(const Packet& packet) {
    // Hop-wise counting: one control transmission per transmit call,
    // independent of how many receivers hear it.
    if (is_control(packet))
      ++counters_.control_transmissions;
    else
      ++counters_.data_transmissions;
  }

  void schedule_delivery(NodeId receiver, NodeId sender, const Packet& packet,
                         Duration delay) {
    Packet copy = packet;
    engine_->schedule(engine_->now() + delay, EventKind::RadioDelivery,
                      [this, receiver, sender, copy] { deliver_(receiver, sender, copy); });
  }

  RadioConfig config_;
  EventQueue* engine_;
  RngStream* rng_;
  std::span<const Position> positions_;
  DeliverFn deliver_;
  FailureFn failure_;
  Sizes counters_;
};

}  // namespace vanetsim
