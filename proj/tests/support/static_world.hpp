#pragma once

// Test-only harness: routers wired to a radio over scripted, motionless
// kinematics. Keeps protocol tests independent of the mobility model.

#include <memory>
#include <vector>

#include "vanetsim/radio.hpp"
#include "vanetsim/router.hpp"

namespace vanetsim::testing {

struct ScriptedNode {
  Position position;
  Heading heading{Heading::East};
  double speed_mps{0.0};
  std::int32_t stop_count{0};
};

class StaticWorld : public RouterEnv {
 public:
  struct Delivery {
    NodeId at;
    DataPacket packet;
    SimTime when;
  };
  struct Drop {
    NodeId at;
    DataPacket packet;
    DropReason reason;
  };

  StaticWorld(std::vector<ScriptedNode> nodes, Protocol protocol,
              RadioConfig radio_config = jitterless_radio(), RouterConfig router_config = {})
      : nodes_(std::move(nodes)),
        radio_rng_(99, RngStreamId::Radio),
        radio_(radio_config, engine_, radio_rng_) {
    for (const auto& n : nodes_) positions_.push_back(n.position);
    radio_.set_positions(positions_);
    radio_.set_deliver([this](NodeId receiver, NodeId sender, const Packet& p) {
      routers_[receiver]->receive_packet(sender, p);
    });
    radio_.set_failure([this](NodeId sender, NodeId target, const Packet& p) {
      routers_[sender]->link_failure(target, p);
    });
    for (NodeId id = 0; id < nodes_.size(); ++id)
      routers_.push_back(std::make_unique<Router>(id, MetricPolicy(protocol), router_config,
                                                  *this));
  }

  static RadioConfig jitterless_radio() {
    RadioConfig rc;
    rc.broadcast_jitter_max = Duration::zero();
    return rc;
  }

  Router& router(NodeId id) { return *routers_[id]; }
  EventQueue& engine() { return engine_; }
  Radio& radio() { return radio_; }
  std::vector<ScriptedNode>& scripted_nodes() { return nodes_; }

  void move_node(NodeId id, Position p) {
    nodes_[id].position = p;
    positions_[id] = p;
  }

  void send_data(NodeId source, NodeId destination, std::uint16_t flow = 0,
                 std::uint32_t seq = 0) {
    DataPacket pkt;
    pkt.flow = flow;
    pkt.seq = seq;
    pkt.source = source;
    pkt.destination = destination;
    pkt.payload_bytes = 512;
    routers_[source]->originate_data(pkt);
  }

  void run_for(Duration d) { engine_.run_until(engine_.now() + d); }

  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  const std::vector<Drop>& drops() const { return drops_; }

  // Observes every packet handed to the radio: (sender, target-or-kNoNode, packet).
  using Tap = std::function<void(NodeId, NodeId, const Packet&)>;
  void set_tap(Tap tap) { tap_ = std::move(tap); }

  // --- RouterEnv --------------------------------------------------------
  SimTime now() const override { return engine_.now(); }
  void send_broadcast(NodeId from, const Packet& packet) override {
    if (tap_) tap_(from, kNoNode, packet);
    radio_.broadcast(from, packet);
  }
  void send_unicast(NodeId from, NodeId to, const Packet& packet) override {
    if (tap_) tap_(from, to, packet);
    radio_.unicast(from, to, packet);
  }
  EventHandle schedule_timer(SimTime at, std::function<void()> fn) override {
    return engine_.schedule(at, EventKind::TimerExpiry, std::move(fn));
  }
  void cancel_timer(EventHandle handle) override { engine_.cancel(handle); }
  Heading heading_of(NodeId node) const override { return nodes_[node].heading; }
  SpeedCmps speed_of(NodeId node) const override {
    return quantize_speed(nodes_[node].speed_mps);
  }
  std::int32_t stop_times_of(NodeId node) const override { return nodes_[node].stop_count; }
  void data_delivered(NodeId at, const DataPacket& packet) override {
    deliveries_.push_back(Delivery{at, packet, engine_.now()});
  }
  void data_dropped(NodeId at, const DataPacket& packet, DropReason reason) override {
    drops_.push_back(Drop{at, packet, reason});
  }

 private:
  std::vector<ScriptedNode> nodes_;
  std::vector<Position> positions_;
  EventQueue engine_;
  RngStream radio_rng_;
  Radio radio_;
  std::vector<std::unique_ptr<Router>> routers_;
  std::vector<Delivery> deliveries_;
  std::vector<Drop> drops_;
  Tap tap_;
};

// Chain of n nodes spaced 200 m apart along the x axis, all heading east.
inline std::vector<ScriptedNode> chain_nodes(std::size_t n) {
  std::vector<ScriptedNode> nodes;
  for (std::size_t i = 0; i < n; ++i)
    nodes.push_back(ScriptedNode{Position{200.0 * static_cast<double>(i), 0.0}});
  return nodes;
}

}  // namespace vanetsim::testing
