#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "vanetsim/event_queue.hpp"
#include "vanetsim/metric_policy.hpp"
#include "vanetsim/packets.hpp"
#include "vanetsim/routing_table.hpp"

namespace vanetsim {

enum class DropReason : std::uint8_t {
  DiscoveryFailed,
  NoRoute,
  LinkBroken,
};

inline const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::DiscoveryFailed: return "discovery-failed";
    case DropReason::NoRoute: return "no-route";
    case DropReason::LinkBroken: return "link-broken";
  }
  return "?";
}

struct RouterConfig {
  Duration route_lifetime{Duration::from_seconds(3.0)};
  std::int32_t rreq_retries{2};
  Duration rreq_timeout{Duration::from_seconds(1.0)};  // doubles per retry
  // Off by default: requests flood unfiltered and direction is enforced on
  // replies; enabling prunes the flood to source-direction nodes.
  bool direction_filter_rreq{false};
  // Test hook: emit every control packet with mobility-derived fields zeroed.
  // Output equivalence against a normal run shows the plain-AOMDV policy
  // never acts on those fields.
  bool zero_metric_fields{false};
};

// What the protocol needs from its host node: a clock, the radio, timers,
// kinematic samples, and sinks for delivered/dropped data.
class RouterEnv {
 public:
  virtual ~RouterEnv() = default;

  virtual SimTime now() const = 0;
  virtual void send_broadcast(NodeId from, const Packet& packet) = 0;
  virtual void send_unicast(NodeId from, NodeId to, const Packet& packet) = 0;
  virtual EventHandle schedule_timer(SimTime at, std::function<void()> fn) = 0;
  virtual void cancel_timer(EventHandle handle) = 0;

  virtual Heading heading_of(NodeId node) const = 0;
  virtual SpeedCmps speed_of(NodeId node) const = 0;
  virtual std::int32_t stop_times_of(NodeId node) const = 0;

  virtual void data_delivered(NodeId at, const DataPacket& packet) = 0;
  virtual void data_dropped(NodeId at, const DataPacket& packet, DropReason reason) = 0;
};

// Per-node AOMDV state machine with the metric policy plugged in. One
// instance per node; handlers are pure state transitions driven by delivery,
// failure and timer events.
class Router {
 public:
  Router(NodeId id, MetricPolicy policy, RouterConfig config, RouterEnv& env)
      : id_(id), policy_(policy), cfg_(config), env_(&env) {}

  NodeId id() const { return id_; }
  const RoutingTable& table() const { return table_; }
  RoutingTable& table() { return table_; }
  std::uint32_t own_seqno() const { return seqno_; }

  // Invoked with the destination whose entry changed; drives loop checks.
  void set_route_change_hook(std::function<void(NodeId)> hook) {
    route_change_hook_ = std::move(hook);
  }

  // --- data plane -----------------------------------------------------

  // Application-level send at the source. The packet is already ledgered;
  // no route means buffering behind a route discovery.
  void originate_data(const DataPacket& packet) {
    if (try_forward_data(packet)) return;
    auto& pending = pending_[packet.destination];
    pending.queue.push_back(packet);
    if (!pending.active) start_discovery(packet.destination);
  }

  void receive_data(NodeId prev_hop, const DataPacket& packet) {
    if (packet.destination == id_) {
      env_->data_delivered(id_, packet);
      return;
    }
    if (auto it = table_.find(packet.destination); it != table_.end())
      it->second.precursors.insert(prev_hop);
    if (try_forward_data(packet)) return;
    // Mid-route hole: report the loss upstream and drop.
    report_unreachable(packet.destination);
    env_->data_dropped(id_, packet, DropReason::NoRoute);
  }

  // --- control plane --------------------------------------------------

  void receive_packet(NodeId prev_hop, const Packet& packet) {
    if (const auto* rreq = std::get_if<RouteRequest>(&packet))
      receive_route_request(prev_hop, *rreq);
    else if (const auto* rrep = std::get_if<RouteReply>(&packet))
      receive_route_reply(prev_hop, *rrep);
    else if (const auto* rerr = std::get_if<RouteError>(&packet))
      receive_route_error(prev_hop, *rerr);
    else
      receive_data(prev_hop, std::get<DataPacket>(packet));
  }

  // MAC-level failure notification for an attempted unicast.
  void link_failure(NodeId broken_next_hop, const Packet& packet) {
    std::vector<RouteError::Unreachable> losses;
    for (auto& [dest, entry] : table_) {
      if (entry.remove_paths_via(broken_next_hop) == 0) continue;
      notify_route_change(dest);
      if (!entry.has_valid_path(env_->now())) {
        entry.invalidate();
        if (!entry.precursors.empty())
          losses.push_back(RouteError::Unreachable{dest, entry.seqno});
      }
    }
    if (!losses.empty()) env_->send_broadcast(id_, Packet{RouteError{std::move(losses)}});

    if (const auto* data = std::get_if<DataPacket>(&packet)) {
      // Failover: alternate disjoint paths carry the packet with no new
      // discovery; a source with no alternates re-queues behind one.
      if (try_forward_data(*data)) return;
      if (data->source == id_) {
        originate_data(*data);
        return;
      }
      env_->data_dropped(id_, *data, DropReason::LinkBroken);
    }
  }

 private:
  struct PendingDiscovery {
    bool active{false};
    std::int32_t attempt{0};
    std::uint32_t rreq_id{0};
    EventHandle timer{0};
    std::vector<DataPacket> queue;
  };

  // Duplicate-suppression and reply bookkeeping for one flood.
  struct DiscoveryState {
    SpeedCmps src_speed{0};
    std::int32_t src_stoptimes{0};
    bool answered_or_forwarded{false};
    std::optional<std::uint32_t> reply_seqno;  // destination side: one bump per flood
    std::vector<std::pair<NodeId, NodeId>> used_reverse;
    std::vector<std::pair<NodeId, NodeId>> used_forward;
  };

  // --- discovery ------------------------------------------------------

  void start_discovery(NodeId destination) {
    auto& pending = pending_[destination];
    pending.active = true;
    pending.attempt = 0;
    send_route_request(destination);
  }

  void send_route_request(NodeId destination) {
    auto& pending = pending_[destination];
    ++seqno_;
    ++rreq_id_;
    pending.rreq_id = rreq_id_;

    RouteRequest rreq;
    rreq.rreq_id = rreq_id_;
    rreq.source = id_;
    rreq.source_seqno = seqno_;
    rreq.destination = destination;
    if (auto it = table_.find(destination); it != table_.end() && it->second.seqno_valid)
      rreq.dest_seqno_known = it->second.seqno;
    rreq.hop_count = 0;
    rreq.first_hop = id_;
    rreq.src_dir = env_->heading_of(id_);
    rreq.src_speed = env_->speed_of(id_);
    rreq.src_stoptimes = env_->stop_times_of(id_);

    auto& ds = discovery_state(id_, rreq_id_);
    ds.src_speed = rreq.src_speed;
    ds.src_stoptimes = rreq.src_stoptimes;

    maybe_zero(rreq);
    env_->send_broadcast(id_, Packet{rreq});

    const Duration wait =
        Duration::from_ns(cfg_.rreq_timeout.ns << std::min(pending.attempt, 20));
    pending.timer = env_->schedule_timer(env_->now() + wait,
                                         [this, destination] { discovery_timeout(destination); });
  }

  void discovery_timeout(NodeId destination) {
    auto it = pending_.find(destination);
    if (it == pending_.end() || !it->second.active) return;
    auto& pending = it->second;
    if (pending.attempt < cfg_.rreq_retries) {
      ++pending.attempt;
      send_route_request(destination);
      return;
    }
    // Final retry expired: everything queued for this destination is lost.
    std::vector<DataPacket> dropped = std::move(pending.queue);
    pending_.erase(it);
    for (const auto& pkt : dropped)
      env_->data_dropped(id_, pkt, DropReason::DiscoveryFailed);
  }

  // --- request path ---------------------------------------------------

  void receive_route_request(NodeId prev_hop, RouteRequest rreq) {
    if (rreq.source == id_) return;  // own flood echoed back
    if (cfg_.direction_filter_rreq &&
        !policy_.admits_for_request(env_->heading_of(id_), rreq.src_dir))
      return;

    auto [ds, first_copy] = lookup_discovery(rreq.source, rreq.rreq_id);

    // A receiver one hop from the source becomes the flood copy's tag; this
    // is what keeps reverse paths link-disjoint downstream.
    if (rreq.hop_count == 0) rreq.first_hop = id_;

    auto& reverse = table_[rreq.source];
    const auto verdict =
        accept_advertisement(reverse, rreq.source_seqno, rreq.hop_count, prev_hop,
                             rreq.first_hop, rreq.speed_metric, rreq.stop_metric,
                             env_->now(), cfg_.route_lifetime);
    if (!usable(verdict)) return;
    // The request itself carries fresh kinematics of its source.
    reverse.dest_dir = rreq.src_dir;
    reverse.dest_speed = rreq.src_speed;
    reverse.dest_stop = rreq.src_stoptimes;
    reverse.dest_info_valid = true;
    notify_route_change(rreq.source);
    flush_pending(rreq.source);

    if (rreq.destination == id_) {
      // The destination answers every copy that installed a new disjoint
      // reverse path; that is what seeds multiple forward paths at the source.
      if (installed(verdict)) answer_as_destination(prev_hop, rreq, ds);
      return;
    }

    if (!ds.answered_or_forwarded) {
      ds.answered_or_forwarded = true;
      if (answer_from_route(prev_hop, rreq, ds)) return;
      rebroadcast_request(rreq);
    }
    (void)first_copy;
  }

  void answer_as_destination(NodeId prev_hop, const RouteRequest& rreq, DiscoveryState& ds) {
    if (!ds.reply_seqno) {
      // One seqno bump per flood; later disjoint copies reuse it so the
      // source can hold all resulting paths under a single seqno.
      std::uint32_t floor = rreq.dest_seqno_known.value_or(0);
      seqno_ = std::max(seqno_ + 1, floor + 1);
      ds.reply_seqno = seqno_;
    }
    RouteReply rrep;
    rrep.source = rreq.source;
    rrep.destination = id_;
    rrep.dest_seqno = *ds.reply_seqno;
    rrep.hop_count = 0;
    rrep.last_hop = prev_hop;  // the link this reply travels next to us
    rrep.avg_speed = Half::mean(rreq.src_speed, env_->speed_of(id_));
    rrep.avg_stop = Half::mean(rreq.src_stoptimes, env_->stop_times_of(id_));
    rrep.src_dir = rreq.src_dir;
    rrep.dest_dir = env_->heading_of(id_);
    maybe_zero(rrep);
    env_->send_unicast(id_, prev_hop, Packet{rrep});
  }

  // Reply from stored state when we hold a fresh-enough forward path and our
  // own movement direction is admissible for this source/destination pair.
  bool answer_from_route(NodeId prev_hop, const RouteRequest& rreq, DiscoveryState& ds) {
    auto it = table_.find(rreq.destination);
    if (it == table_.end()) return false;
    auto& entry = it->second;
    if (!entry.seqno_valid || !entry.dest_info_valid) return false;
    if (rreq.dest_seqno_known && entry.seqno < *rreq.dest_seqno_known) return false;
    PathRecord* path = entry.select_path(env_->now());
    if (!path) return false;
    if (!policy_.admits(env_->heading_of(id_), rreq.src_dir, entry.dest_dir)) return false;

    entry.freeze_advertisement(path->speed_metric, path->stop_metric);
    entry.precursors.insert(prev_hop);

    RouteReply rrep;
    rrep.source = rreq.source;
    rrep.destination = rreq.destination;
    rrep.dest_seqno = entry.seqno;
    rrep.hop_count = static_cast<std::uint8_t>(entry.advertised_hop_count);
    rrep.last_hop = path->last_hop;
    rrep.avg_speed = Half::mean(rreq.src_speed, entry.dest_speed);
    rrep.avg_stop = Half::mean(rreq.src_stoptimes, entry.dest_stop);
    rrep.speed_metric = path->speed_metric;
    rrep.stop_metric = path->stop_metric;
    rrep.src_dir = rreq.src_dir;
    rrep.dest_dir = entry.dest_dir;

    ds.used_reverse.emplace_back(prev_hop, rreq.first_hop);
    ds.used_forward.emplace_back(path->next_hop, path->last_hop);
    maybe_zero(rrep);
    env_->send_unicast(id_, prev_hop, Packet{rrep});
    return true;
  }

  void rebroadcast_request(RouteRequest rreq) {
    // Rebroadcasting advertises a route back to the source; freezing the
    // reverse entry's advertised hop count here is what stops two neighbors
    // from accepting each other's equal-length copies and forming a cycle.
    auto& reverse = table_[rreq.source];
    reverse.freeze_advertisement(rreq.speed_metric, rreq.stop_metric);
    rreq.hop_count = static_cast<std::uint8_t>(rreq.hop_count + 1);
    policy_.update_request_metrics(rreq, env_->speed_of(id_), env_->stop_times_of(id_));
    if (auto it = table_.find(rreq.destination); it != table_.end() && it->second.seqno_valid)
      rreq.dest_seqno_known =
          std::max(rreq.dest_seqno_known.value_or(0), it->second.seqno);
    maybe_zero(rreq);
    env_->send_broadcast(id_, Packet{rreq});
  }

  // --- reply path -----------------------------------------------------

  void receive_route_reply(NodeId prev_hop, RouteReply rrep) {
    auto& entry = table_[rrep.destination];
    const auto verdict =
        accept_advertisement(entry, rrep.dest_seqno, rrep.hop_count, prev_hop,
                             rrep.last_hop, rrep.speed_metric, rrep.stop_metric,
                             env_->now(), cfg_.route_lifetime);
    if (!usable(verdict)) return;
    notify_route_change(rrep.destination);

    DiscoveryState* ds = latest_discovery(rrep.source);
    if (ds) {
      // AvgSpeed/AvgStop carry the endpoint mean; with the request's source
      // values remembered, the destination's own values fall back out.
      entry.dest_speed = static_cast<SpeedCmps>(rrep.avg_speed.halves - ds->src_speed);
      entry.dest_stop = static_cast<std::int32_t>(rrep.avg_stop.halves - ds->src_stoptimes);
      entry.dest_dir = rrep.dest_dir;
      entry.dest_info_valid = true;
    }

    flush_pending(rrep.destination);

    if (rrep.source == id_) {
      finish_discovery(rrep.destination);
      return;
    }

    // Intermediate forwarder: enforce direction admissibility, then relay
    // along an unused reverse path with the metric fields accumulated.
    if (!policy_.admits(env_->heading_of(id_), rrep.src_dir, rrep.dest_dir)) return;
    if (!ds) return;  // reply for a flood we never saw

    auto rit = table_.find(rrep.source);
    if (rit == table_.end()) return;
    PathRecord* reverse = pick_unused_reverse(rit->second, *ds);
    if (!reverse) return;

    const auto forward_pair = std::pair<NodeId, NodeId>(prev_hop, rrep.last_hop);
    if (std::find(ds->used_forward.begin(), ds->used_forward.end(), forward_pair) !=
        ds->used_forward.end())
      return;  // this forward path has already been advertised upstream

    policy_.update_reply_metrics(rrep, env_->speed_of(id_), env_->stop_times_of(id_));
    entry.freeze_advertisement(rrep.speed_metric, rrep.stop_metric);
    // Advertised hop count is what every neighbour hears for this seqno.
    rrep.hop_count = static_cast<std::uint8_t>(entry.advertised_hop_count);

    ds->used_reverse.emplace_back(reverse->next_hop, reverse->last_hop);
    ds->used_forward.emplace_back(forward_pair);
    entry.precursors.insert(reverse->next_hop);
    reverse->expiry = std::max(reverse->expiry, env_->now() + cfg_.route_lifetime);

    maybe_zero(rrep);
    env_->send_unicast(id_, reverse->next_hop, Packet{rrep});
  }

  PathRecord* pick_unused_reverse(RouteEntry& entry, DiscoveryState& ds) {
    PathRecord* best = nullptr;
    for (auto& p : entry.paths) {
      if (p.expiry <= env_->now()) continue;
      if (std::find(ds.used_reverse.begin(), ds.used_reverse.end(),
                    std::pair(p.next_hop, p.last_hop)) != ds.used_reverse.end())
        continue;
      if (!best || std::pair(triple_of(p), p.next_hop) <
                       std::pair(triple_of(*best), best->next_hop))
        best = &p;
    }
    return best;
  }

  // --- error path -----------------------------------------------------

  void receive_route_error(NodeId prev_hop, const RouteError& rerr) {
    std::vector<RouteError::Unreachable> propagate;
    for (const auto& u : rerr.unreachable) {
      auto it = table_.find(u.destination);
      if (it == table_.end()) continue;
      auto& entry = it->second;
      if (entry.seqno_valid && entry.seqno >= u.seqno) continue;
      if (entry.remove_paths_via(prev_hop) == 0) continue;
      notify_route_change(u.destination);
      if (!entry.has_valid_path(env_->now())) {
        entry.paths.clear();
        entry.seqno = u.seqno;  // adopt the reported freshness
        entry.advertised_hop_count = kUnadvertised;
        entry.advertised_speed_metric = Half::zero();
        entry.advertised_stop_metric = Half::zero();
        if (!entry.precursors.empty())
          propagate.push_back(RouteError::Unreachable{u.destination, u.seqno});
      }
    }
    if (!propagate.empty())
      env_->send_broadcast(id_, Packet{RouteError{std::move(propagate)}});
  }

  void report_unreachable(NodeId destination) {
    auto it = table_.find(destination);
    if (it == table_.end()) return;
    auto& entry = it->second;
    entry.invalidate();
    notify_route_change(destination);
    if (entry.precursors.empty()) return;
    env_->send_broadcast(
        id_, Packet{RouteError{{RouteError::Unreachable{destination, entry.seqno}}}});
  }

  // --- shared helpers -------------------------------------------------

  bool try_forward_data(const DataPacket& packet) {
    auto it = table_.find(packet.destination);
    if (it == table_.end()) return false;
    PathRecord* path = it->second.select_path(env_->now());
    if (!path) return false;
    path->expiry = std::max(path->expiry, env_->now() + cfg_.route_lifetime);
    DataPacket hop = packet;
    ++hop.hops;
    env_->send_unicast(id_, path->next_hop, Packet{hop});
    return true;
  }

  void flush_pending(NodeId destination) {
    auto it = pending_.find(destination);
    if (it == pending_.end() || it->second.queue.empty()) return;
    auto& entry = table_[destination];
    if (!entry.has_valid_path(env_->now())) return;
    std::vector<DataPacket> queued = std::move(it->second.queue);
    it->second.queue.clear();
    for (const auto& pkt : queued) {
      if (!try_forward_data(pkt)) it->second.queue.push_back(pkt);
    }
  }

  void finish_discovery(NodeId destination) {
    auto it = pending_.find(destination);
    if (it == pending_.end()) return;
    if (!it->second.queue.empty()) return;  // keep waiting for more paths
    env_->cancel_timer(it->second.timer);
    pending_.erase(it);
  }

  std::pair<DiscoveryState&, bool> lookup_discovery(NodeId source, std::uint32_t rreq_id) {
    const auto key = std::pair(source, rreq_id);
    auto [it, inserted] = discoveries_.try_emplace(key);
    if (inserted) {
      auto& latest = latest_discovery_[source];
      latest = std::max(latest, rreq_id);
    }
    return {it->second, inserted};
  }

  DiscoveryState& discovery_state(NodeId source, std::uint32_t rreq_id) {
    return lookup_discovery(source, rreq_id).first;
  }

  DiscoveryState* latest_discovery(NodeId source) {
    auto it = latest_discovery_.find(source);
    if (it == latest_discovery_.end()) return nullptr;
    auto ds = discoveries_.find(std::pair(source, it->second));
    return ds == discoveries_.end() ? nullptr : &ds->second;
  }

  void notify_route_change(NodeId destination) {
    if (route_change_hook_) route_change_hook_(destination);
  }

  void maybe_zero(RouteRequest& rreq) const {
    if (!cfg_.zero_metric_fields) return;
    rreq.src_dir = Heading::North;
    rreq.src_speed = 0;
    rreq.src_stoptimes = 0;
    rreq.speed_metric = Half::zero();
    rreq.stop_metric = Half::zero();
  }

  void maybe_zero(RouteReply& rrep) const {
    if (!cfg_.zero_metric_fields) return;
    rrep.src_dir = Heading::North;
    rrep.dest_dir = Heading::North;
    rrep.avg_speed = Half::zero();
    rrep.avg_stop = Half::zero();
    rrep.speed_metric = Half::zero();
    rrep.stop_metric = Half::zero();
  }

  NodeId id_;
  MetricPolicy policy_;
  RouterConfig cfg_;
  RouterEnv* env_;

  std::uint32_t seqno_{0};
  std::uint32_t rreq_id_{0};
  RoutingTable table_;
  std::map<std::pair<NodeId, std::uint32_t>, DiscoveryState> discoveries_;
  std::map<NodeId, std::uint32_t> latest_discovery_;
  std::map<NodeId, PendingDiscovery> pending_;
  std::function<void(NodeId)> route_change_hook_;
};

}  // namespace vanetsim
