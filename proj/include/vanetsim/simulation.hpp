#pragma once

#include <cstdio>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "vanetsim/config.hpp"
#include "vanetsim/event_queue.hpp"
#include "vanetsim/metrics.hpp"
#include "vanetsim/mobility.hpp"
#include "vanetsim/radio.hpp"
#include "vanetsim/router.hpp"
#include "vanetsim/traffic.hpp"

namespace vanetsim {

struct RunParams {
  Protocol protocol{Protocol::Aomdv};
  int node_count{60};
  double stopped_fraction{0.0};
  std::uint64_t seed{1};
};

// Walks per-destination next-hop graphs after every routing change and
// records any cycle. Walks stay within one seqno; the loop-freedom invariant
// is defined per sequence number.
struct LoopChecker {
  std::uint64_t walks{0};
  std::uint64_t violations{0};
  std::string first_violation;
};

// One self-contained simulation run: engine, mobility, radio, per-node
// routers, CBR traffic and the packet ledger. Fully isolated, so independent
// runs may execute on concurrent threads.
class Simulation : public RouterEnv {
 public:
  Simulation(const ScenarioConfig& config, RunParams params)
      : config_(config),
        params_(params),
        mobility_(GridMap(config.area_width_m, config.area_height_m, config.block_size_m),
                  config.mobility_params()),
        mobility_rng_(mix_seed(params.seed, params.node_count,
                               static_cast<std::uint64_t>(params.stopped_fraction * 1000)),
                      RngStreamId::Mobility),
        traffic_rng_(mix_seed(params.seed, params.node_count,
                              static_cast<std::uint64_t>(params.stopped_fraction * 1000)),
                     RngStreamId::Traffic),
        radio_rng_(mix_seed(params.seed, params.node_count,
                            static_cast<std::uint64_t>(params.stopped_fraction * 1000)),
                   RngStreamId::Radio),
        topology_rng_(mix_seed(params.seed, params.node_count,
                               static_cast<std::uint64_t>(params.stopped_fraction * 1000)),
                      RngStreamId::Topology),
        radio_(config.radio_config(), engine_, radio_rng_) {}

  // Optional observers; enable before run().
  void collect_event_log(std::vector<std::string>* sink) { event_log_ = sink; }
  void collect_mobility_trace(std::string* sink) { mobility_trace_ = sink; }
  void enable_loop_checker() { loop_checker_ = std::make_unique<LoopChecker>(); }
  const LoopChecker* loop_checker() const { return loop_checker_.get(); }

  EventQueue& engine() { return engine_; }
  const std::vector<KinematicState>& nodes() const { return nodes_; }
  const std::vector<Flow>& flows() const { return flows_; }
  Router& router(NodeId id) { return *routers_[id]; }
  const PacketLedger& ledger() const { return ledger_; }

  RunReport run() {
    setup();
    engine_.run_until(sim_end_);
    RunReport report = ledger_.finalize(radio_.control_transmissions());
    report.protocol = to_string(params_.protocol);
    report.node_count = params_.node_count;
    report.percent_stopped = params_.stopped_fraction * 100.0;
    report.seed = params_.seed;
    return report;
  }

  // --- RouterEnv ------------------------------------------------------

  SimTime now() const override { return engine_.now(); }

  void send_broadcast(NodeId from, const Packet& packet) override {
    radio_.broadcast(from, packet);
  }

  void send_unicast(NodeId from, NodeId to, const Packet& packet) override {
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

  std::int32_t stop_times_of(NodeId node) const override {
    return stop_times(nodes_[node], engine_.now(), mobility_.params());
  }

  void data_delivered(NodeId, const DataPacket& packet) override {
    ledger_.record_delivery(packet.flow, packet.seq, engine_.now(), packet.hops);
  }

  void data_dropped(NodeId, const DataPacket& packet, DropReason) override {
    ledger_.record_drop(packet.flow, packet.seq);
  }

 private:
  void setup() {
    sim_end_ = SimTime::from_seconds(config_.sim_duration_s);
    const auto n = static_cast<std::size_t>(params_.node_count);

    nodes_.reserve(n);
    positions_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      nodes_.push_back(mobility_.place_random(topology_rng_));
      positions_.push_back(nodes_.back().position);
    }
    radio_.set_positions(positions_);
    radio_.set_deliver([this](NodeId receiver, NodeId sender, const Packet& p) {
      routers_[receiver]->receive_packet(sender, p);
    });
    radio_.set_failure([this](NodeId sender, NodeId target, const Packet& p) {
      routers_[sender]->link_failure(target, p);
    });

    routers_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      routers_.push_back(std::make_unique<Router>(static_cast<NodeId>(i),
                                                  MetricPolicy(params_.protocol),
                                                  config_.router_config(), *this));
      if (loop_checker_) {
        routers_.back()->set_route_change_hook(
            [this](NodeId dest) { dirty_destinations_.insert(dest); });
      }
    }

    schedule_stop_cycles();
    spawn_traffic();

    const Duration step = Duration::from_seconds(config_.mobility_step_s);
    engine_.schedule(step, EventKind::MobilityStep, [this, step] { mobility_step(step); });
    engine_.schedule(sim_end_, EventKind::SimEnd, [] {});

    if (event_log_) {
      engine_.set_log_hook([this](SimTime t, std::uint64_t seq, EventKind kind) {
        event_log_->push_back(format_time_s(t) + " " + std::to_string(seq) + " " +
                              to_string(kind));
      });
    }
    if (loop_checker_) {
      engine_.set_post_hook([this] { check_loops(); });
    }
    if (mobility_trace_) trace_sample();
  }

  void schedule_stop_cycles() {
    resume_speed_.assign(nodes_.size(), 0.0);
    const auto stoppers =
        assign_stoppers(nodes_.size(), params_.stopped_fraction, topology_rng_);
    const Duration interval = Duration::from_seconds(config_.stop_interval_s);
    const Duration duration = Duration::from_seconds(config_.stop_duration_s);
    for (NodeId id : stoppers) {
      // Random first offset desynchronizes the stop cycles across nodes.
      const Duration offset = mobility_rng_.uniform_duration(Duration{interval.ns - 1});
      for (SimTime begin = SimTime::zero() + offset; begin < sim_end_; begin += interval) {
        engine_.schedule(begin, EventKind::StopBegin, [this, id] {
          auto& node = nodes_[id];
          resume_speed_[id] = node.speed_mps;
          node.speed_mps = 0.0;
          node.stop_events.push_back(StopInterval{engine_.now(), std::nullopt});
        });
        engine_.schedule(begin + duration, EventKind::StopEnd, [this, id] {
          auto& node = nodes_[id];
          node.speed_mps = resume_speed_[id];
          node.stop_events.back().end = engine_.now();
        });
      }
    }
  }

  void spawn_traffic() {
    if (config_.flow_count == 0) return;
    flows_ = spawn_flows(nodes_.size(), static_cast<std::size_t>(config_.flow_count),
                         config_.flow_rate_pps,
                         static_cast<std::uint16_t>(config_.flow_payload_bytes),
                         Duration::from_seconds(config_.flow_start_window_s), sim_end_,
                         topology_rng_, traffic_rng_);
    for (const auto& flow : flows_)
      engine_.schedule(flow.start, EventKind::TrafficSend,
                       [this, id = flow.id] { traffic_send(id, 0); });
  }

  void traffic_send(std::uint16_t flow_id, std::uint32_t seq) {
    const Flow& flow = flows_[flow_id];
    DataPacket pkt;
    pkt.flow = flow_id;
    pkt.seq = seq;
    pkt.source = flow.source;
    pkt.destination = flow.destination;
    pkt.payload_bytes = flow.payload_bytes;
    ledger_.record_send(flow_id, seq, engine_.now());
    routers_[flow.source]->originate_data(pkt);

    const SimTime next = engine_.now() + Duration::from_seconds(1.0 / flow.rate_pps);
    if (next < flow.stop)
      engine_.schedule(next, EventKind::TrafficSend,
                       [this, flow_id, seq] { traffic_send(flow_id, seq + 1); });
  }

  void mobility_step(Duration step) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].speed_mps <= 0.0) continue;  // stopped nodes hold position
      mobility_.step_node(nodes_[i], step, mobility_rng_);
      positions_[i] = nodes_[i].position;
    }
    if (mobility_trace_) trace_sample();
    const SimTime next = engine_.now() + step;
    if (next <= sim_end_)
      engine_.schedule(next, EventKind::MobilityStep, [this, step] { mobility_step(step); });
  }

  void trace_sample() {
    char buf[160];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& node = nodes_[i];
      std::snprintf(buf, sizeof(buf), "%.3f,%zu,%.3f,%.3f,%.3f,%c,%d\n",
                    engine_.now().seconds(), i, node.position.x, node.position.y,
                    node.speed_mps, to_char(node.heading),
                    stop_times(node, engine_.now(), mobility_.params()));
      *mobility_trace_ += buf;
    }
  }

  void check_loops() {
    if (dirty_destinations_.empty()) return;
    for (NodeId dest : dirty_destinations_) {
      for (std::size_t start = 0; start < routers_.size(); ++start)
        walk_route(static_cast<NodeId>(start), dest);
    }
    dirty_destinations_.clear();
  }

  void walk_route(NodeId start, NodeId dest) {
    const auto& table = routers_[start]->table();
    auto it = table.find(dest);
    if (it == table.end() || !it->second.seqno_valid) return;
    const PathRecord* path = it->second.select_path(engine_.now());
    if (!path) return;
    ++loop_checker_->walks;
    const std::uint32_t seqno = it->second.seqno;
    std::set<NodeId> visited{start};
    NodeId cur = path->next_hop;
    while (cur != dest) {
      if (visited.count(cur)) {
        ++loop_checker_->violations;
        if (loop_checker_->first_violation.empty()) {
          loop_checker_->first_violation =
              "cycle for dest " + std::to_string(dest) + " revisiting node " +
              std::to_string(cur) + " at t=" + format_time_s(engine_.now());
        }
        return;
      }
      visited.insert(cur);
      const auto& t = routers_[cur]->table();
      auto jt = t.find(dest);
      // The invariant is per-seqno; a hop onto a different seqno ends the walk.
      if (jt == t.end() || !jt->second.seqno_valid || jt->second.seqno != seqno) return;
      const PathRecord* next = jt->second.select_path(engine_.now());
      if (!next) return;
      cur = next->next_hop;
    }
  }

  ScenarioConfig config_;
  RunParams params_;
  EventQueue engine_;
  ManhattanMobility mobility_;
  RngStream mobility_rng_;
  RngStream traffic_rng_;
  RngStream radio_rng_;
  RngStream topology_rng_;
  Radio radio_;

  SimTime sim_end_;
  std::vector<KinematicState> nodes_;
  std::vector<Position> positions_;
  std::vector<double> resume_speed_;
  std::vector<std::unique_ptr<Router>> routers_;
  std::vector<Flow> flows_;
  PacketLedger ledger_;

  std::vector<std::string>* event_log_{nullptr};
  std::string* mobility_trace_{nullptr};
  std::unique_ptr<LoopChecker> loop_checker_;
  std::set<NodeId> dirty_destinations_;
};

}  // namespace vanetsim
