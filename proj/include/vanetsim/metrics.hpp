#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vanetsim/time.hpp"

namespace vanetsim {

// Lifecycle record for one data packet, keyed by (flow, seq). sent_at is the
// application emission time, so delays include buffering behind route
// discovery.
struct PacketLedgerEntry {
  SimTime sent_at;
  std::optional<SimTime> delivered_at;
  std::uint8_t hops_traversed{0};
  bool dropped{false};
};

// Final per-run record. Ratio metrics are left unset rather than forced to
// zero when their denominator is empty.
struct RunReport {
  std::string protocol;
  int node_count{0};
  double percent_stopped{0.0};
  std::uint64_t seed{0};
  std::uint64_t packets_sent{0};
  std::uint64_t packets_received{0};
  std::uint64_t packets_dropped{0};
  std::uint64_t control_transmissions{0};
  std::optional<double> mean_delay_s;  // unset when nothing was received
  std::optional<double> pdf;           // received/sent; unset when nothing was sent
  std::optional<double> nrl;           // control/received; unset when nothing received
  bool failed{false};
  std::string error;
};

class PacketLedger {
 public:
  void record_send(std::uint16_t flow, std::uint32_t seq, SimTime now) {
    auto [it, inserted] = entries_.try_emplace({flow, seq});
    if (!inserted) return;  // duplicate send is a harness bug; first wins
    it->second.sent_at = now;
    ++sent_;
  }

  // First arrival counts; duplicates over alternate paths are ignored.
  void record_delivery(std::uint16_t flow, std::uint32_t seq, SimTime now,
                       std::uint8_t hops) {
    auto it = entries_.find({flow, seq});
    if (it == entries_.end() || it->second.delivered_at) return;
    it->second.delivered_at = now;
    it->second.hops_traversed = hops;
    ++delivered_;
    delay_sum_ns_ += (now - it->second.sent_at).ns;
    if (it->second.dropped) {
      // A duplicate made it through after another copy died; the packet
      // counts as delivered.
      it->second.dropped = false;
      --dropped_;
    }
  }

  void record_drop(std::uint16_t flow, std::uint32_t seq) {
    auto it = entries_.find({flow, seq});
    if (it == entries_.end() || it->second.delivered_at || it->second.dropped) return;
    it->second.dropped = true;
    ++dropped_;
  }

  std::uint64_t sent() const { return sent_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t in_flight() const { return sent_ - delivered_ - dropped_; }

  const std::map<std::pair<std::uint16_t, std::uint32_t>, PacketLedgerEntry>& entries()
      const {
    return entries_;
  }

  RunReport finalize(std::uint64_t control_transmissions) const {
    RunReport r;
    r.packets_sent = sent_;
    r.packets_received = delivered_;
    r.packets_dropped = dropped_;
    r.control_transmissions = control_transmissions;
    if (delivered_ > 0)
      r.mean_delay_s = static_cast<double>(delay_sum_ns_) /
                       (static_cast<double>(delivered_) * 1e9);
    if (sent_ > 0)
      r.pdf = static_cast<double>(delivered_) / static_cast<double>(sent_);
    if (delivered_ > 0)
      r.nrl = static_cast<double>(control_transmissions) / static_cast<double>(delivered_);
    return r;
  }

 private:
  std::map<std::pair<std::uint16_t, std::uint32_t>, PacketLedgerEntry> entries_;
  std::uint64_t sent_{0};
  std::uint64_t delivered_{0};
  std::uint64_t dropped_{0};
  std::int64_t delay_sum_ns_{0};
};

}  // namespace vanetsim
