#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vanetsim/time.hpp"

namespace vanetsim {

class SimError : public std::runtime_error {
 public:
  explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

enum class EventKind : std::uint8_t {
  MobilityStep,
  RadioDelivery,
  TimerExpiry,
  TrafficSend,
  StopBegin,
  StopEnd,
  SimEnd,
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::MobilityStep: return "mobility-step";
    case EventKind::RadioDelivery: return "radio-delivery";
    case EventKind::TimerExpiry: return "timer-expiry";
    case EventKind::TrafficSend: return "traffic-send";
    case EventKind::StopBegin: return "stop-begin";
    case EventKind::StopEnd: return "stop-end";
    case EventKind::SimEnd: return "sim-end";
  }
  return "?";
}

// Handle returned by schedule(); permits cancellation of pending events.
using EventHandle = std::uint64_t;

// Deterministic single-run event engine. Events fire in strict
// (fire_at, sequence) order; sequence is assigned at scheduling time, so
// equal-time events dispatch in the order they were scheduled.
class EventQueue {
 public:
  struct Event {
    SimTime fire_at;
    std::uint64_t sequence;
    EventKind kind;
    std::function<void()> action;

    bool operator>(const Event& other) const {
      if (fire_at != other.fire_at) return fire_at > other.fire_at;
      return sequence > other.sequence;
    }
  };

  SimTime now() const { return now_; }

  EventHandle schedule(SimTime fire_at, EventKind kind, std::function<void()> action) {
    if (fire_at < now_) {
      throw SimError("schedule in the past: fire_at=" + format_time_s(fire_at) +
                     " now=" + format_time_s(now_) + " kind=" + to_string(kind));
    }
    const std::uint64_t seq = next_sequence_++;
    queue_.push(Event{fire_at, seq, kind, std::move(action)});
    return seq;
  }

  void cancel(EventHandle handle) { cancelled_.insert(handle); }

  // Dispatches every event with fire_at <= end and leaves the clock at end.
  std::size_t run_until(SimTime end) {
    std::size_t dispatched = 0;
    while (!queue_.empty() && queue_.top().fire_at <= end) {
      Event ev = queue_.top();
      queue_.pop();
      if (auto it = cancelled_.find(ev.sequence); it != cancelled_.end()) {
        cancelled_.erase(it);
        continue;
      }
      now_ = ev.fire_at;
      if (log_hook_) log_hook_(ev.fire_at, ev.sequence, ev.kind);
      ev.action();
      if (post_hook_) post_hook_();
      ++dispatched;
    }
    if (end > now_) now_ = end;
    return dispatched;
  }

  bool empty() const { return queue_.size() == cancelled_.size(); }

  // Observation hook invoked before each dispatch; used by trace dumps and
  // by the determinism tests that compare full ordered event logs.
  void set_log_hook(std::function<void(SimTime, std::uint64_t, EventKind)> hook) {
    log_hook_ = std::move(hook);
  }

  // Runs after each dispatched event; the loop-freedom checker hangs here.
  void set_post_hook(std::function<void()> hook) { post_hook_ = std::move(hook); }

 private:
  SimTime now_{SimTime::zero()};
  std::uint64_t next_sequence_{0};
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::function<void(SimTime, std::uint64_t, EventKind)> log_hook_;
  std::function<void()> post_hook_;
};

}  // namespace vanetsim
