#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "vanetsim/grid.hpp"
#include "vanetsim/node_id.hpp"
#include "vanetsim/rng.hpp"
#include "vanetsim/time.hpp"

namespace vanetsim {

// Cardinal headings. A stopped node retains its last heading so direction
// comparisons stay defined at speed zero.
enum class Heading : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

inline char to_char(Heading h) {
  switch (h) {
    case Heading::North: return 'N';
    case Heading::East: return 'E';
    case Heading::South: return 'S';
    case Heading::West: return 'W';
  }
  return '?';
}

inline Heading turn_left(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 3) % 4);
}
inline Heading turn_right(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 1) % 4);
}
inline Heading reverse(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 2) % 4);
}

inline int dx_of(Heading h) { return h == Heading::East ? 1 : h == Heading::West ? -1 : 0; }
inline int dy_of(Heading h) { return h == Heading::North ? 1 : h == Heading::South ? -1 : 0; }

struct StopInterval {
  SimTime begin;
  std::optional<SimTime> end;  // open while the stop is in progress
};

struct KinematicState {
  Position position;
  double speed_mps{0.0};
  Heading heading{Heading::North};
  std::vector<StopInterval> stop_events;
};

struct MobilityParams {
  double v_min_mps{10.0 / 3.6};
  double v_max_mps{90.0 / 3.6};
  // Turn distribution at intersections; renormalized over the feasible
  // candidates when the boundary rules some out.
  double p_straight{0.5};
  double p_left{0.25};
  double p_right{0.25};
  // Half-width of the speed re-draw interval around the previous speed.
  double speed_delta_mps{20.0 / 3.6};
  Duration min_stop_duration{Duration::from_seconds(5.0)};
  // 0 = entire history.
  Duration stop_history_window{Duration::zero()};
};

// Number of qualifying stops in the node's movement history: intervals of at
// least min_stop_duration whose (effective) end falls inside [now - W, now].
inline int stop_times(const KinematicState& node, SimTime now, const MobilityParams& p) {
  int count = 0;
  for (const auto& ev : node.stop_events) {
    if (ev.begin > now) continue;
    const SimTime effective_end = ev.end.value_or(now);
    if ((effective_end - ev.begin) < p.min_stop_duration) continue;
    if (p.stop_history_window.ns > 0 && effective_end < now - p.stop_history_window) continue;
    ++count;
  }
  return count;
}

// Selects round(fraction * N) distinct nodes, uniformly without replacement,
// from the topology stream only. Result is sorted by id.
inline std::vector<NodeId> assign_stoppers(std::size_t node_count, double fraction,
                                           RngStream& topology_rng) {
  if (fraction < 0.0 || fraction > 1.0) throw SimError("stopper fraction outside [0,1]");
  const auto want = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(node_count)));
  std::vector<NodeId> ids(node_count);
  for (std::size_t i = 0; i < node_count; ++i) ids[i] = static_cast<NodeId>(i);
  for (std::size_t i = 0; i < want; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(topology_rng.uniform_index(node_count - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(want);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Manhattan-grid kinematics: straight movement along streets, probabilistic
// turns at intersections, speed re-drawn per intersection correlated with the
// previous speed, boundary forces a turn back onto the grid.
class ManhattanMobility {
 public:
  ManhattanMobility(GridMap grid, MobilityParams params)
      : grid_(std::move(grid)), params_(params) {}

  const GridMap& grid() const { return grid_; }
  const MobilityParams& params() const { return params_; }

  KinematicState place_random(RngStream& rng) const {
    KinematicState s;
    const double total_v = static_cast<double>(grid_.vertical_streets()) * grid_.height();
    const double total_h = static_cast<double>(grid_.horizontal_streets()) * grid_.width();
    double pick = rng.uniform(0.0, total_v + total_h);
    if (pick < total_v) {
      const auto street = static_cast<std::int64_t>(pick / grid_.height());
      const double offset = std::min(pick - static_cast<double>(street) * grid_.height(),
                                     grid_.height());
      s.position = Position{grid_.line(street), offset};
      s.heading = rng.bernoulli(0.5) ? Heading::North : Heading::South;
    } else {
      pick -= total_v;
      const auto street = static_cast<std::int64_t>(pick / grid_.width());
      const double offset = std::min(pick - static_cast<double>(street) * grid_.width(),
                                     grid_.width());
      s.position = Position{offset, grid_.line(street)};
      s.heading = rng.bernoulli(0.5) ? Heading::East : Heading::West;
    }
    if (!feasible(s.position, s.heading)) s.heading = reverse(s.heading);
    s.speed_mps = rng.uniform(params_.v_min_mps, params_.v_max_mps);
    return s;
  }

  // Advances one node by dt. Stopped nodes (speed 0) stay put.
  void step_node(KinematicState& node, Duration dt, RngStream& rng) const {
    if (!grid_.on_street(node.position))
      throw SimError("mobility: node off-street, state corrupted");
    if (node.speed_mps <= 0.0 || dt.ns <= 0) return;

    double remaining = node.speed_mps * dt.seconds();
    // A step may cross several intersections when dt is coarse.
    while (remaining > 0.0) {
      const int dx = dx_of(node.heading);
      const int dy = dy_of(node.heading);
      const double along = dx != 0 ? node.position.x : node.position.y;
      const int dir = dx != 0 ? dx : dy;
      const std::int64_t next_idx = grid_.next_line_index(along, dir);
      const double next_line = grid_.line(next_idx);
      const double gap = std::abs(next_line - along);
      if (remaining < gap) {
        if (dx != 0)
          node.position.x += dir * remaining;
        else
          node.position.y += dir * remaining;
        break;
      }
      // Land exactly on the intersection, then decide the turn.
      if (dx != 0)
        node.position.x = next_line;
      else
        node.position.y = next_line;
      remaining -= gap;
      turn_at_intersection(node, rng);
      node.speed_mps = redraw_speed(node.speed_mps, rng);
    }
  }

 private:
  bool feasible(Position p, Heading h) const {
    return grid_.in_bounds(Position{p.x + dx_of(h) * 1e-6, p.y + dy_of(h) * 1e-6});
  }

  void turn_at_intersection(KinematicState& node, RngStream& rng) const {
    struct Candidate {
      Heading h;
      double p;
    };
    const Candidate raw[3] = {
        {node.heading, params_.p_straight},
        {turn_left(node.heading), params_.p_left},
        {turn_right(node.heading), params_.p_right},
    };
    Candidate feasible_set[3];
    int n = 0;
    double total = 0.0;
    for (const auto& c : raw) {
      if (feasible(node.position, c.h)) {
        feasible_set[n++] = c;
        total += c.p;
      }
    }
    if (n == 0) {  // dead end: turn back onto the grid
      node.heading = reverse(node.heading);
      return;
    }
    double u = rng.uniform(0.0, total);
    for (int i = 0; i < n; ++i) {
      u -= feasible_set[i].p;
      if (u < 0.0 || i == n - 1) {
        node.heading = feasible_set[i].h;
        return;
      }
    }
  }

  double redraw_speed(double prev, RngStream& rng) const {
    const double lo = std::max(params_.v_min_mps, prev - params_.speed_delta_mps);
    const double hi = std::min(params_.v_max_mps, prev + params_.speed_delta_mps);
    return hi > lo ? rng.uniform(lo, hi) : lo;
  }

  GridMap grid_;
  MobilityParams params_;
};

}  // namespace vanetsim
