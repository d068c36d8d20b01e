#pragma once

#include <cmath>
#include <stdexcept>

#include "vanetsim/event_queue.hpp"

namespace vanetsim {

struct Position {
  double x{0.0};
  double y{0.0};
};

inline double distance(Position a, Position b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Rectangular street grid: vertical streets at x = i*block_size, horizontal
// streets at y = j*block_size, including both boundaries.
class GridMap {
 public:
  GridMap(double width, double height, double block_size)
      : width_(width), height_(height), block_(block_size) {
    if (width <= 0 || height <= 0 || block_size <= 0)
      throw SimError("grid: dimensions must be positive");
    if (!is_multiple(width, block_size) || !is_multiple(height, block_size))
      throw SimError("grid: area must be a whole number of blocks");
  }

  double width() const { return width_; }
  double height() const { return height_; }
  double block_size() const { return block_; }

  bool in_bounds(Position p) const {
    return p.x >= 0.0 && p.x <= width_ && p.y >= 0.0 && p.y <= height_;
  }

  bool on_street(Position p) const {
    if (!in_bounds(p)) return false;
    return on_grid_line(p.x) || on_grid_line(p.y);
  }

  bool at_intersection(Position p) const {
    return in_bounds(p) && on_grid_line(p.x) && on_grid_line(p.y);
  }

  // Street coordinate of the grid line with index k (exact multiple).
  double line(std::int64_t k) const { return static_cast<double>(k) * block_; }

  std::int64_t vertical_streets() const {
    return static_cast<std::int64_t>(std::llround(width_ / block_)) + 1;
  }
  std::int64_t horizontal_streets() const {
    return static_cast<std::int64_t>(std::llround(height_ / block_)) + 1;
  }

  // Index of the next grid line strictly ahead of coordinate c (direction +1
  // or -1). Assumes c lies within bounds.
  std::int64_t next_line_index(double c, int direction) const {
    const double cell = c / block_;
    if (direction > 0) return static_cast<std::int64_t>(std::floor(cell + 1e-9)) + 1;
    return static_cast<std::int64_t>(std::ceil(cell - 1e-9)) - 1;
  }

 private:
  static bool is_multiple(double v, double b) {
    const double q = v / b;
    return std::abs(q - std::round(q)) < 1e-9;
  }
  bool on_grid_line(double c) const {
    const double q = c / block_;
    return std::abs(q - std::round(q)) < 1e-9;
  }

  double width_;
  double height_;
  double block_;
};

}  // namespace vanetsim
