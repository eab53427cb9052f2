#include "neurorescue/environment.hpp"

#include <algorithm>
#include <cmath>

#include "neurorescue/errors.hpp"

namespace neurorescue {

namespace {

double advance_component(double start, double velocity, std::optional<double> stop, int ticks) {
  const double raw = start + velocity * ticks;
  if (!stop || velocity == 0.0) return velocity == 0.0 ? start : raw;
  return velocity > 0.0 ? std::min(raw, *stop) : std::max(raw, *stop);
}

}  // namespace

Point Obstacle::center_at(int tick) const {
  if (!center) return {};
  if (kind != ObstacleKind::Moving) return *center;
  const int t = std::max(tick, 0);
  std::optional<double> sx, sy;
  if (stop_center) {
    sx = stop_center->x;
    sy = stop_center->y;
  }
  return {advance_component(center->x, velocity.x, sx, t), advance_component(center->y, velocity.y, sy, t)};
}

std::vector<Cell> Obstacle::cells_at(int tick, const GridSpec& grid) const {
  if (kind != ObstacleKind::Moving || !center) return cells;
  const Point now = center_at(tick);
  const int ox = static_cast<int>(std::lround((now.x - center->x) / grid.cell_length));
  const int oy = static_cast<int>(std::lround((now.y - center->y) / grid.cell_length));
  std::vector<Cell> moved;
  moved.reserve(cells.size());
  for (const Cell& c : cells) moved.push_back({c.x + ox, c.y + oy});
  return moved;
}

double gamma(Point p, const Obstacle& obstacle, int tick) {
  if (!obstacle.analytic() || !obstacle.center) {
    throw GeometryError("gamma is undefined for cell-list obstacles");
  }
  const Point c = obstacle.center_at(tick);
  const double dx = p.x - c.x, dy = p.y - c.y;
  return (dx * dx + dy * dy) / *obstacle.lambda;
}

Environment::Environment(GridSpec grid) : grid_(grid), occupancy_(grid.cell_count(), 0) {}

void Environment::add_obstacle(Obstacle obstacle) {
  obstacles_.push_back(std::move(obstacle));
  occupancy_ = occupancy_at(tick_);
}

bool Environment::is_free(Point p, int tick) const {
  if (!grid_.contains(p)) return false;
  const Cell cell = grid_.cell_of(p);
  for (const Obstacle& o : obstacles_) {
    if (!o.active_at(tick)) continue;
    if (o.analytic()) {
      if (gamma(p, o, tick) <= 1.0) return false;
    } else {
      const auto cells = o.cells_at(tick, grid_);
      if (std::find(cells.begin(), cells.end(), cell) != cells.end()) return false;
    }
  }
  return true;
}

std::vector<std::uint8_t> Environment::occupancy_at(int tick) const {
  std::vector<std::uint8_t> occ(grid_.cell_count(), 0);
  for (const Obstacle& o : obstacles_) {
    if (!o.active_at(tick)) continue;
    if (o.analytic()) {
      const Point c = o.center_at(tick);
      const double r = std::sqrt(*o.lambda);
      const int x_lo = std::max(0, static_cast<int>(std::floor((c.x - r) / grid_.cell_length)) - 1);
      const int x_hi = std::min(grid_.width - 1, static_cast<int>(std::ceil((c.x + r) / grid_.cell_length)) + 1);
      const int y_lo = std::max(0, static_cast<int>(std::floor((c.y - r) / grid_.cell_length)) - 1);
      const int y_hi = std::min(grid_.height - 1, static_cast<int>(std::ceil((c.y + r) / grid_.cell_length)) + 1);
      for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
          if (gamma(grid_.center({x, y}), o, tick) <= 1.0) occ[grid_.index({x, y})] = 1;
        }
      }
    } else {
      for (const Cell& c : o.cells_at(tick, grid_)) {
        if (grid_.contains(c)) occ[grid_.index(c)] = 1;
      }
    }
  }
  return occ;
}

const Target* Environment::find_target(int id) const {
  for (const Target& t : targets_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

Target* Environment::find_target(int id) {
  for (Target& t : targets_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const RobotState* Environment::find_robot(int id) const {
  for (const RobotState& r : robots_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

void Environment::set_tick(int tick) {
  tick_ = tick;
  occupancy_ = occupancy_at(tick);
}

Environment step_environment(Environment env, int tick) {
  env.set_tick(tick);
  return env;
}

}  // namespace neurorescue
