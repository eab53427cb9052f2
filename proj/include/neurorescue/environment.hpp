#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "neurorescue/geometry.hpp"

namespace neurorescue {

enum class ObstacleKind { Static, Moving, Sudden };

/// Either analytic (center + size lambda, free iff Gamma > 1) or an explicit cell list.
/// Moving obstacles translate by `velocity` per tick and halt at `stop_center`;
/// sudden obstacles exist from `trigger_tick` on.
struct Obstacle {
  ObstacleKind kind = ObstacleKind::Static;
  std::optional<Point> center;
  std::optional<double> lambda;  // m^2
  std::vector<Cell> cells;
  Point velocity{};
  std::optional<Point> stop_center;
  int trigger_tick = 0;

  bool analytic() const { return lambda.has_value(); }
  bool active_at(int tick) const { return kind != ObstacleKind::Sudden || tick >= trigger_tick; }
  /// Center after `tick` updates, each component clamped at the stop center.
  Point center_at(int tick) const;
  /// Cell list translated by the (rounded) displacement of the center.
  std::vector<Cell> cells_at(int tick, const GridSpec& grid) const;
};

/// Normalized squared distance to an analytic obstacle: 1 on the surface, > 1 outside.
/// Throws GeometryError for cell-list obstacles.
double gamma(Point p, const Obstacle& obstacle, int tick);

enum class TargetStatus { Pending, Assigned, Rescued };

struct Target {
  int id = 0;
  Point position{};
  TargetStatus status = TargetStatus::Pending;
};

struct RobotState {
  int id = 0;
  Pose pose{};
  double speed = 1.0;  // m/tick
  std::optional<int> assigned_target;
  std::vector<Pose> trajectory;
  int idle_steps = 0;
};

class Environment {
 public:
  Environment() = default;
  explicit Environment(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  int tick() const { return tick_; }

  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const std::vector<RobotState>& robots() const { return robots_; }
  const std::vector<Target>& targets() const { return targets_; }
  std::vector<RobotState>& robots() { return robots_; }
  std::vector<Target>& targets() { return targets_; }

  void add_obstacle(Obstacle obstacle);
  void add_robot(RobotState robot) { robots_.push_back(std::move(robot)); }
  void add_target(Target target) { targets_.push_back(target); }
  void clear_robots() { robots_.clear(); }
  void clear_targets() { targets_.clear(); }

  /// Obstacle-only freedom test at an arbitrary tick. Out-of-bounds points are not free.
  bool is_free(Point p, int tick) const;
  /// Rasterized obstacle cells (1 = blocked) at the current tick.
  const std::vector<std::uint8_t>& occupancy() const { return occupancy_; }
  std::vector<std::uint8_t> occupancy_at(int tick) const;
  bool blocked(Cell c) const { return !grid_.contains(c) || occupancy_[grid_.index(c)] != 0; }

  const Target* find_target(int id) const;
  Target* find_target(int id);
  const RobotState* find_robot(int id) const;

  /// Advances to `tick`. Obstacle placement is a pure function of the tick, so stepping
  /// is deterministic and never accumulates drift.
  void set_tick(int tick);

 private:
  GridSpec grid_{};
  int tick_ = 0;
  std::vector<Obstacle> obstacles_;
  std::vector<RobotState> robots_;
  std::vector<Target> targets_;
  std::vector<std::uint8_t> occupancy_;
};

/// One simulation tick of obstacle motion and sudden-obstacle triggering.
Environment step_environment(Environment env, int tick);

}  // namespace neurorescue
