#include "neurorescue/navigation.hpp"

#include <cmath>
#include <string>

#include "neurorescue/errors.hpp"

namespace neurorescue {

Cell command_neuron(const NeuralField& field, Cell current, double heading) {
  const GridSpec& grid = field.grid();
  bool found = false;
  Cell best = current;
  double best_value = 0.0;
  double best_turn = 0.0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Cell n{current.x + dx, current.y + dy};
      if (!grid.contains(n)) continue;
      const double value = field.activity(n);
      const double turn = std::fabs(wrap_angle(heading_between(current, n) - heading));
      // Candidates arrive in row-major order, so strict comparisons keep the earlier cell.
      if (!found || value > best_value || (value == best_value && turn < best_turn)) {
        found = true;
        best = n;
        best_value = value;
        best_turn = turn;
      }
    }
  }
  if (!found) return current;
  const double own = field.activity(current);
  if (best_value <= own && own <= 0.0) return current;
  return best;
}

StepOutcome advance_robot(RobotState& robot, Cell next, const Environment& env) {
  const GridSpec& grid = env.grid();
  const Cell current = grid.cell_of({robot.pose.x, robot.pose.y});
  if (next == current) {
    ++robot.idle_steps;
    robot.trajectory.push_back(robot.pose);
    return StepOutcome::Idle;
  }
  if (std::abs(next.x - current.x) > 1 || std::abs(next.y - current.y) > 1) {
    throw ValidationError(ValidationError::Kind::Configuration, "next cell is not an 8-neighbor");
  }
  if (env.blocked(next)) {
    robot.trajectory.push_back(robot.pose);
    return StepOutcome::Collision;
  }
  const Point from = grid.center(current);
  const Point to = grid.center(next);
  const double theta = std::atan2(to.y - from.y, to.x - from.x);
  const double step = distance(from, to);  // v * dt
  robot.pose.theta = theta;
  robot.pose.x = from.x + step * std::cos(theta);
  robot.pose.y = from.y + step * std::sin(theta);
  // Land exactly on the center; the trigonometric update is off by at most an ulp or two.
  robot.pose.x = to.x;
  robot.pose.y = to.y;
  robot.trajectory.push_back(robot.pose);
  return StepOutcome::Moved;
}

ActivityMatrix build_activity_matrix(const std::vector<RobotState>& robots, const std::vector<int>& pending_targets,
                                     const std::map<int, const NeuralField*>& fields, const GridSpec& grid) {
  ActivityMatrix m;
  m.target_ids = pending_targets;
  for (const RobotState& r : robots) m.robot_ids.push_back(r.id);
  m.values.assign(robots.size() * pending_targets.size(), 0.0);
  for (std::size_t c = 0; c < pending_targets.size(); ++c) {
    const auto it = fields.find(pending_targets[c]);
    if (it == fields.end() || it->second == nullptr) {
      throw ValidationError(ValidationError::Kind::Configuration,
                            "no field for pending target " + std::to_string(pending_targets[c]));
    }
    for (std::size_t i = 0; i < robots.size(); ++i) {
      const Cell cell = grid.cell_of({robots[i].pose.x, robots[i].pose.y});
      m.values[i * pending_targets.size() + c] = it->second->activity(cell);
    }
  }
  return m;
}

std::vector<int> Assignment::targets_of(int robot_id) const {
  std::vector<int> out;
  for (const auto& [target, robot] : target_to_robot) {
    if (robot && *robot == robot_id) out.push_back(target);
  }
  return out;
}

Assignment assign_targets(const ActivityMatrix& matrix) {
  Assignment a;
  const std::size_t rows = matrix.robot_ids.size();
  for (std::size_t c = 0; c < matrix.target_ids.size(); ++c) {
    std::optional<int> winner;
    if (rows > 0) {
      std::size_t best = 0;
      bool tied = false;
      for (std::size_t i = 1; i < rows; ++i) {
        const double v = matrix.at(i, c), b = matrix.at(best, c);
        if (v > b) {
          best = i;
          tied = false;
        } else if (v == b) {
          tied = true;
        }
      }
      if (!tied) winner = matrix.robot_ids[best];
    }
    a.target_to_robot[matrix.target_ids[c]] = winner;
  }
  return a;
}

std::optional<int> highest_activity_target(const ActivityMatrix& matrix, const Assignment& assignment,
                                           int robot_id) {
  std::optional<std::size_t> row;
  for (std::size_t i = 0; i < matrix.robot_ids.size(); ++i) {
    if (matrix.robot_ids[i] == robot_id) row = i;
  }
  if (!row) return std::nullopt;
  std::optional<int> best;
  double best_value = 0.0;
  for (std::size_t c = 0; c < matrix.target_ids.size(); ++c) {
    const auto it = assignment.target_to_robot.find(matrix.target_ids[c]);
    if (it == assignment.target_to_robot.end() || !it->second || *it->second != robot_id) continue;
    const double v = matrix.at(*row, c);
    if (!best || v > best_value || (v == best_value && matrix.target_ids[c] < *best)) {
      best = matrix.target_ids[c];
      best_value = v;
    }
  }
  return best;
}

}  // namespace neurorescue
