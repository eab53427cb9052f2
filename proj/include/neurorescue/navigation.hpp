#pragma once

#include <map>
#include <optional>
#include <vector>

#include "neurorescue/environment.hpp"
#include "neurorescue/neural_field.hpp"

namespace neurorescue {

/// Next cell for a robot at `current` heading `heading`: the in-bounds 8-neighbor of
/// maximal activity. Ties go to the smallest heading change, then row-major order.
/// Returns `current` (idle) when no neighbor beats a non-positive own activity.
Cell command_neuron(const NeuralField& field, Cell current, double heading);

enum class StepOutcome { Moved, Idle, Collision };

/// Moves the robot onto `next`'s center (omnidirectional kinematics, v*dt equal to the
/// center spacing) and appends to its trajectory. A blocked `next` halts the robot and
/// reports a collision; `next == current` counts an idle step.
StepOutcome advance_robot(RobotState& robot, Cell next, const Environment& env);

/// zeta of robot i's cell in target c's field, robots x targets.
struct ActivityMatrix {
  std::vector<int> robot_ids;
  std::vector<int> target_ids;
  std::vector<double> values;  // row-major, one row per robot

  double at(std::size_t robot_row, std::size_t target_col) const {
    return values[robot_row * target_ids.size() + target_col];
  }
};

/// Throws ValidationError(Configuration) when a pending target has no field.
ActivityMatrix build_activity_matrix(const std::vector<RobotState>& robots, const std::vector<int>& pending_targets,
                                     const std::map<int, const NeuralField*>& fields, const GridSpec& grid);

struct Assignment {
  std::map<int, std::optional<int>> target_to_robot;

  std::vector<int> targets_of(int robot_id) const;
};

/// Each target goes to the robot holding the strict column maximum; ties stay unassigned.
Assignment assign_targets(const ActivityMatrix& matrix);

/// Among the targets assigned to `robot_id`, the one with the highest activity
/// (lowest id on ties).
std::optional<int> highest_activity_target(const ActivityMatrix& matrix, const Assignment& assignment,
                                           int robot_id);

}  // namespace neurorescue
