#pragma once

#include <string>
#include <vector>

#include "neurorescue/scenario.hpp"

namespace neurorescue {

/// Reference worlds on the 70 x 70 grid with the default parameters.
Scenario static_scenario();
Scenario moving_scenario();
Scenario sudden_scenario();
Scenario house_scenario(bool door_open);
/// Single robot and target threading past obstacle corners; used for the sigma study.
Scenario corner_scenario();

inline constexpr int kSuddenTrigger = 49;

/// "static", "moving", "sudden", "house_open", "house_closed", "corner".
std::vector<std::string> builtin_scenario_names();
/// Throws ValidationError(Configuration) for unknown names.
Scenario builtin_scenario(const std::string& name);

/// Region a robot must enter and leave once the moving bar closes the gap.
struct TrapRegion {
  int x_min, x_max, y_min, y_max;  // cells, inclusive

  bool contains(Cell c) const { return c.x >= x_min && c.x <= x_max && c.y >= y_min && c.y <= y_max; }
};
TrapRegion moving_trap_region();

}  // namespace neurorescue
