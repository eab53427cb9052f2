#include "neurorescue/builtin_scenarios.hpp"

#include "neurorescue/errors.hpp"

namespace neurorescue {

namespace {

// Layouts are written in 1-based grid coordinates; (i, j) is the cell centered at (i - 0.5, j - 0.5).
Point at(int i, int j) { return {i - 0.5, j - 0.5}; }

Obstacle rect(int i0, int j0, int i1, int j1, ObstacleKind kind = ObstacleKind::Static) {
  Obstacle o;
  o.kind = kind;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) o.cells.push_back({i - 1, j - 1});
  }
  return o;
}

Scenario base(const std::string& name) {
  Scenario s;
  s.name = name;
  s.env = Environment(GridSpec{});
  return s;
}

void add_robot(Scenario& s, Point p, double theta = 0.0) {
  RobotState r;
  r.id = static_cast<int>(s.env.robots().size());
  r.pose = {p.x, p.y, theta};
  r.speed = s.params.motion.v;
  s.env.add_robot(r);
}

void add_target(Scenario& s, Point p) {
  s.env.add_target({static_cast<int>(s.env.targets().size()), p, TargetStatus::Pending});
}

void mission_agents(Scenario& s) {
  add_robot(s, at(1, 35));
  add_robot(s, at(70, 35));
  for (auto [i, j] : {std::pair{8, 35}, {15, 15}, {30, 10}, {54, 11}, {36, 29}, {59, 28}, {60, 45}, {63, 67},
                      {23, 55}, {7, 52}}) {
    add_target(s, at(i, j));
  }
  s.probe = Probe{at(35, 2), at(60, 52)};
}

void static_obstacles(Scenario& s) {
  s.env.add_obstacle(rect(20, 24, 26, 30));
  s.env.add_obstacle(rect(47, 16, 51, 21));
  s.env.add_obstacle(rect(42, 38, 46, 44));
  s.env.add_obstacle(rect(10, 42, 16, 46));
  s.env.add_obstacle(rect(28, 58, 33, 63));
  s.env.add_obstacle(rect(61, 18, 65, 23));
}

}  // namespace

Scenario static_scenario() {
  Scenario s = base("static");
  static_obstacles(s);
  mission_agents(s);
  return s;
}

Scenario moving_scenario() {
  Scenario s = base("moving");
  static_obstacles(s);
  // A wall with a side corridor; a door slides down the wall line and seals the corridor's end,
  // turning it into a dead-end pocket.
  s.env.add_obstacle(rect(30, 46, 31, 62));
  s.env.add_obstacle(rect(30, 31, 31, 38));
  s.env.add_obstacle(rect(22, 46, 29, 46));
  s.env.add_obstacle(rect(22, 38, 29, 38));
  constexpr int kClose = 54;
  Obstacle door = rect(30, 39 + kClose, 31, 45 + kClose, ObstacleKind::Moving);
  door.center = at(31, 42 + kClose);
  door.velocity = {0.0, -1.0};
  door.stop_center = at(31, 42);
  s.env.add_obstacle(door);
  mission_agents(s);
  return s;
}

TrapRegion moving_trap_region() { return {21, 28, 38, 44}; }

Scenario sudden_scenario() {
  Scenario s = base("sudden");
  static_obstacles(s);
  // Drops just ahead of the first robot while it heads down-right to (36, 29).
  Obstacle l = rect(24, 46, 33, 47, ObstacleKind::Sudden);
  for (const Cell& c : rect(32, 48, 33, 53).cells) l.cells.push_back(c);
  l.trigger_tick = kSuddenTrigger;
  s.env.add_obstacle(l);
  mission_agents(s);
  return s;
}

Scenario house_scenario(bool door_open) {
  Scenario s = base(door_open ? "house_open" : "house_closed");
  auto wall = [&](bool horizontal, int fixed, int from, int to, std::initializer_list<std::pair<int, int>> doors) {
    int cursor = from;
    for (auto [d0, d1] : doors) {
      if (d0 > cursor) {
        s.env.add_obstacle(horizontal ? rect(cursor, fixed, d0 - 1, fixed) : rect(fixed, cursor, fixed, d0 - 1));
      }
      cursor = d1 + 1;
    }
    if (cursor <= to) {
      s.env.add_obstacle(horizontal ? rect(cursor, fixed, to, fixed) : rect(fixed, cursor, fixed, to));
    }
  };
  // West and east wings joined by door L and by a passage past the north end of the dividing wall.
  wall(false, 35, 1, 58, {{31, 38}});
  wall(true, 22, 1, 22, {{13, 20}});
  wall(false, 22, 1, 21, {});
  wall(true, 22, 49, 70, {{51, 58}});
  wall(false, 49, 1, 21, {});
  if (!door_open) {
    Obstacle door = rect(35, 31, 35, 38, ObstacleKind::Sudden);
    door.trigger_tick = 0;
    s.env.add_obstacle(door);
  }

  add_robot(s, at(8, 40));
  add_robot(s, at(28, 30));
  for (auto [i, j] : {std::pair{12, 12}, {59, 12}, {60, 35}, {13, 57}, {59, 60}}) add_target(s, at(i, j));
  s.probe = Probe{at(8, 54), at(65, 41)};
  return s;
}

Scenario corner_scenario() {
  Scenario s;
  s.name = "corner";
  s.env = Environment(GridSpec{40, 30, 1.0});
  s.env.add_obstacle(rect(12, 1, 16, 14));
  s.env.add_obstacle(rect(24, 17, 28, 30));
  add_robot(s, at(3, 5));
  add_target(s, at(38, 26));
  return s;
}

std::vector<std::string> builtin_scenario_names() {
  return {"static", "moving", "sudden", "house_open", "house_closed", "corner"};
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "static") return static_scenario();
  if (name == "moving") return moving_scenario();
  if (name == "sudden") return sudden_scenario();
  if (name == "house_open") return house_scenario(true);
  if (name == "house_closed") return house_scenario(false);
  if (name == "corner") return corner_scenario();
  throw ValidationError(ValidationError::Kind::Configuration, "unknown built-in scenario '" + name + "'");
}

}  // namespace neurorescue
