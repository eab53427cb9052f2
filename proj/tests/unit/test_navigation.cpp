#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "neurorescue/errors.hpp"
#include "neurorescue/navigation.hpp"
#include "neurorescue/simulation.hpp"

using namespace neurorescue;

namespace {

NeuralField relaxed_target_field(Environment& env, int target_id, int steps) {
  ShuntingParams p;
  NeuralField f(env.grid());
  f.set_inputs(assemble_external_input(env, {{target_id}, false, {}}, p));
  for (int i = 0; i < steps; ++i) step_field(f, p);
  return f;
}

RobotState robot_at(int id, Cell c) {
  RobotState r;
  r.id = id;
  r.pose = {c.x + 0.5, c.y + 0.5, 0.0};
  return r;
}

}  // namespace

TEST_SUITE("navigation") {
  TEST_CASE("single positive neighbour wins") {
    NeuralField f(GridSpec{5, 5, 1.0});
    f.set_activity({3, 1}, 0.2);
    CHECK(command_neuron(f, {2, 2}, 0.0) == Cell{3, 1});
  }

  TEST_CASE("flat non-positive neighbourhood idles") {
    NeuralField f(GridSpec{5, 5, 1.0});
    CHECK(command_neuron(f, {2, 2}, 0.0) == Cell{2, 2});
    for (double& z : f.activities()) z = -0.4;
    f.set_activity({2, 2}, -0.3);
    CHECK(command_neuron(f, {2, 2}, 0.0) == Cell{2, 2});
    f.set_activity({1, 1}, -0.2);
    CHECK(command_neuron(f, {2, 2}, 0.0) == Cell{1, 1});
  }

  TEST_CASE("ties prefer the smallest turn, then row-major order") {
    NeuralField f(GridSpec{5, 5, 1.0});
    f.set_activity({3, 2}, 0.5);
    f.set_activity({1, 2}, 0.5);
    CHECK(command_neuron(f, {2, 2}, 0.0) == Cell{3, 2});
    CHECK(command_neuron(f, {2, 2}, std::numbers::pi) == Cell{1, 2});
    // Equal turn (north vs south from heading east): row-major picks the lower row.
    NeuralField g(GridSpec{5, 5, 1.0});
    g.set_activity({2, 1}, 0.5);
    g.set_activity({2, 3}, 0.5);
    CHECK(command_neuron(g, {2, 2}, 0.0) == Cell{2, 1});
  }

  TEST_CASE("a robot next to the target steps onto it") {
    Environment env(GridSpec{10, 10, 1.0});
    env.add_target({0, {6.5, 6.5}, TargetStatus::Pending});
    const NeuralField f = relaxed_target_field(env, 0, 2000);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        CHECK(command_neuron(f, {6 + dx, 6 + dy}, 0.0) == Cell{6, 6});
      }
    }
  }

  TEST_CASE("kinematics of single steps") {
    Environment env(GridSpec{10, 10, 1.0});
    RobotState r = robot_at(0, {4, 4});
    CHECK(advance_robot(r, {5, 4}, env) == StepOutcome::Moved);
    CHECK(r.pose.x == 5.5);
    CHECK(r.pose.y == 4.5);
    CHECK(r.pose.theta == doctest::Approx(0.0));
    CHECK(advance_robot(r, {5, 5}, env) == StepOutcome::Moved);
    CHECK(r.pose.theta == doctest::Approx(std::numbers::pi / 2));
    CHECK(r.pose.y == 5.5);
    CHECK(advance_robot(r, {6, 6}, env) == StepOutcome::Moved);
    CHECK(r.pose.x == 6.5);
    CHECK(r.pose.y == 6.5);
    CHECK(r.pose.theta == doctest::Approx(std::numbers::pi / 4));
    CHECK(advance_robot(r, {6, 6}, env) == StepOutcome::Idle);
    CHECK(r.idle_steps == 1);
    CHECK(r.trajectory.size() == 4);
    CHECK_THROWS_AS(advance_robot(r, {8, 6}, env), ValidationError);
  }

  TEST_CASE("stepping into an obstacle halts and reports a collision") {
    Environment env(GridSpec{10, 10, 1.0});
    Obstacle o;
    o.cells = {{5, 4}};
    env.add_obstacle(o);
    RobotState r = robot_at(0, {4, 4});
    CHECK(advance_robot(r, {5, 4}, env) == StepOutcome::Collision);
    CHECK(r.pose.x == 4.5);
  }

  TEST_CASE("activity matrix examples") {
    Environment env(GridSpec{15, 15, 1.0});
    env.add_target({0, {7.5, 7.5}, TargetStatus::Pending});
    const NeuralField f = relaxed_target_field(env, 0, 3000);
    std::map<int, const NeuralField*> fields{{0, &f}};

    const ActivityMatrix on = build_activity_matrix({robot_at(0, {7, 7})}, {0}, fields, env.grid());
    double field_max = -1.0;
    for (double z : f.activities()) field_max = std::max(field_max, z);
    CHECK(on.at(0, 0) == field_max);

    const ActivityMatrix sym = build_activity_matrix({robot_at(0, {3, 7}), robot_at(1, {11, 7})}, {0}, fields,
                                                     env.grid());
    CHECK(sym.at(0, 0) == doctest::Approx(sym.at(1, 0)).epsilon(1e-12));

    CHECK_THROWS_AS(build_activity_matrix({robot_at(0, {1, 1})}, {5}, fields, env.grid()), ValidationError);
  }

  TEST_CASE("a walled-off robot sees less activity") {
    Environment env(GridSpec{21, 21, 1.0});
    env.add_target({0, {10.5, 10.5}, TargetStatus::Pending});
    Obstacle wall;
    for (int y = 2; y <= 18; ++y) wall.cells.push_back({14, y});
    env.add_obstacle(wall);
    const NeuralField f = relaxed_target_field(env, 0, 25);
    std::map<int, const NeuralField*> fields{{0, &f}};
    const ActivityMatrix m = build_activity_matrix({robot_at(0, {6, 10}), robot_at(1, {16, 10})}, {0}, fields,
                                                   env.grid());
    CHECK(m.at(1, 0) < m.at(0, 0));
  }

  TEST_CASE("assignment rules") {
    ActivityMatrix m{{0, 1}, {7}, {0.4, 0.3}};
    CHECK(assign_targets(m).target_to_robot.at(7) == 0);
    m.values = {0.3, 0.3};
    CHECK_FALSE(assign_targets(m).target_to_robot.at(7).has_value());
    ActivityMatrix single{{4}, {1, 2, 3}, {0.1, -0.2, 0.0}};
    const Assignment a = assign_targets(single);
    CHECK(a.targets_of(4) == std::vector<int>{1, 2, 3});
    CHECK(highest_activity_target(single, a, 4) == 1);
    CHECK_FALSE(highest_activity_target(single, a, 9).has_value());
  }

  TEST_CASE("assignment is invariant under positive rescaling") {
    testgen::Gen g(17);
    for (int trial = 0; trial < 300; ++trial) {
      const int robots = g.integer(1, 5), targets = g.integer(1, 6);
      ActivityMatrix m;
      for (int i = 0; i < robots; ++i) m.robot_ids.push_back(i);
      for (int c = 0; c < targets; ++c) m.target_ids.push_back(10 + c);
      for (int k = 0; k < robots * targets; ++k) m.values.push_back(g.coin(0.2) ? 0.25 : g.real(-1.0, 1.0));
      ActivityMatrix scaled = m;
      const double s = std::ldexp(1.0, g.integer(-4, 4));
      for (double& v : scaled.values) v *= s;
      CHECK(assign_targets(m).target_to_robot == assign_targets(scaled).target_to_robot);
    }
  }

  TEST_CASE("a lone robot in an empty world moves straight to its target") {
    testgen::Gen g(23);
    const GridSpec grid{16, 16, 1.0};
    for (int trial = 0; trial < 25; ++trial) {
      const Cell start = g.cell(grid);
      Cell target = g.cell(grid);
      if (target == start) target = {(start.x + 5) % grid.width, start.y};
      Scenario s;
      s.env = Environment(grid);
      RobotState r = robot_at(0, start);
      s.env.add_robot(r);
      s.env.add_target({0, grid.center(target), TargetStatus::Pending});
      const RescueReport rep = run_rescue(s, {});
      CAPTURE(start.x);
      CAPTURE(start.y);
      CAPTURE(target.x);
      CAPTURE(target.y);
      REQUIRE(rep.complete);
      CHECK(rep.robots[0].steps == std::max(std::abs(start.x - target.x), std::abs(start.y - target.y)));
    }
  }
}
