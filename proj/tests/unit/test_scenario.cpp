#include <filesystem>
#include <string>

#include "doctest.h"
#include "neurorescue/builtin_scenarios.hpp"
#include "neurorescue/errors.hpp"
#include "neurorescue/scenario.hpp"

using namespace neurorescue;

namespace {

ValidationError::Kind load_error(const std::string& text) {
  try {
    load_scenario(text);
  } catch (const ValidationError& e) {
    return e.kind();
  }
  FAIL("expected a validation error");
  return ValidationError::Kind::Configuration;
}

const char* kMinimal = R"({
  "grid": {"width": 70, "height": 70},
  "robots": [{"x": 10.5, "y": 10.5}],
  "targets": [{"x": 50.5, "y": 40.5}]
})";

void check_same_world(const Scenario& a, const Scenario& b) {
  CHECK(a.grid().width == b.grid().width);
  CHECK(a.grid().height == b.grid().height);
  CHECK(a.grid().cell_length == b.grid().cell_length);
  REQUIRE(a.env.robots().size() == b.env.robots().size());
  for (std::size_t i = 0; i < a.env.robots().size(); ++i) {
    CHECK(a.env.robots()[i].pose.x == b.env.robots()[i].pose.x);
    CHECK(a.env.robots()[i].pose.y == b.env.robots()[i].pose.y);
    CHECK(a.env.robots()[i].pose.theta == doctest::Approx(b.env.robots()[i].pose.theta));
  }
  REQUIRE(a.env.targets().size() == b.env.targets().size());
  for (std::size_t i = 0; i < a.env.targets().size(); ++i) {
    CHECK(a.env.targets()[i].position == b.env.targets()[i].position);
  }
  REQUIRE(a.env.obstacles().size() == b.env.obstacles().size());
  for (int tick : {0, 10, 49, 60, 200}) CHECK(a.env.occupancy_at(tick) == b.env.occupancy_at(tick));
  CHECK(a.probe.has_value() == b.probe.has_value());
  if (a.probe && b.probe) {
    CHECK(a.probe->start == b.probe->start);
    CHECK(a.probe->target == b.probe->target);
  }
  CHECK(a.params.shunting.sigma == b.params.shunting.sigma);
  CHECK(a.params.shunting.relax_iters == b.params.shunting.relax_iters);
  CHECK(a.params.features.th1 == b.params.features.th1);
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("minimal document takes default parameters") {
    const Scenario s = load_scenario(kMinimal);
    CHECK(s.grid().width == 70);
    CHECK(s.grid().cell_length == 1.0);
    CHECK(s.params.shunting.A == 5.0);
    CHECK(s.params.shunting.B == 1.0);
    CHECK(s.params.shunting.D == 1.0);
    CHECK(s.params.shunting.E == 70.0);
    CHECK(s.params.features.th1 == 3.0);
    CHECK(s.params.features.th2 == 5.0);
    CHECK(s.env.robots().size() == 1);
    CHECK(s.env.targets().size() == 1);
    CHECK(s.env.obstacles().empty());
    CHECK_FALSE(s.probe.has_value());
  }

  TEST_CASE("robot placed on an obstacle cell") {
    const std::string doc = R"({
      "grid": {"width": 10, "height": 10},
      "robots": [{"x": 4.5, "y": 4.5}],
      "targets": [{"x": 8.5, "y": 8.5}],
      "obstacles": [{"kind": "static", "cells": [[5, 5]]}]
    })";
    CHECK(load_error(doc) == ValidationError::Kind::Placement);
  }

  TEST_CASE("target placed on an obstacle cell") {
    const std::string doc = R"({
      "grid": {"width": 10, "height": 10},
      "robots": [{"x": 1.5, "y": 1.5}],
      "targets": [{"x": 4.5, "y": 4.5}],
      "obstacles": [{"kind": "static", "center": {"x": 4.5, "y": 4.5}, "lambda": 4.0}]
    })";
    CHECK(load_error(doc) == ValidationError::Kind::TargetInObstacle);
  }

  TEST_CASE("schema and parameter errors") {
    CHECK(load_error("{") == ValidationError::Kind::Schema);
    CHECK(load_error(R"({"grid": {"width": 5, "height": 5}, "robots": [], "targets": [], "colour": 1})") ==
          ValidationError::Kind::Schema);
    CHECK(load_error(R"({"robots": [], "targets": []})") == ValidationError::Kind::Schema);
    CHECK(load_error(R"({"grid": {"width": 5, "height": 5}, "robots": [{"x": 1.5, "y": 1.5}], "targets": [],
                         "obstacles": [{"kind": "wobbly", "cells": [[1, 1]]}]})") ==
          ValidationError::Kind::Schema);
    CHECK(load_error(R"({"grid": {"width": 5, "height": 5}, "robots": [{"x": 1.5, "y": 1.5}], "targets": [],
                         "params": {"sigma": 0.3}})") == ValidationError::Kind::Parameter);
    CHECK(load_error(R"({"grid": {"width": 5, "height": 5}, "robots": [{"x": 9.5, "y": 1.5}], "targets": []})") ==
          ValidationError::Kind::Placement);
  }

  TEST_CASE("builtin scenarios survive a serialization round trip") {
    for (const std::string& name : builtin_scenario_names()) {
      CAPTURE(name);
      const Scenario s = builtin_scenario(name);
      CHECK_NOTHROW(validate_scenario(s));
      check_same_world(load_scenario(serialize_scenario(s)), s);
    }
    CHECK_THROWS_AS(builtin_scenario("volcano"), ValidationError);
  }

  TEST_CASE("shipped scenario files match the builtins") {
    const std::filesystem::path dir = NEURORESCUE_SCENARIO_DIR;
    for (const std::string& name : builtin_scenario_names()) {
      CAPTURE(name);
      const std::filesystem::path file = dir / (name + ".json");
      REQUIRE(std::filesystem::exists(file));
      check_same_world(load_scenario_file(file.string()), builtin_scenario(name));
    }
    CHECK_THROWS_AS(load_scenario_file((dir / "missing.json").string()), IoError);
  }

  TEST_CASE("reference worlds") {
    const Scenario st = static_scenario();
    CHECK(st.grid().width == 70);
    CHECK(st.env.targets().size() == 10);
    const Scenario sudden = sudden_scenario();
    bool has_sudden = false;
    for (const Obstacle& o : sudden.env.obstacles()) {
      if (o.kind == ObstacleKind::Sudden) has_sudden = o.trigger_tick == kSuddenTrigger;
    }
    CHECK(has_sudden);
    const Scenario closed = house_scenario(false);
    const Scenario open = house_scenario(true);
    CHECK(closed.env.occupancy_at(0) != open.env.occupancy_at(0));
    const TrapRegion trap = moving_trap_region();
    CHECK(trap.contains({trap.x_min, trap.y_max}));
    CHECK_FALSE(trap.contains({trap.x_max + 1, trap.y_min}));
  }
}
