#include <cmath>
#include <set>

#include "doctest.h"
#include "neurorescue/builtin_scenarios.hpp"
#include "neurorescue/errors.hpp"
#include "neurorescue/export.hpp"
#include "neurorescue/simulation.hpp"

using namespace neurorescue;

namespace {

Scenario corner_to_corner() {
  Scenario s;
  s.name = "empty10";
  s.env = Environment(GridSpec{10, 10, 1.0});
  RobotState r;
  r.pose = {0.5, 0.5, 0.0};
  s.env.add_robot(r);
  s.env.add_target({0, {7.5, 7.5}, TargetStatus::Pending});
  return s;
}

double polyline_length(const std::vector<Pose>& path) {
  double sum = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    sum += std::hypot(path[i].x - path[i - 1].x, path[i].y - path[i - 1].y);
  }
  return sum;
}

}  // namespace

TEST_SUITE("simulation") {
  TEST_CASE("single robot on an empty map moves diagonally to its target") {
    const RescueReport r = run_rescue(corner_to_corner(), {});
    CHECK(r.complete);
    REQUIRE(r.robots.size() == 1);
    CHECK(r.robots[0].steps == 7);
    CHECK(r.robots[0].idle_steps == 0);
    CHECK(r.total_path_length() == doctest::Approx(7.0 * std::sqrt(2.0)));
    CHECK(r.total_path_length() == doctest::Approx(9.899).epsilon(1e-4));
    CHECK(r.collisions.empty());
  }

  TEST_CASE("reference static world is fully rescued without collisions") {
    const RescueReport r = run_rescue(static_scenario(), {});
    CHECK(r.complete);
    CHECK(r.rescued() == 10);
    CHECK(r.collisions.empty());
    CHECK(r.field_neurons == 4900);
    const std::set<int> unique(r.rescue_order.begin(), r.rescue_order.end());
    CHECK(unique.size() == 10);
  }

  TEST_CASE("runs are deterministic") {
    for (Method m : {Method::Binn, Method::Flbbinn}) {
      RunOptions o;
      o.method = m;
      o.seed = 9;
      const Scenario s = random_scenario(GridSpec{24, 24, 1.0}, 2, 4, 6, 77);
      const RescueReport a = run_rescue(s, o);
      const RescueReport b = run_rescue(s, o);
      CHECK(trajectory_csv(a.trajectory) == trajectory_csv(b.trajectory));
      CHECK(a.rescue_order == b.rescue_order);
      CHECK(a.ticks == b.ticks);
      CHECK(features_csv(a.features, s.grid()) == features_csv(b.features, s.grid()));
    }
  }

  TEST_CASE("reported path lengths equal the traced polylines") {
    for (Method m : {Method::Binn, Method::Flbbinn}) {
      RunOptions o;
      o.method = m;
      const RescueReport r = run_rescue(static_scenario(), o);
      double total = 0.0;
      for (const RobotReport& rr : r.robots) {
        const double traced = polyline_length(r.robot_path(rr.id));
        CHECK(std::abs(rr.path_length - traced) < 1e-9);
        total += rr.path_length;
      }
      CHECK(std::abs(r.total_path_length() - total) < 1e-9);
    }
  }

  TEST_CASE("tick limit yields an incomplete report") {
    RunOptions o;
    o.ticks_max = 5;
    const RescueReport r = run_rescue(static_scenario(), o);
    CHECK_FALSE(r.complete);
    CHECK(r.ticks == 5);
    CHECK(r.rescued() < 10);
  }

  TEST_CASE("random worlds are seeded and valid") {
    const GridSpec grid{30, 20, 1.0};
    const Scenario a = random_scenario(grid, 3, 5, 8, 4);
    const Scenario b = random_scenario(grid, 3, 5, 8, 4);
    const Scenario c = random_scenario(grid, 3, 5, 8, 5);
    CHECK_NOTHROW(validate_scenario(a));
    CHECK(serialize_scenario(a) == serialize_scenario(b));
    CHECK(serialize_scenario(a) != serialize_scenario(c));
    CHECK(a.env.robots().size() == 3);
    CHECK(a.env.targets().size() == 5);
  }

  TEST_CASE("name parsing") {
    CHECK(parse_method("binn") == Method::Binn);
    CHECK(parse_method("flbbinn") == Method::Flbbinn);
    CHECK(method_name(Method::Flbbinn) == "flbbinn");
    CHECK_THROWS_AS(parse_method("astar"), ValidationError);
    CHECK(parse_sweep_parameter("A") == SweepParameter::A);
    CHECK(parse_sweep_parameter("mu") == SweepParameter::Mu);
    CHECK(parse_sweep_parameter("sigma") == SweepParameter::Sigma);
    CHECK_THROWS_AS(parse_sweep_parameter("beta"), ValidationError);
  }

  TEST_CASE("clearance measures distance to the nearest blocked square") {
    Environment env(GridSpec{10, 10, 1.0});
    CHECK(std::isinf(obstacle_clearance({5.0, 5.0}, env)));
    Obstacle o;
    o.cells = {{5, 5}};
    env.add_obstacle(o);
    CHECK(obstacle_clearance({2.5, 5.5}, env) == doctest::Approx(2.5));
    CHECK(obstacle_clearance({3.5, 3.5}, env) == doctest::Approx(std::sqrt(4.5)));
    CHECK(path_min_clearance({{2.5, 5.5, 0.0}, {4.5, 5.5, 0.0}}, env) == doctest::Approx(0.5));
  }

  TEST_CASE("sweep flags invalid values and continues") {
    SweepSpec sw;
    sw.parameter = SweepParameter::Sigma;
    sw.values = {0.2, -0.5};
    sw.base = corner_to_corner();
    const auto results = run_sweep(sw);
    REQUIRE(results.size() == 2);
    CHECK_FALSE(results[0].valid);
    CHECK_FALSE(results[0].error.empty());
    CHECK(results[1].valid);
    REQUIRE(results[1].report.has_value());
    CHECK(results[1].report->complete);
  }

  TEST_CASE("larger A leaves less residual activity away from the target") {
    const Scenario s = corner_to_corner();
    auto residual = [&](double A) {
      ShuntingParams p = s.params.shunting;
      p.A = A;
      const NeuralField f = converged_target_field(s.env, p);
      double sum = 0.0;
      int n = 0;
      for (std::size_t i = 0; i < s.grid().cell_count(); ++i) {
        const Cell c = s.grid().cell_at(i);
        if (s.grid().distance(c, {7, 7}) <= 3.0) continue;
        sum += f.activity(c);
        ++n;
      }
      return sum / n;
    };
    CHECK(residual(30.0) < residual(10.0));
  }
}
