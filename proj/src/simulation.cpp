#include "neurorescue/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "neurorescue/errors.hpp"
#include "neurorescue/navigation.hpp"
#include "neurorescue/neural_field.hpp"

namespace neurorescue {

std::string_view method_name(Method method) { return method == Method::Binn ? "binn" : "flbbinn"; }

Method parse_method(std::string_view name) {
  if (name == "binn") return Method::Binn;
  if (name == "flbbinn") return Method::Flbbinn;
  throw ValidationError(ValidationError::Kind::Configuration, "unknown method '" + std::string(name) + "'");
}

double RescueReport::total_path_length() const {
  double sum = 0.0;
  for (const RobotReport& r : robots) sum += r.path_length;
  return sum;
}

int RescueReport::total_idle_steps() const {
  int sum = 0;
  for (const RobotReport& r : robots) sum += r.idle_steps;
  return sum;
}

std::vector<Pose> RescueReport::robot_path(int robot_id) const {
  std::vector<Pose> out;
  for (const TrajectorySample& s : trajectory) {
    if (s.robot_id == robot_id) out.push_back(s.pose);
  }
  return out;
}

int default_tick_limit(const GridSpec& grid) { return 10 * (grid.width + grid.height); }

NeuralField clearance_field(const Environment& env, const ShuntingParams& params) {
  NeuralField field(env.grid());
  field.set_inputs(assemble_external_input(env, {}, params));
  relax_to_convergence(field, params, 20000);
  return field;
}

NeuralField converged_target_field(const Environment& env, const ShuntingParams& params, int max_steps) {
  InputSources sources;
  for (const Target& t : env.targets()) {
    if (t.status != TargetStatus::Rescued) sources.target_ids.push_back(t.id);
  }
  NeuralField field(env.grid());
  field.set_inputs(assemble_external_input(env, sources, params));
  relax_to_convergence(field, params, max_steps);
  return field;
}

double obstacle_clearance(Point p, const Environment& env) {
  const GridSpec& grid = env.grid();
  const double L = grid.cell_length;
  double best = std::numeric_limits<double>::infinity();
  const auto& occ = env.occupancy();
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (!occ[grid.index({x, y})]) continue;
      const double dx = std::max({x * L - p.x, 0.0, p.x - (x + 1) * L});
      const double dy = std::max({y * L - p.y, 0.0, p.y - (y + 1) * L});
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

double path_min_clearance(const std::vector<Pose>& path, const Environment& env) {
  double best = std::numeric_limits<double>::infinity();
  for (const Pose& p : path) best = std::min(best, obstacle_clearance({p.x, p.y}, env));
  return best;
}

namespace {

struct Follower {
  HeuristicPath path;
  std::size_t next = 1;  // index of the waypoint being approached
};

/// Moves up to `budget` meters along the polyline. Returns the distance covered.
double follow(Pose& pose, Follower& f, double budget) {
  double moved = 0.0;
  while (budget > 1e-12 && f.next < f.path.waypoints.size()) {
    const Point wp = f.path.waypoints[f.next];
    const double dx = wp.x - pose.x, dy = wp.y - pose.y;
    const double d = std::hypot(dx, dy);
    if (d <= budget) {
      if (d > 0.0) pose.theta = std::atan2(dy, dx);
      pose.x = wp.x;
      pose.y = wp.y;
      moved += d;
      budget -= d;
      ++f.next;
    } else {
      pose.theta = std::atan2(dy, dx);
      pose.x += budget * dx / d;
      pose.y += budget * dy / d;
      moved += budget;
      budget = 0.0;
    }
  }
  return moved;
}

bool remaining_clear(const Follower& f, Cell current, const NeuralField& field) {
  Cell from = current;
  for (std::size_t i = f.next; i < f.path.cells.size(); ++i) {
    if (!collision_free_link(from, f.path.cells[i], field)) return false;
    from = f.path.cells[i];
  }
  return true;
}

/// Relaxes a private field and returns the commanded cell. Without a strictly higher neighbor
/// the robot sits on a maximum that is not its target: the field has aged into the self-excited
/// plateau, so it restarts from rest and the target's wavefront is rebuilt.
Cell navigate_step(NeuralField& field, Cell here, double heading, const ShuntingParams& params, int& iterations,
                   int& resets) {
  iterations = std::max(iterations, relax(field, params).iterations);
  Cell next = command_neuron(field, here, heading);
  if (next != here && field.activity(next) <= field.activity(here)) {
    field.reset();
    ++resets;
    iterations = std::max(iterations, relax(field, params).iterations);
    next = command_neuron(field, here, heading);
  }
  return next;
}

struct Agent {
  std::optional<int> target;
  NeuralField field;
  Cell segment_start{};
  std::optional<Follower> follower;
  bool moved_yet = false;
  RobotReport report;
};

class Mission {
 public:
  Mission(const Scenario& scenario, const RunOptions& options)
      : scenario_(scenario),
        options_(options),
        params_(scenario.params),
        env_(scenario.env),
        grid_(env_.grid()),
        learner_(grid_, params_.features) {
    limit_ = options.ticks_max > 0 ? options.ticks_max : default_tick_limit(grid_);
    report_.method = options.method;
    report_.seed = options.seed;
    report_.target_count = static_cast<int>(env_.targets().size());
    report_.field_neurons = grid_.cell_count();
  }

  RescueReport run() {
    env_.set_tick(0);
    refresh_clearance(0, true);
    if (options_.features_in) learner_.load(*options_.features_in, clearance_);
    if (is_flbbinn() && learner_.complete()) report_.heuristic_enabled_tick = 0;
    for (const Target& t : env_.targets()) target_fields_.emplace(t.id, NeuralField(grid_));
    for (const RobotState& r : env_.robots()) {
      Agent a;
      a.field = NeuralField(grid_);
      a.report.id = r.id;
      agents_.emplace(r.id, std::move(a));
      report_.trajectory.push_back({0, r.id, r.pose, false});
    }

    int tick = 0;
    while (report_.rescued() < report_.target_count && tick < limit_) {
      ++tick;
      step(tick);
    }
    report_.ticks = tick;
    report_.complete = report_.rescued() == report_.target_count;
    for (auto& [id, a] : agents_) report_.robots.push_back(a.report);
    if (is_flbbinn()) {
      report_.features = learner_.features();
      report_.matrix = learner_.matrix();
      report_.feature_log = learner_.log();
    }
    if (scenario_.probe && options_.run_probe) report_.probe = run_probe(*scenario_.probe, tick);
    return std::move(report_);
  }

 private:
  bool is_flbbinn() const { return options_.method == Method::Flbbinn; }

  void refresh_clearance(int tick, bool force) {
    if (!force && env_.occupancy() == last_occupancy_) return;
    last_occupancy_ = env_.occupancy();
    clearance_ = clearance_field(env_, params_.shunting);
    if (!force && is_flbbinn()) learner_.refresh(clearance_, tick);
  }

  Cell cell_of(const RobotState& r) const { return grid_.cell_of({r.pose.x, r.pose.y}); }

  void step(int tick) {
    env_.set_tick(tick);
    refresh_clearance(tick, false);
    int iterations = 0;

    for (const RobotState& r : env_.robots()) {
      if (env_.blocked(cell_of(r))) report_.collisions.push_back({tick, r.id, cell_of(r), true});
    }

    std::vector<int> pending;
    for (const Target& t : env_.targets()) {
      if (t.status == TargetStatus::Pending) pending.push_back(t.id);
    }
    for (int id : pending) {
      NeuralField& f = target_fields_.at(id);
      f.set_inputs(assemble_external_input(env_, {{id}, false, std::nullopt}, params_.shunting));
      iterations = std::max(iterations, relax(f, params_.shunting).iterations);
    }
    assign(pending);

    std::set<Cell> occupied;
    for (const RobotState& r : env_.robots()) occupied.insert(cell_of(r));

    for (RobotState& robot : env_.robots()) {
      Agent& agent = agents_.at(robot.id);
      bool idle = false;
      if (agent.target) check_rescue(robot, agent);
      if (agent.target) {
        const Cell here = cell_of(robot);
        if (agent.follower) {
          move_heuristic(robot, agent, tick);
        } else {
          idle = move_binn(robot, agent, occupied, tick, iterations);
        }
        occupied.erase(here);
        occupied.insert(cell_of(robot));
        check_rescue(robot, agent);
      }
      report_.trajectory.push_back({tick, robot.id, robot.pose, idle});
    }
    report_.relax_iterations.push_back(iterations);
    if (is_flbbinn() && learner_.complete() && !report_.heuristic_enabled_tick) report_.heuristic_enabled_tick = tick;

    if (options_.snapshot && options_.snapshot_every > 0 && tick % options_.snapshot_every == 0) {
      options_.snapshot(tick, "clearance", clearance_);
      for (const auto& [id, a] : agents_) {
        if (a.target && !a.follower) options_.snapshot(tick, "robot" + std::to_string(id), a.field);
      }
    }
  }

  void assign(const std::vector<int>& pending) {
    std::vector<RobotState> free;
    for (const RobotState& r : env_.robots()) {
      if (!agents_.at(r.id).target) free.push_back(r);
    }
    if (free.empty() || pending.empty()) return;
    std::map<int, const NeuralField*> fields;
    for (int id : pending) fields[id] = &target_fields_.at(id);
    const ActivityMatrix m = build_activity_matrix(free, pending, fields, grid_);
    const Assignment a = assign_targets(m);
    for (const RobotState& r : free) {
      if (auto t = highest_activity_target(m, a, r.id)) lock(*env_.find_robot(r.id), *t);
    }
  }

  void lock(const RobotState& robot, int target_id) {
    Agent& agent = agents_.at(robot.id);
    Target& target = *env_.find_target(target_id);
    target.status = TargetStatus::Assigned;
    for (RobotState& r : env_.robots()) {
      if (r.id == robot.id) r.assigned_target = target_id;
    }
    agent.target = target_id;
    agent.segment_start = cell_of(robot);
    agent.field.reset();
    agent.follower.reset();
    if (is_flbbinn() && learner_.complete()) {
      try {
        HeuristicPath path = plan_via_matrix(
            {{robot.pose.x, robot.pose.y}, target.position, &learner_.features(), &learner_.matrix(), &clearance_});
        if (path_is_clear(path, clearance_)) {
          agent.follower = Follower{std::move(path), 1};
          ++agent.report.heuristic_segments;
        } else {
          ++agent.report.fallbacks;
        }
      } catch (const PlanningError&) {
        ++agent.report.fallbacks;
      }
    }
  }

  void move_heuristic(RobotState& robot, Agent& agent, int tick) {
    if (!remaining_clear(*agent.follower, cell_of(robot), clearance_)) {
      agent.follower.reset();
      agent.field.reset();
      ++agent.report.fallbacks;
      int unused = 0;
      std::set<Cell> none;
      move_binn(robot, agent, none, tick, unused);
      return;
    }
    const Cell before = cell_of(robot);
    const double prev_heading = robot.pose.theta;
    const double moved = follow(robot.pose, *agent.follower, params_.motion.v * params_.motion.dt_sim);
    robot.trajectory.push_back(robot.pose);
    agent.report.path_length += moved;
    ++agent.report.steps;
    agent.moved_yet = true;
    const Cell after = cell_of(robot);
    if (env_.blocked(after)) report_.collisions.push_back({tick, robot.id, after, false});
    if (after != before && is_flbbinn()) learner_.observe_step(after, prev_heading, robot.pose.theta, clearance_, tick);
  }

  /// Returns true when the robot stayed in place.
  bool move_binn(RobotState& robot, Agent& agent, const std::set<Cell>& occupied, int tick, int& iterations) {
    InputSources sources{{*agent.target}, true, robot.id};
    agent.field.set_inputs(assemble_external_input(env_, sources, params_.shunting));
    const Cell here = cell_of(robot);
    Cell next = navigate_step(agent.field, here, robot.pose.theta, params_.shunting, iterations,
                              agent.report.field_resets);
    if (next != here && occupied.count(next)) next = here;
    const double prev_heading = robot.pose.theta;
    const Pose before = robot.pose;
    switch (advance_robot(robot, next, env_)) {
      case StepOutcome::Idle:
        ++agent.report.idle_steps;
        if (!agent.moved_yet) ++agent.report.idle_at_start;
        return true;
      case StepOutcome::Collision:
        report_.collisions.push_back({tick, robot.id, next, false});
        ++agent.report.idle_steps;
        return true;
      case StepOutcome::Moved:
        agent.report.path_length += distance({before.x, before.y}, {robot.pose.x, robot.pose.y});
        ++agent.report.steps;
        agent.moved_yet = true;
        if (is_flbbinn()) learner_.observe_step(next, prev_heading, robot.pose.theta, clearance_, tick);
        return false;
    }
    return false;
  }

  void check_rescue(RobotState& robot, Agent& agent) {
    Target& target = *env_.find_target(*agent.target);
    const bool arrived = agent.follower ? agent.follower->next >= agent.follower->path.waypoints.size()
                                        : cell_of(robot) == grid_.cell_of(target.position);
    if (!arrived) return;
    target.status = TargetStatus::Rescued;
    report_.rescue_order.push_back(target.id);
    robot.assigned_target.reset();
    agent.target.reset();
    agent.follower.reset();
    if (is_flbbinn()) {
      learner_.offer_candidate(agent.segment_start, clearance_, env_.tick());
      learner_.offer_candidate(grid_.cell_of(target.position), clearance_, env_.tick());
    }
  }

  ProbeReport run_probe(const Probe& probe, int start_tick) {
    ProbeReport pr;
    pr.start = probe.start;
    pr.target = probe.target;
    RobotState robot;
    robot.pose = {probe.start.x, probe.start.y, 0.0};
    robot.speed = params_.motion.v;
    pr.trajectory.push_back(robot.pose);

    if (is_flbbinn() && learner_.complete()) {
      try {
        HeuristicPath path =
            plan_via_matrix({probe.start, probe.target, &learner_.features(), &learner_.matrix(), &clearance_});
        if (path_is_clear(path, clearance_)) {
          pr.plan = path;
          pr.heuristic = true;
          Follower f{std::move(path), 1};
          while (f.next < f.path.waypoints.size()) {
            pr.path_length += follow(robot.pose, f, params_.motion.v * params_.motion.dt_sim);
            pr.trajectory.push_back(robot.pose);
            ++pr.steps;
          }
          pr.reached = true;
          return pr;
        }
      } catch (const PlanningError&) {
      }
      pr.fell_back = true;
    } else if (is_flbbinn()) {
      pr.fell_back = true;
    }

    Environment penv = env_;
    penv.clear_robots();
    penv.clear_targets();
    penv.add_target({0, probe.target, TargetStatus::Assigned});
    penv.add_robot(robot);
    NeuralField field(grid_);
    const Cell goal = grid_.cell_of(probe.target);
    int unused = 0;
    for (int k = 1; k <= limit_; ++k) {
      penv.set_tick(start_tick + k);
      RobotState& r = penv.robots().front();
      if (grid_.cell_of({r.pose.x, r.pose.y}) == goal) break;
      field.set_inputs(assemble_external_input(penv, {{0}, true, r.id}, params_.shunting));
      const Cell here = grid_.cell_of({r.pose.x, r.pose.y});
      const Pose before = r.pose;
      const Cell next = navigate_step(field, here, r.pose.theta, params_.shunting, unused, pr.field_resets);
      const StepOutcome o = advance_robot(r, next, penv);
      pr.trajectory.push_back(r.pose);
      if (o == StepOutcome::Moved) {
        pr.path_length += distance({before.x, before.y}, {r.pose.x, r.pose.y});
        ++pr.steps;
      } else {
        ++pr.idle_steps;
      }
    }
    const RobotState& r = penv.robots().front();
    pr.reached = grid_.cell_of({r.pose.x, r.pose.y}) == goal;
    return pr;
  }

  const Scenario& scenario_;
  const RunOptions& options_;
  Params params_;
  Environment env_;
  GridSpec grid_;
  int limit_ = 0;
  FeatureLearner learner_;
  NeuralField clearance_;
  std::vector<std::uint8_t> last_occupancy_;
  std::map<int, NeuralField> target_fields_;
  std::map<int, Agent> agents_;
  RescueReport report_;
};

}  // namespace

RescueReport run_rescue(const Scenario& scenario, const RunOptions& options) {
  validate_scenario(scenario);
  return Mission(scenario, options).run();
}

std::vector<BenchmarkRow> run_benchmark(const std::vector<Scenario>& scenarios, const std::vector<Method>& methods,
                                        std::uint64_t seed, int ticks_max) {
  std::vector<BenchmarkRow> rows;
  for (const Scenario& s : scenarios) {
    for (Method m : methods) {
      RunOptions opts;
      opts.method = m;
      opts.seed = seed;
      opts.ticks_max = ticks_max;
      const RescueReport rep = run_rescue(s, opts);
      BenchmarkRow row;
      row.scenario = s.name;
      row.method = m;
      row.neurons = m == Method::Binn ? rep.field_neurons : rep.features.size();
      row.complete = rep.complete;
      row.collisions = static_cast<int>(rep.collisions.size());
      if (rep.probe) {
        row.probe = true;
        row.path_length = rep.probe->path_length;
        row.steps = rep.probe->steps;
        row.idle_steps = rep.probe->idle_steps;
        row.complete = row.complete && rep.probe->reached;
      } else {
        row.path_length = rep.total_path_length();
        for (const RobotReport& r : rep.robots) row.steps += r.steps;
        row.idle_steps = rep.total_idle_steps();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(6);
  out << "scenario,method,neurons,path_length_m,steps,idle_steps,complete,collisions\n";
  for (const BenchmarkRow& r : rows) {
    out << r.scenario << ',' << method_name(r.method) << ',' << r.neurons << ',' << r.path_length << ',' << r.steps
        << ',' << r.idle_steps << ',' << (r.complete ? 1 : 0) << ',' << r.collisions << '\n';
  }
  return out.str();
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "A" || name == "a" || name == "a-decay") return SweepParameter::A;
  if (name == "mu") return SweepParameter::Mu;
  if (name == "sigma") return SweepParameter::Sigma;
  throw ValidationError(ValidationError::Kind::Configuration, "unknown sweep parameter '" + std::string(name) + "'");
}

std::vector<SweepResult> run_sweep(const SweepSpec& sweep) {
  std::vector<SweepResult> results;
  for (double value : sweep.values) {
    SweepResult res;
    res.value = value;
    Scenario s = sweep.base;
    switch (sweep.parameter) {
      case SweepParameter::A: s.params.shunting.A = value; break;
      case SweepParameter::Mu: s.params.shunting.mu = value; break;
      case SweepParameter::Sigma: s.params.shunting.sigma = value; break;
    }
    try {
      s.params.validate();
    } catch (const ValidationError& e) {
      res.error = e.what();
      results.push_back(std::move(res));
      continue;
    }
    res.valid = true;
    RunOptions opts;
    opts.method = sweep.method;
    opts.seed = sweep.seed;
    opts.ticks_max = sweep.ticks_max;
    opts.run_probe = false;
    try {
      res.report = run_rescue(s, opts);
    } catch (const NumericalError& e) {
      res.valid = false;
      res.error = e.what();
    }
    Environment env = s.env;
    env.set_tick(0);
    res.snapshot = converged_target_field(env, s.params.shunting);
    std::size_t free = 0, saturated = 0;
    for (int y = 0; y < env.grid().height; ++y) {
      for (int x = 0; x < env.grid().width; ++x) {
        if (env.blocked({x, y})) continue;
        ++free;
        if (res.snapshot.activity({x, y}) >= s.params.shunting.B) ++saturated;
      }
    }
    res.saturated_fraction = free ? static_cast<double>(saturated) / free : 0.0;
    res.saturated = res.saturated_fraction > 0.5;
    if (res.report) {
      env.set_tick(res.report->ticks);
      res.min_clearance = std::numeric_limits<double>::infinity();
      for (const RobotReport& r : res.report->robots) {
        res.min_clearance = std::min(res.min_clearance, path_min_clearance(res.report->robot_path(r.id), env));
      }
    }
    results.push_back(std::move(res));
  }
  return results;
}

Scenario random_scenario(const GridSpec& grid, int robots, int targets, int obstacles, std::uint64_t seed) {
  grid.validate();
  std::mt19937_64 rng(seed);
  Scenario s;
  s.name = "random-" + std::to_string(seed);
  s.env = Environment(grid);
  std::uniform_int_distribution<int> xs(0, grid.width - 1), ys(0, grid.height - 1);
  const int max_side = std::max(1, std::min(grid.width, grid.height) / 6);
  std::uniform_int_distribution<int> side(1, max_side);
  for (int i = 0; i < obstacles; ++i) {
    Obstacle o;
    const int x0 = xs(rng), y0 = ys(rng), w = side(rng), h = side(rng);
    for (int y = y0; y < std::min(grid.height, y0 + h); ++y) {
      for (int x = x0; x < std::min(grid.width, x0 + w); ++x) o.cells.push_back({x, y});
    }
    s.env.add_obstacle(std::move(o));
  }
  std::set<Cell> used;
  auto sample = [&]() {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const Cell c{xs(rng), ys(rng)};
      if (s.env.blocked(c) || used.count(c)) continue;
      used.insert(c);
      return grid.center(c);
    }
    throw ValidationError(ValidationError::Kind::Placement, "random scenario has no free cell left");
  };
  for (int i = 0; i < robots; ++i) {
    RobotState r;
    r.id = i;
    const Point p = sample();
    r.pose = {p.x, p.y, 0.0};
    s.env.add_robot(r);
  }
  for (int i = 0; i < targets; ++i) s.env.add_target({i, sample(), TargetStatus::Pending});
  return s;
}

}  // namespace neurorescue
