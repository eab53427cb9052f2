#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neurorescue/feature_learning.hpp"
#include "neurorescue/heuristic_planner.hpp"
#include "neurorescue/scenario.hpp"

namespace neurorescue {

enum class Method { Binn, Flbbinn };

std::string_view method_name(Method method);
/// Throws ValidationError(Configuration) for anything but "binn" or "flbbinn".
Method parse_method(std::string_view name);

struct TrajectorySample {
  int tick = 0;
  int robot_id = 0;
  Pose pose{};
  bool idle = false;
};

struct CollisionEvent {
  int tick = 0;
  int robot_id = 0;
  Cell cell{};
  bool crushed = false;  // an obstacle moved onto the robot
};

struct RobotReport {
  int id = 0;
  double path_length = 0.0;  // meters
  int steps = 0;
  int idle_steps = 0;
  int idle_at_start = 0;  // idle ticks before the first move
  int heuristic_segments = 0;
  int fallbacks = 0;  // heuristic paths rejected at or during execution
  int field_resets = 0;  // private field restarted after stalling on a spurious maximum
};

/// A late request served after the mission: one fresh robot, one fresh target.
struct ProbeReport {
  Point start{};
  Point target{};
  bool reached = false;
  bool heuristic = false;
  bool fell_back = false;
  double path_length = 0.0;
  int steps = 0;
  int idle_steps = 0;
  int field_resets = 0;
  std::vector<Pose> trajectory;
  std::optional<HeuristicPath> plan;
};

struct RescueReport {
  Method method = Method::Binn;
  std::uint64_t seed = 0;
  bool complete = false;
  int ticks = 0;
  int target_count = 0;
  std::vector<int> rescue_order;
  std::vector<RobotReport> robots;
  std::vector<TrajectorySample> trajectory;
  std::vector<CollisionEvent> collisions;
  std::vector<int> relax_iterations;  // per tick, largest count over all fields
  std::size_t field_neurons = 0;
  std::vector<FeatureNeuron> features;
  FeatureMatrix matrix;
  std::vector<FeatureLearner::PassRecord> feature_log;
  std::optional<int> heuristic_enabled_tick;  // first tick with a complete feature model
  std::optional<ProbeReport> probe;

  int rescued() const { return static_cast<int>(rescue_order.size()); }
  double total_path_length() const;
  int total_idle_steps() const;
  /// Trajectory of one robot in tick order, including its initial pose.
  std::vector<Pose> robot_path(int robot_id) const;
};

using SnapshotSink = std::function<void(int tick, const std::string& label, const NeuralField& field)>;

struct RunOptions {
  Method method = Method::Binn;
  std::uint64_t seed = 0;
  int ticks_max = 0;  // 0 selects default_tick_limit
  int snapshot_every = 0;
  SnapshotSink snapshot;
  std::optional<std::vector<FeatureNeuron>> features_in;
  bool run_probe = true;
};

int default_tick_limit(const GridSpec& grid);

/// Runs the mission until every target is rescued or the tick limit is hit, then the
/// scenario's probe request if there is one.
RescueReport run_rescue(const Scenario& scenario, const RunOptions& options);

/// Obstacle-only field relaxed to convergence; its negative cells are the obstacles
/// plus the inhibitory halo around them.
NeuralField clearance_field(const Environment& env, const ShuntingParams& params);

/// Distance (meters) from `p` to the nearest blocked cell's square; infinity if none.
double obstacle_clearance(Point p, const Environment& env);
/// Minimum obstacle_clearance over a pose sequence.
double path_min_clearance(const std::vector<Pose>& path, const Environment& env);

struct BenchmarkRow {
  std::string scenario;
  Method method = Method::Binn;
  std::size_t neurons = 0;
  double path_length = 0.0;
  int steps = 0;
  int idle_steps = 0;
  bool complete = false;
  bool probe = false;  // path/steps/idle measured on the probe request
  int collisions = 0;
};

/// One row per (scenario, method). Rows come from the probe request when the scenario
/// defines one, else from the mission totals.
std::vector<BenchmarkRow> run_benchmark(const std::vector<Scenario>& scenarios, const std::vector<Method>& methods,
                                        std::uint64_t seed, int ticks_max = 0);
std::string benchmark_csv(const std::vector<BenchmarkRow>& rows);

enum class SweepParameter { A, Mu, Sigma };

/// Throws ValidationError(Configuration) for unknown names. Accepts "A", "mu", "sigma".
SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Mu;
  std::vector<double> values;
  Scenario base;
  Method method = Method::Binn;
  std::uint64_t seed = 0;
  int ticks_max = 0;
};

struct SweepResult {
  double value = 0.0;
  bool valid = false;
  std::string error;
  std::optional<RescueReport> report;
  NeuralField snapshot;            // all targets excited, relaxed to convergence
  double saturated_fraction = 0.0;  // free cells at zeta == B
  bool saturated = false;           // saturated_fraction > 0.5
  double min_clearance = 0.0;       // over every robot path, meters
};

/// Runs every value independently; an invalid value is flagged and skipped.
std::vector<SweepResult> run_sweep(const SweepSpec& sweep);

/// Field with +E at every non-rescued target and -E at obstacles, relaxed to convergence.
NeuralField converged_target_field(const Environment& env, const ShuntingParams& params, int max_steps = 20000);

/// Seeded random world: rectangular cell-list obstacles, robots and targets rejection-sampled
/// onto free cells.
Scenario random_scenario(const GridSpec& grid, int robots, int targets, int obstacles, std::uint64_t seed);

}  // namespace neurorescue
