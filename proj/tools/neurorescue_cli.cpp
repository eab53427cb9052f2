#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "neurorescue/builtin_scenarios.hpp"
#include "neurorescue/errors.hpp"
#include "neurorescue/export.hpp"
#include "neurorescue/heuristic_planner.hpp"
#include "neurorescue/scenario.hpp"
#include "neurorescue/simulation.hpp"

namespace nr = neurorescue;
namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kValidation = 2, kIncomplete = 3, kIo = 4 };

struct Overrides {
  std::optional<double> sigma;
  std::optional<double> mu;
  std::optional<double> a_decay;
};

struct Common {
  std::string scenario = "builtin:static";
  std::string method = "binn";
  std::uint64_t seed = 0;
  std::string out;
  int snapshot_every = 0;
  int ticks_max = 0;
  Overrides overrides;
  std::string features_in;
  std::string features_out;
  std::string format = "csv";
  bool overwrite = false;
};

void add_scenario_flags(CLI::App* app, Common& c) {
  app->add_option("--scenario", c.scenario, "Scenario JSON path or builtin:<name>");
  app->add_option("--seed", c.seed, "Run seed");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--ticks-max", c.ticks_max, "Tick limit (0 = 10 * (width + height))")->check(CLI::NonNegativeNumber);
  app->add_option("--sigma", c.overrides.sigma, "Override sigma");
  app->add_option("--mu", c.overrides.mu, "Override mu");
  app->add_option("--a-decay", c.overrides.a_decay, "Override the passive decay rate A");
  app->add_option("--format", c.format, "Field snapshot format")->check(CLI::IsMember({"csv", "pgm"}));
  app->add_flag("--overwrite", c.overwrite, "Replace existing output files");
}

nr::Scenario load(const Common& c) {
  nr::Scenario s;
  const std::string prefix = "builtin:";
  if (c.scenario.rfind(prefix, 0) == 0) {
    s = nr::builtin_scenario(c.scenario.substr(prefix.size()));
  } else {
    s = nr::load_scenario_file(c.scenario);
  }
  if (c.overrides.sigma) s.params.shunting.sigma = *c.overrides.sigma;
  if (c.overrides.mu) s.params.shunting.mu = *c.overrides.mu;
  if (c.overrides.a_decay) s.params.shunting.A = *c.overrides.a_decay;
  try {
    s.params.validate();
  } catch (const nr::ValidationError& e) {
    throw nr::ValidationError(nr::ValidationError::Kind::Parameter, e.what());
  }
  return s;
}

std::string out_path(const Common& c, const std::string& name) {
  if (c.out.empty()) return name;
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw nr::IoError("cannot create output directory '" + c.out + "': " + ec.message());
  return (fs::path(c.out) / name).string();
}

void write_field(const Common& c, const std::string& stem, const nr::NeuralField& field, const nr::Params& p) {
  const nr::FieldFormat format = nr::parse_field_format(c.format);
  if (format == nr::FieldFormat::Csv) {
    nr::write_file(out_path(c, stem + ".csv"), nr::field_csv(field) + "\n", c.overwrite);
  } else {
    nr::write_file(out_path(c, stem + ".pgm"), nr::field_pgm(field, p.shunting.B, p.shunting.D), c.overwrite);
  }
}

std::optional<std::vector<nr::FeatureNeuron>> read_model(const std::string& path, const nr::GridSpec& grid) {
  if (path.empty()) return std::nullopt;
  return nr::parse_features_csv(nr::read_file(path), grid);
}

void write_model(const std::string& path, const nr::RescueReport& report, const nr::GridSpec& grid, bool overwrite) {
  nr::write_file(path, nr::features_csv(report.features, grid), overwrite);
  nr::write_file(nr::matrix_path_for(path), nr::matrix_csv(report.matrix), overwrite);
}

nlohmann::json report_json(const nr::RescueReport& r) {
  nlohmann::json j;
  j["method"] = std::string(nr::method_name(r.method));
  j["seed"] = r.seed;
  j["complete"] = r.complete;
  j["ticks"] = r.ticks;
  j["rescued"] = r.rescued();
  j["target_count"] = r.target_count;
  j["rescue_order"] = r.rescue_order;
  j["field_neurons"] = r.field_neurons;
  j["feature_count"] = r.features.size();
  j["collisions"] = r.collisions.size();
  j["total_path_length_m"] = r.total_path_length();
  j["relax_iterations"] = r.relax_iterations;
  if (r.heuristic_enabled_tick) j["heuristic_enabled_tick"] = *r.heuristic_enabled_tick;
  j["robots"] = nlohmann::json::array();
  for (const nr::RobotReport& rr : r.robots) {
    j["robots"].push_back({{"id", rr.id},
                           {"path_length_m", rr.path_length},
                           {"steps", rr.steps},
                           {"idle_steps", rr.idle_steps},
                           {"idle_at_start", rr.idle_at_start},
                           {"heuristic_segments", rr.heuristic_segments},
                           {"fallbacks", rr.fallbacks}});
  }
  if (r.probe) {
    j["probe"] = {{"reached", r.probe->reached},
                  {"heuristic", r.probe->heuristic},
                  {"fell_back", r.probe->fell_back},
                  {"path_length_m", r.probe->path_length},
                  {"steps", r.probe->steps},
                  {"idle_steps", r.probe->idle_steps}};
  }
  return j;
}

int cmd_run(const Common& c) {
  const nr::Scenario s = load(c);
  nr::RunOptions opts;
  opts.method = nr::parse_method(c.method);
  opts.seed = c.seed;
  opts.ticks_max = c.ticks_max;
  opts.snapshot_every = c.snapshot_every;
  opts.features_in = read_model(c.features_in, s.grid());
  if (c.snapshot_every > 0) {
    opts.snapshot = [&](int tick, const std::string& label, const nr::NeuralField& field) {
      write_field(c, "field_" + label + "_t" + std::to_string(tick), field, s.params);
    };
  }
  const nr::RescueReport report = nr::run_rescue(s, opts);
  const std::string json = report_json(report).dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << json;
  } else {
    nr::write_file(out_path(c, "report.json"), json, c.overwrite);
    nr::write_file(out_path(c, "trajectory.csv"), nr::trajectory_csv(report.trajectory), c.overwrite);
    if (report.probe && report.probe->plan) {
      nr::write_file(out_path(c, "probe_plan.csv"), nr::plan_csv(*report.probe->plan), c.overwrite);
    }
    std::cout << "rescued " << report.rescued() << "/" << report.target_count << " in " << report.ticks
              << " ticks\n";
  }
  if (!c.features_out.empty()) {
    if (opts.method != nr::Method::Flbbinn) {
      throw nr::ValidationError(nr::ValidationError::Kind::Configuration, "--features-out needs --method flbbinn");
    }
    write_model(c.features_out, report, s.grid(), c.overwrite);
  }
  return report.complete ? kOk : kIncomplete;
}

int cmd_benchmark(const Common& c, const std::vector<std::string>& scenarios) {
  std::vector<nr::Scenario> worlds;
  if (scenarios.empty()) {
    for (const std::string& name : nr::builtin_scenario_names()) {
      if (name != "corner") worlds.push_back(nr::builtin_scenario(name));
    }
  } else {
    for (const std::string& path : scenarios) {
      Common one = c;
      one.scenario = path;
      worlds.push_back(load(one));
    }
  }
  const auto rows = nr::run_benchmark(worlds, {nr::Method::Binn, nr::Method::Flbbinn}, c.seed, c.ticks_max);
  const std::string csv = nr::benchmark_csv(rows);
  if (c.out.empty()) {
    std::cout << csv;
  } else {
    nr::write_file(out_path(c, "benchmark.csv"), csv, c.overwrite);
  }
  for (const auto& r : rows) {
    if (!r.complete) return kIncomplete;
  }
  return kOk;
}

int cmd_sweep(const Common& c, const std::string& param, const std::vector<double>& values) {
  nr::SweepSpec sweep;
  sweep.parameter = nr::parse_sweep_parameter(param);
  sweep.values = values;
  sweep.base = load(c);
  sweep.method = nr::parse_method(c.method);
  sweep.seed = c.seed;
  sweep.ticks_max = c.ticks_max;
  const auto results = nr::run_sweep(sweep);
  std::ostringstream csv;
  csv << "value,valid,complete,path_length_m,idle_steps,saturated_fraction,saturated,min_clearance_m,error\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const nr::SweepResult& r = results[i];
    csv << r.value << ',' << (r.valid ? 1 : 0) << ',' << (r.report && r.report->complete ? 1 : 0) << ','
        << (r.report ? r.report->total_path_length() : 0.0) << ',' << (r.report ? r.report->total_idle_steps() : 0)
        << ',' << r.saturated_fraction << ',' << (r.saturated ? 1 : 0) << ',' << r.min_clearance << ",\""
        << r.error << "\"\n";
    if (r.valid && !c.out.empty()) write_field(c, "sweep_" + param + "_" + std::to_string(i), r.snapshot, sweep.base.params);
  }
  if (c.out.empty()) {
    std::cout << csv.str();
  } else {
    nr::write_file(out_path(c, "sweep.csv"), csv.str(), c.overwrite);
  }
  return kOk;
}

nr::Point parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw nr::ValidationError(nr::ValidationError::Kind::Configuration, "expected x,y but got '" + text + "'");
  }
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw nr::ValidationError(nr::ValidationError::Kind::Configuration, "expected x,y but got '" + text + "'");
  }
}

int cmd_plan(const Common& c, const std::string& start, const std::string& target) {
  if (c.features_in.empty()) {
    throw nr::ValidationError(nr::ValidationError::Kind::Configuration, "plan needs --features-in");
  }
  const nr::Scenario s = load(c);
  std::optional<nr::Point> from, to;
  if (!start.empty()) from = parse_point(start);
  if (!target.empty()) to = parse_point(target);
  if (s.probe) {
    if (!from) from = s.probe->start;
    if (!to) to = s.probe->target;
  }
  if (!from || !to) {
    throw nr::ValidationError(nr::ValidationError::Kind::Configuration, "plan needs --start and --target");
  }
  std::vector<nr::FeatureNeuron> features = nr::parse_features_csv(nr::read_file(c.features_in), s.grid());
  nr::FeatureMatrix matrix = nr::parse_matrix_csv(nr::read_file(nr::matrix_path_for(c.features_in)));
  if (matrix.size != static_cast<int>(features.size())) {
    throw nr::ValidationError(nr::ValidationError::Kind::Schema, "feature file and matrix disagree on K");
  }
  nr::Environment env = s.env;
  env.set_tick(0);
  const nr::NeuralField field = nr::clearance_field(env, s.params.shunting);
  const nr::HeuristicPath path = nr::plan_via_matrix({*from, *to, &features, &matrix, &field});
  const std::string csv = nr::plan_csv(path);
  if (c.out.empty()) {
    std::cout << csv;
  } else {
    nr::write_file(out_path(c, "plan.csv"), csv, c.overwrite);
  }
  return kOk;
}

int cmd_export(const Common& c) {
  const nr::Scenario s = load(c);
  nr::Environment env = s.env;
  env.set_tick(0);
  write_field(c, "field", nr::converged_target_field(env, s.params.shunting), s.params);
  write_field(c, "clearance", nr::clearance_field(env, s.params.shunting), s.params);
  nr::write_file(out_path(c, "scenario.json"), nr::serialize_scenario(s) + "\n", c.overwrite);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot rescue planning on a shunting neural field"};
  app.require_subcommand(1);
  Common c;

  auto* run = app.add_subcommand("run", "Run one rescue mission");
  add_scenario_flags(run, c);
  run->add_option("--method", c.method)->check(CLI::IsMember({"binn", "flbbinn"}));
  run->add_option("--snapshot-every", c.snapshot_every, "Write field snapshots every N ticks")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--features-in", c.features_in, "Load a learned feature model");
  run->add_option("--features-out", c.features_out, "Save the learned feature model");

  std::vector<std::string> bench_scenarios;
  auto* bench = app.add_subcommand("benchmark", "Compare both methods on several scenarios");
  add_scenario_flags(bench, c);
  bench->remove_option(bench->get_option("--scenario"));
  bench->add_option("--scenario", bench_scenarios, "Scenario paths (default: all built-in worlds)");

  std::string sweep_param = "mu";
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Vary one shunting parameter");
  add_scenario_flags(sweep, c);
  sweep->add_option("--method", c.method)->check(CLI::IsMember({"binn", "flbbinn"}));
  sweep->add_option("--param", sweep_param)->check(CLI::IsMember({"A", "mu", "sigma"}));
  sweep->add_option("--values", sweep_values)->required()->delimiter(',');

  std::string start, target;
  auto* plan = app.add_subcommand("plan", "Answer a path query from a saved feature model");
  add_scenario_flags(plan, c);
  plan->add_option("--features-in", c.features_in, "Feature model (CSV plus .matrix.csv)")->required();
  plan->add_option("--start", start, "x,y in meters");
  plan->add_option("--target", target, "x,y in meters");

  auto* exp = app.add_subcommand("export", "Write converged field snapshots and the scenario");
  add_scenario_flags(exp, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(c);
    if (*bench) return cmd_benchmark(c, bench_scenarios);
    if (*sweep) return cmd_sweep(c, sweep_param, sweep_values);
    if (*plan) return cmd_plan(c, start, target);
    if (*exp) return cmd_export(c);
  } catch (const nr::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const nr::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kValidation;
  } catch (const nr::PlanningError& e) {
    std::cerr << "planning error: " << e.what() << "\n";
    return kIncomplete;
  } catch (const nr::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
