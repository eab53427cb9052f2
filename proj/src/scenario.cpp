#include "neurorescue/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "neurorescue/errors.hpp"

namespace neurorescue {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw ValidationError(ValidationError::Kind::Schema, "scenario schema: " + what);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) schema_error(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) schema_error("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) schema_error("missing '" + std::string(key) + "' in " + where);
  const json& v = obj.at(key);
  if (!v.is_number()) schema_error("'" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

Point point_of(const json& v, const std::string& where) {
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_object() && v.contains("x") && v.contains("y")) return {number(v, "x", where), number(v, "y", where)};
  schema_error(where + " must be [x, y]");
}

ObstacleKind kind_of(const std::string& s) {
  if (s == "static") return ObstacleKind::Static;
  if (s == "moving") return ObstacleKind::Moving;
  if (s == "sudden") return ObstacleKind::Sudden;
  schema_error("obstacle kind must be static|moving|sudden, got '" + s + "'");
}

const char* kind_name(ObstacleKind k) {
  switch (k) {
    case ObstacleKind::Static: return "static";
    case ObstacleKind::Moving: return "moving";
    case ObstacleKind::Sudden: return "sudden";
  }
  return "static";
}

void read_params(const json& j, Params& p) {
  reject_unknown_keys(j,
                      {"A", "B", "D", "mu", "E", "sigma", "beta", "r0", "dt_neural", "relax_iters", "tol",
                       "th_theta_deg", "th1", "th2", "fusion_min_degree", "v", "dt_sim"},
                      "params");
  auto opt = [&](const char* key, double& out) {
    if (j.contains(key)) out = number(j, key, "params");
  };
  opt("A", p.shunting.A);
  opt("B", p.shunting.B);
  opt("D", p.shunting.D);
  opt("mu", p.shunting.mu);
  opt("E", p.shunting.E);
  opt("sigma", p.shunting.sigma);
  opt("beta", p.shunting.beta);
  opt("r0", p.shunting.r0);
  opt("dt_neural", p.shunting.dt_neural);
  opt("tol", p.shunting.tol);
  opt("th_theta_deg", p.features.th_theta_deg);
  opt("th1", p.features.th1);
  opt("th2", p.features.th2);
  opt("v", p.motion.v);
  opt("dt_sim", p.motion.dt_sim);
  if (j.contains("relax_iters")) {
    if (!j["relax_iters"].is_number_integer()) schema_error("'relax_iters' must be an integer");
    p.shunting.relax_iters = j["relax_iters"].get<int>();
  }
  if (j.contains("fusion_min_degree")) {
    if (!j["fusion_min_degree"].is_number_integer()) schema_error("'fusion_min_degree' must be an integer");
    p.features.fusion_min_degree = j["fusion_min_degree"].get<int>();
  }
}

Obstacle read_obstacle(const json& j, std::size_t index) {
  const std::string where = "obstacles[" + std::to_string(index) + "]";
  reject_unknown_keys(j, {"kind", "center", "lambda", "cells", "velocity", "stop_center", "trigger_tick"}, where);
  Obstacle o;
  if (!j.contains("kind") || !j["kind"].is_string()) schema_error(where + " needs a string 'kind'");
  o.kind = kind_of(j["kind"].get<std::string>());
  if (j.contains("center")) o.center = point_of(j["center"], where + ".center");
  const bool has_lambda = j.contains("lambda");
  const bool has_cells = j.contains("cells");
  if (has_lambda == has_cells) schema_error(where + " needs exactly one of 'lambda' or 'cells'");
  if (has_lambda) {
    o.lambda = number(j, "lambda", where);
    if (!(*o.lambda > 0.0)) schema_error(where + ".lambda must be > 0");
    if (!o.center) schema_error(where + " with 'lambda' needs a 'center'");
  } else {
    const json& cells = j["cells"];
    if (!cells.is_array() || cells.empty()) schema_error(where + ".cells must be a non-empty array");
    for (const json& c : cells) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer()) {
        schema_error(where + ".cells entries must be [i, j] integer pairs");
      }
      // Files use 1-based grid indices.
      o.cells.push_back({c[0].get<int>() - 1, c[1].get<int>() - 1});
    }
  }
  if (o.kind == ObstacleKind::Moving) {
    if (!j.contains("velocity") || !j.contains("stop_center")) {
      schema_error(where + " (moving) needs 'velocity' and 'stop_center'");
    }
    if (!o.center) schema_error(where + " (moving) needs a 'center'");
    o.velocity = point_of(j["velocity"], where + ".velocity");
    o.stop_center = point_of(j["stop_center"], where + ".stop_center");
    auto reachable = [](double from, double to, double v) {
      return v == 0.0 ? from == to : (to - from) * v >= 0.0;
    };
    if (!reachable(o.center->x, o.stop_center->x, o.velocity.x) ||
        !reachable(o.center->y, o.stop_center->y, o.velocity.y)) {
      schema_error(where + ".stop_center is not reachable along 'velocity'");
    }
  } else if (j.contains("velocity") || j.contains("stop_center")) {
    schema_error(where + ": 'velocity'/'stop_center' only apply to moving obstacles");
  }
  if (o.kind == ObstacleKind::Sudden) {
    if (!j.contains("trigger_tick") || !j["trigger_tick"].is_number_integer()) {
      schema_error(where + " (sudden) needs an integer 'trigger_tick'");
    }
    o.trigger_tick = j["trigger_tick"].get<int>();
    if (o.trigger_tick < 0) schema_error(where + ".trigger_tick must be >= 0");
  } else if (j.contains("trigger_tick")) {
    schema_error(where + ": 'trigger_tick' only applies to sudden obstacles");
  }
  return o;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

}  // namespace

void validate_scenario(const Scenario& s) {
  const GridSpec& grid = s.env.grid();
  s.params.validate();
  std::set<Cell> robot_cells;
  for (const RobotState& r : s.env.robots()) {
    const Point p{r.pose.x, r.pose.y};
    if (!grid.contains(p)) {
      throw ValidationError(ValidationError::Kind::Placement, "robot " + std::to_string(r.id) + " outside the grid");
    }
    if (!s.env.is_free(p, 0) || s.env.blocked(grid.cell_of(p))) {
      throw ValidationError(ValidationError::Kind::Placement,
                            "robot " + std::to_string(r.id) + " placed inside an obstacle");
    }
    if (!robot_cells.insert(grid.cell_of(p)).second) {
      throw ValidationError(ValidationError::Kind::Placement, "two robots share a cell");
    }
  }
  for (const Target& t : s.env.targets()) {
    if (!grid.contains(t.position)) {
      throw ValidationError(ValidationError::Kind::Placement, "target " + std::to_string(t.id) + " outside the grid");
    }
    if (!s.env.is_free(t.position, 0) || s.env.blocked(grid.cell_of(t.position))) {
      throw ValidationError(ValidationError::Kind::TargetInObstacle,
                            "target " + std::to_string(t.id) + " lies inside an obstacle");
    }
  }
  if (s.probe) {
    if (!grid.contains(s.probe->start) || !grid.contains(s.probe->target)) {
      throw ValidationError(ValidationError::Kind::Placement, "probe endpoints outside the grid");
    }
  }
}

Scenario load_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("not valid JSON: ") + e.what());
  }
  try {
    reject_unknown_keys(doc, {"name", "grid", "params", "robots", "targets", "obstacles", "probe"}, "document");
    if (!doc.contains("grid")) schema_error("missing 'grid'");
    const json& g = doc["grid"];
    reject_unknown_keys(g, {"width", "height", "cell_length"}, "grid");
    GridSpec grid;
    if (!g.contains("width") || !g["width"].is_number_integer() || !g.contains("height") ||
        !g["height"].is_number_integer()) {
      schema_error("grid needs integer 'width' and 'height'");
    }
    grid.width = g["width"].get<int>();
    grid.height = g["height"].get<int>();
    grid.cell_length = g.contains("cell_length") ? number(g, "cell_length", "grid") : 1.0;
    grid.validate();

    Scenario s;
    s.name = doc.value("name", std::string{});
    s.env = Environment(grid);
    if (doc.contains("params")) read_params(doc["params"], s.params);
    try {
      s.params.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(ValidationError::Kind::Parameter, std::string("scenario params: ") + e.what());
    }

    if (doc.contains("obstacles")) {
      if (!doc["obstacles"].is_array()) schema_error("'obstacles' must be an array");
      std::size_t i = 0;
      for (const json& o : doc["obstacles"]) s.env.add_obstacle(read_obstacle(o, i++));
    }
    if (!doc.contains("robots") || !doc["robots"].is_array()) schema_error("'robots' must be an array");
    int id = 0;
    for (const json& r : doc["robots"]) {
      const std::string where = "robots[" + std::to_string(id) + "]";
      reject_unknown_keys(r, {"x", "y", "theta"}, where);
      RobotState robot;
      robot.id = id++;
      robot.pose = {number(r, "x", where), number(r, "y", where),
                    r.contains("theta") ? number(r, "theta", where) * std::numbers::pi / 180.0 : 0.0};
      robot.speed = s.params.motion.v;
      s.env.add_robot(robot);
    }
    if (!doc.contains("targets") || !doc["targets"].is_array()) schema_error("'targets' must be an array");
    id = 0;
    for (const json& t : doc["targets"]) {
      const std::string where = "targets[" + std::to_string(id) + "]";
      reject_unknown_keys(t, {"x", "y"}, where);
      s.env.add_target({id++, {number(t, "x", where), number(t, "y", where)}, TargetStatus::Pending});
    }
    if (doc.contains("probe")) {
      const json& p = doc["probe"];
      reject_unknown_keys(p, {"start", "target"}, "probe");
      if (!p.contains("start") || !p.contains("target")) schema_error("probe needs 'start' and 'target'");
      s.probe = Probe{point_of(p["start"], "probe.start"), point_of(p["target"], "probe.target")};
    }
    validate_scenario(s);
    return s;
  } catch (const json::exception& e) {
    schema_error(e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
  const GridSpec& grid = s.grid();
  const Params& p = s.params;
  json doc;
  if (!s.name.empty()) doc["name"] = s.name;
  doc["grid"] = {{"width", grid.width}, {"height", grid.height}, {"cell_length", grid.cell_length}};
  doc["params"] = {{"A", p.shunting.A},
                   {"B", p.shunting.B},
                   {"D", p.shunting.D},
                   {"mu", p.shunting.mu},
                   {"E", p.shunting.E},
                   {"sigma", p.shunting.sigma},
                   {"beta", p.shunting.beta},
                   {"r0", p.shunting.r0},
                   {"dt_neural", p.shunting.dt_neural},
                   {"relax_iters", p.shunting.relax_iters},
                   {"tol", p.shunting.tol},
                   {"th_theta_deg", p.features.th_theta_deg},
                   {"th1", p.features.th1},
                   {"th2", p.features.th2},
                   {"fusion_min_degree", p.features.fusion_min_degree},
                   {"v", p.motion.v},
                   {"dt_sim", p.motion.dt_sim}};
  doc["robots"] = json::array();
  for (const RobotState& r : s.env.robots()) {
    doc["robots"].push_back({{"x", r.pose.x}, {"y", r.pose.y}, {"theta", r.pose.theta * 180.0 / std::numbers::pi}});
  }
  doc["targets"] = json::array();
  for (const Target& t : s.env.targets()) doc["targets"].push_back({{"x", t.position.x}, {"y", t.position.y}});
  doc["obstacles"] = json::array();
  for (const Obstacle& o : s.env.obstacles()) {
    json jo;
    jo["kind"] = kind_name(o.kind);
    if (o.center) jo["center"] = point_json(*o.center);
    if (o.lambda) {
      jo["lambda"] = *o.lambda;
    } else {
      json cells = json::array();
      for (const Cell& c : o.cells) cells.push_back(json::array({c.x + 1, c.y + 1}));
      jo["cells"] = std::move(cells);
    }
    if (o.kind == ObstacleKind::Moving) {
      jo["velocity"] = point_json(o.velocity);
      if (o.stop_center) jo["stop_center"] = point_json(*o.stop_center);
    }
    if (o.kind == ObstacleKind::Sudden) jo["trigger_tick"] = o.trigger_tick;
    doc["obstacles"].push_back(std::move(jo));
  }
  if (s.probe) doc["probe"] = {{"start", point_json(s.probe->start)}, {"target", point_json(s.probe->target)}};
  return doc.dump(1);
}

}  // namespace neurorescue
