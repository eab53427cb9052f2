#pragma once

#include <optional>
#include <string>

#include "neurorescue/environment.hpp"
#include "neurorescue/params.hpp"

namespace neurorescue {

/// A later rescue request answered after the main mission: a new robot at `start`
/// must reach a new target at `target`.
struct Probe {
  Point start{};
  Point target{};
};

struct Scenario {
  std::string name;
  Environment env;
  Params params;
  std::optional<Probe> probe;

  const GridSpec& grid() const { return env.grid(); }
};

/// Parses a JSON scenario document. Unspecified parameters keep their defaults.
/// Throws ValidationError with Kind::Schema, Kind::Placement, Kind::TargetInObstacle
/// or Kind::Parameter.
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

/// Inverse of load_scenario (all parameters written explicitly).
std::string serialize_scenario(const Scenario& scenario);

/// Placement checks shared by the loader and programmatic builders.
void validate_scenario(const Scenario& scenario);

}  // namespace neurorescue
