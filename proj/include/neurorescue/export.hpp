#pragma once

#include <string>
#include <vector>

#include "neurorescue/feature_learning.hpp"
#include "neurorescue/heuristic_planner.hpp"
#include "neurorescue/neural_field.hpp"
#include "neurorescue/simulation.hpp"

namespace neurorescue {

enum class FieldFormat { Csv, Pgm };

/// Throws ValidationError(Configuration) unless "csv" or "pgm".
FieldFormat parse_field_format(const std::string& name);

/// Rows of the grid in ascending y, values in ascending x, 6 decimals. No trailing newline.
std::string field_csv(const NeuralField& field);
/// Binary 8-bit PGM, same row order as field_csv; [-D, B] maps linearly onto [0, 255].
std::string field_pgm(const NeuralField& field, double B, double D);

/// id,x,y,degree,represented_count with x, y the feature cell centers in meters.
std::string features_csv(const std::vector<FeatureNeuron>& features, const GridSpec& grid);
std::string matrix_csv(const FeatureMatrix& matrix);
/// tick,robot_id,x,y,theta,idle_flag with theta in degrees.
std::string trajectory_csv(const std::vector<TrajectorySample>& samples);
/// idx,x,y rows, then a length_m,waypoint_count,expanded_nodes header and its values.
std::string plan_csv(const HeuristicPath& path);

std::vector<FeatureNeuron> parse_features_csv(const std::string& text, const GridSpec& grid);
FeatureMatrix parse_matrix_csv(const std::string& text);

/// Companion path of a feature file: "model.csv" -> "model.matrix.csv".
std::string matrix_path_for(const std::string& features_path);

/// Throws IoError when the file exists and `overwrite` is false, or when writing fails.
void write_file(const std::string& path, const std::string& content, bool overwrite);
std::string read_file(const std::string& path);

}  // namespace neurorescue
