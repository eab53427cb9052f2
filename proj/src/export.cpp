#include "neurorescue/export.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "neurorescue/errors.hpp"

namespace neurorescue {

namespace {

std::ostringstream fixed6() {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(6);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(ValidationError::Kind::Schema, "not a number: '" + s + "'");
  }
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

FieldFormat parse_field_format(const std::string& name) {
  if (name == "csv") return FieldFormat::Csv;
  if (name == "pgm") return FieldFormat::Pgm;
  throw ValidationError(ValidationError::Kind::Configuration, "unknown format '" + name + "'");
}

std::string field_csv(const NeuralField& field) {
  const GridSpec& grid = field.grid();
  auto out = fixed6();
  for (int y = 0; y < grid.height; ++y) {
    if (y > 0) out << '\n';
    for (int x = 0; x < grid.width; ++x) {
      if (x > 0) out << ',';
      out << field.activity({x, y});
    }
  }
  return out.str();
}

std::string field_pgm(const NeuralField& field, double B, double D) {
  const GridSpec& grid = field.grid();
  std::string out = "P5\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n255\n";
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      const double t = std::clamp((field.activity({x, y}) + D) / (B + D), 0.0, 1.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0))));
    }
  }
  return out;
}

std::string features_csv(const std::vector<FeatureNeuron>& features, const GridSpec& grid) {
  auto out = fixed6();
  out << "id,x,y,degree,represented_count\n";
  for (const FeatureNeuron& f : features) {
    const Point c = grid.center(f.cell);
    out << f.id << ',' << c.x << ',' << c.y << ',' << f.degree << ',' << f.represented.size() << '\n';
  }
  return out.str();
}

std::string matrix_csv(const FeatureMatrix& matrix) {
  auto out = fixed6();
  for (int g = 0; g < matrix.size; ++g) {
    for (int h = 0; h < matrix.size; ++h) {
      if (h > 0) out << ',';
      out << matrix.at(g, h);
    }
    out << '\n';
  }
  return out.str();
}

std::string trajectory_csv(const std::vector<TrajectorySample>& samples) {
  auto out = fixed6();
  out << "tick,robot_id,x,y,theta,idle_flag\n";
  for (const TrajectorySample& s : samples) {
    out << s.tick << ',' << s.robot_id << ',' << s.pose.x << ',' << s.pose.y << ','
        << s.pose.theta * 180.0 / std::numbers::pi << ',' << (s.idle ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string plan_csv(const HeuristicPath& path) {
  auto out = fixed6();
  out << "idx,x,y\n";
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    out << i << ',' << path.waypoints[i].x << ',' << path.waypoints[i].y << '\n';
  }
  out << "length_m,waypoint_count,expanded_nodes\n";
  out << path.length << ',' << path.waypoints.size() << ',' << path.expanded_nodes << '\n';
  return out.str();
}

std::vector<FeatureNeuron> parse_features_csv(const std::string& text, const GridSpec& grid) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != "id,x,y,degree,represented_count") {
    throw ValidationError(ValidationError::Kind::Schema, "feature file lacks the id,x,y,degree,represented_count header");
  }
  std::vector<FeatureNeuron> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cols = split(lines[i], ',');
    if (cols.size() != 5) {
      throw ValidationError(ValidationError::Kind::Schema, "feature row " + std::to_string(i) + " needs 5 columns");
    }
    const Point p{to_double(cols[1]), to_double(cols[2])};
    if (!grid.contains(p)) {
      throw ValidationError(ValidationError::Kind::Placement, "feature row " + std::to_string(i) + " outside the grid");
    }
    FeatureNeuron f;
    f.id = static_cast<int>(to_double(cols[0]));
    f.cell = grid.cell_of(p);
    f.degree = static_cast<int>(to_double(cols[3]));
    out.push_back(f);
  }
  return out;
}

FeatureMatrix parse_matrix_csv(const std::string& text) {
  const auto lines = lines_of(text);
  FeatureMatrix m;
  m.size = static_cast<int>(lines.size());
  for (const std::string& line : lines) {
    const auto cols = split(line, ',');
    if (static_cast<int>(cols.size()) != m.size) {
      throw ValidationError(ValidationError::Kind::Schema, "feature matrix is not square");
    }
    for (const std::string& c : cols) m.values.push_back(to_double(c));
  }
  for (int g = 0; g < m.size; ++g) {
    for (int h = 0; h < m.size; ++h) {
      if (m.at(g, h) != m.at(h, g) || m.at(g, h) < 0.0) {
        throw ValidationError(ValidationError::Kind::Schema, "feature matrix must be symmetric and non-negative");
      }
    }
  }
  return m;
}

std::string matrix_path_for(const std::string& features_path) {
  std::filesystem::path p(features_path);
  const std::string stem = p.extension() == ".csv" ? p.stem().string() : p.filename().string();
  return (p.parent_path() / (stem + ".matrix.csv")).string();
}

void write_file(const std::string& path, const std::string& content, bool overwrite) {
  std::error_code ec;
  if (!overwrite && std::filesystem::exists(path, ec)) {
    throw IoError("refusing to overwrite '" + path + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace neurorescue
