#pragma once

#include <stdexcept>
#include <string>

namespace neurorescue {

/// Malformed or contradictory input: scenario documents, parameters, field inputs.
class ValidationError : public std::runtime_error {
 public:
  enum class Kind { Schema, Placement, TargetInObstacle, Parameter, ContradictoryInput, Configuration };

  ValidationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(int cell_x, int cell_y, const std::string& what)
      : std::runtime_error(what), x_(cell_x), y_(cell_y) {}

  int cell_x() const noexcept { return x_; }
  int cell_y() const noexcept { return y_; }

 private:
  int x_;
  int y_;
};

class GeometryError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class PlanningError : public std::runtime_error {
 public:
  enum class Kind { AttachmentFailure, NoPath, MissingSnapshot };

  PlanningError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace neurorescue
