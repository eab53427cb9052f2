#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace neurorescue {

/// Grid cell, zero-based. Cell (x, y) covers [x*L, (x+1)*L) x [y*L, (y+1)*L).
struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians
};

double distance(Point a, Point b);

/// Row-major ordering (y first, then x); the deterministic tie-break order used throughout.
constexpr bool row_major_less(Cell a, Cell b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

struct GridSpec {
  int width = 70;
  int height = 70;
  double cell_length = 1.0;  // meters

  void validate() const;

  std::size_t cell_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  bool contains(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  bool contains(Point p) const;
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width + c.x; }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % width), static_cast<int>(index / width)};
  }
  Point center(Cell c) const { return {(c.x + 0.5) * cell_length, (c.y + 0.5) * cell_length}; }
  /// Cell containing p. Points on the far boundary map to the last cell.
  Cell cell_of(Point p) const;
  /// Euclidean distance between cell centers, meters.
  double distance(Cell a, Cell b) const;
};

/// All cells whose closed square the segment between the two cell centers touches,
/// corner contacts included. Exact integer arithmetic; order is row-major within columns.
std::vector<Cell> supercover(Cell a, Cell b);

/// Heading (radians, in (-pi, pi]) of the move from one cell to another.
double heading_between(Cell from, Cell to);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double radians);

}  // namespace neurorescue
