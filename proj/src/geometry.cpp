#include "neurorescue/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "neurorescue/errors.hpp"

namespace neurorescue {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void GridSpec::validate() const {
  if (width < 1 || height < 1) {
    throw ValidationError(ValidationError::Kind::Schema, "grid width and height must be >= 1");
  }
  if (!(cell_length > 0.0) || !std::isfinite(cell_length)) {
    throw ValidationError(ValidationError::Kind::Schema, "grid cell_length must be > 0");
  }
}

bool GridSpec::contains(Point p) const {
  return p.x >= 0.0 && p.y >= 0.0 && p.x <= width * cell_length && p.y <= height * cell_length;
}

Cell GridSpec::cell_of(Point p) const {
  int cx = static_cast<int>(std::floor(p.x / cell_length));
  int cy = static_cast<int>(std::floor(p.y / cell_length));
  if (cx == width && p.x <= width * cell_length) cx = width - 1;
  if (cy == height && p.y <= height * cell_length) cy = height - 1;
  return {cx, cy};
}

double GridSpec::distance(Cell a, Cell b) const {
  return cell_length * std::hypot(static_cast<double>(a.x - b.x), static_cast<double>(a.y - b.y));
}

namespace {

long long floor_div(long long n, long long d) {
  long long q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

long long ceil_div(long long n, long long d) { return -floor_div(-n, d); }

}  // namespace

std::vector<Cell> supercover(Cell a, Cell b) {
  // Doubled coordinates: centers sit on odd integers, cell borders on even ones.
  if (b.x < a.x) std::swap(a, b);
  const long long x0 = 2LL * a.x + 1, y0 = 2LL * a.y + 1;
  const long long x1 = 2LL * b.x + 1, y1 = 2LL * b.y + 1;
  const long long dx = x1 - x0, dy = y1 - y0;
  const int row_min = std::min(a.y, b.y), row_max = std::max(a.y, b.y);

  std::vector<Cell> cells;
  if (dx == 0) {
    for (int j = row_min; j <= row_max; ++j) cells.push_back({a.x, j});
    return cells;
  }
  for (int i = a.x; i <= b.x; ++i) {
    const long long xl = std::max<long long>(2LL * i, x0);
    const long long xr = std::min<long long>(2LL * i + 2, x1);
    // y(x) * dx, exact.
    const long long nl = y0 * dx + (xl - x0) * dy;
    const long long nr = y0 * dx + (xr - x0) * dy;
    const long long lo = std::min(nl, nr), hi = std::max(nl, nr);
    // Row j touched iff 2j*dx <= hi and (2j+2)*dx >= lo.
    long long j_lo = ceil_div(lo, 2 * dx) - 1;
    long long j_hi = floor_div(hi, 2 * dx);
    j_lo = std::max<long long>(j_lo, row_min);
    j_hi = std::min<long long>(j_hi, row_max);
    for (long long j = j_lo; j <= j_hi; ++j) cells.push_back({i, static_cast<int>(j)});
  }
  return cells;
}

double heading_between(Cell from, Cell to) {
  return std::atan2(static_cast<double>(to.y - from.y), static_cast<double>(to.x - from.x));
}

double wrap_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(radians, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  if (r > std::numbers::pi) r -= two_pi;
  return r;
}

}  // namespace neurorescue
