#include "neurorescue/neural_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "neurorescue/errors.hpp"
#include "neurorescue/simd/shunting_kernels.hpp"

namespace neurorescue {

namespace {

constexpr double kRadiusSlack = 1e-9;

double weight_at_distance(double d, const ShuntingParams& params) {
  return (d > 0.0 && d <= params.r0 + kRadiusSlack) ? params.mu / d : 0.0;
}

simd::ShuntingConstants constants_for(const ShuntingParams& p) {
  const double w_ax = weight_at_distance(1.0, p);
  const double w_dg = weight_at_distance(std::numbers::sqrt2, p);
  return {p.A, p.B, p.D, p.sigma, p.dt_neural, w_ax, w_dg, p.beta * w_ax, p.beta * w_dg};
}

}  // namespace

double connection_weight(Cell k, Cell l, const ShuntingParams& params) {
  if (k == l) throw std::invalid_argument("connection weight undefined for a self-connection");
  const double d = std::hypot(static_cast<double>(k.x - l.x), static_cast<double>(k.y - l.y));
  return weight_at_distance(d, params);
}

NeuralField::NeuralField(GridSpec grid)
    : grid_(grid),
      zeta_(grid.cell_count(), 0.0),
      input_(grid.cell_count(), 0.0),
      pos_(static_cast<std::size_t>(grid.width + 2) * (grid.height + 2), 0.0),
      neg_(pos_.size(), 0.0),
      next_(grid.cell_count(), 0.0) {}

void NeuralField::set_inputs(std::vector<double> inputs) {
  if (inputs.size() != grid_.cell_count()) {
    throw ValidationError(ValidationError::Kind::Configuration, "input size does not match the grid");
  }
  input_ = std::move(inputs);
}

std::vector<NeuralField::Neighbor> NeuralField::neighbors(Cell c, const ShuntingParams& params) const {
  std::vector<Neighbor> out;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Cell n{c.x + dx, c.y + dy};
      if (!grid_.contains(n)) continue;
      const double w = connection_weight(c, n, params);
      if (w > 0.0) out.push_back({n, w});
    }
  }
  return out;
}

std::vector<double> assemble_external_input(const Environment& env, const InputSources& sources,
                                            const ShuntingParams& params) {
  const GridSpec& grid = env.grid();
  std::vector<double> input(grid.cell_count(), 0.0);
  const auto& occ = env.occupancy();
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (occ[i]) input[i] = -params.E;
  }
  if (sources.include_robots) {
    for (const RobotState& r : env.robots()) {
      if (sources.self_robot && r.id == *sources.self_robot) continue;
      const Cell c = grid.cell_of({r.pose.x, r.pose.y});
      if (grid.contains(c)) input[grid.index(c)] = -params.E;
    }
  }
  for (int id : sources.target_ids) {
    const Target* t = env.find_target(id);
    if (!t) throw ValidationError(ValidationError::Kind::Configuration, "unknown target id " + std::to_string(id));
    if (t->status == TargetStatus::Rescued) continue;
    const Cell c = grid.cell_of(t->position);
    if (!grid.contains(c)) {
      throw ValidationError(ValidationError::Kind::Configuration, "target " + std::to_string(id) + " outside grid");
    }
    if (occ[grid.index(c)]) {
      throw ValidationError(ValidationError::Kind::ContradictoryInput,
                            "target " + std::to_string(id) + " coincides with an obstacle cell");
    }
    input[grid.index(c)] = params.E;
  }
  return input;
}

double step_field(NeuralField& field, const ShuntingParams& params) {
  const simd::KernelTable& kernel = simd::active_kernel();
  const simd::ShuntingConstants k = constants_for(params);
  const simd::StepBuffers buf{field.zeta_.data(), field.input_.data(), field.pos_.data(), field.neg_.data(),
                              field.next_.data(), field.grid_.width, field.grid_.height};
  kernel.rectify(buf, k);
  const simd::StepStats stats = kernel.update(buf, k);
  if (stats.nonfinite) {
    // Locate the offending cell with the scalar reference on a scratch row.
    for (int y = 0; y < field.grid_.height; ++y) {
      simd::StepStats row;
      simd::detail::update_span(buf, k, y, 0, field.grid_.width, row);
      if (!row.nonfinite) continue;
      for (int x = 0; x < field.grid_.width; ++x) {
        simd::StepStats one;
        simd::detail::update_span(buf, k, y, x, x + 1, one);
        if (one.nonfinite) {
          throw NumericalError(x, y, "non-finite activity at cell (" + std::to_string(x) + ", " +
                                         std::to_string(y) + ")");
        }
      }
    }
    throw NumericalError(-1, -1, "non-finite activity");
  }
  field.zeta_.swap(field.next_);
  return stats.max_delta;
}

RelaxResult relax(NeuralField& field, const ShuntingParams& params) {
  RelaxResult result;
  for (int i = 0; i < params.relax_iters; ++i) {
    result.last_delta = step_field(field, params);
    result.iterations = i + 1;
    if (result.last_delta < params.tol) break;
  }
  return result;
}

RelaxResult relax_to_convergence(NeuralField& field, const ShuntingParams& params, int max_steps) {
  RelaxResult result;
  for (int i = 0; i < max_steps; ++i) {
    result.last_delta = step_field(field, params);
    result.iterations = i + 1;
    if (result.last_delta < params.tol) break;
  }
  return result;
}

}  // namespace neurorescue
