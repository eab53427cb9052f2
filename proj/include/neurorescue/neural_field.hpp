#pragma once

#include <span>
#include <vector>

#include "neurorescue/environment.hpp"
#include "neurorescue/geometry.hpp"
#include "neurorescue/params.hpp"

namespace neurorescue {

/// Lateral connection weight mu/|kl| inside the receptive field, 0 beyond it.
/// |kl| is measured in cell units. Throws std::invalid_argument when k == l.
double connection_weight(Cell k, Cell l, const ShuntingParams& params);

/// Activity landscape of one propagation network: one neuron per grid cell.
class NeuralField {
 public:
  struct Neighbor {
    Cell cell;
    double weight;
  };

  NeuralField() = default;
  explicit NeuralField(GridSpec grid);

  const GridSpec& grid() const { return grid_; }

  double activity(Cell c) const { return zeta_[grid_.index(c)]; }
  void set_activity(Cell c, double value) { zeta_[grid_.index(c)] = value; }
  std::span<const double> activities() const { return zeta_; }
  std::span<double> activities() { return zeta_; }

  double input(Cell c) const { return input_[grid_.index(c)]; }
  std::span<const double> inputs() const { return input_; }
  /// Replaces the external input; size must equal the cell count.
  void set_inputs(std::vector<double> inputs);

  /// In-bounds 8-neighbors with non-zero excitatory weight, in row-major order.
  std::vector<Neighbor> neighbors(Cell c, const ShuntingParams& params) const;

  void reset() { std::fill(zeta_.begin(), zeta_.end(), 0.0); }

 private:
  friend double step_field(NeuralField&, const ShuntingParams&);

  GridSpec grid_{};
  std::vector<double> zeta_;
  std::vector<double> input_;
  // Scratch for the double-buffered update.
  std::vector<double> pos_;
  std::vector<double> neg_;
  std::vector<double> next_;
};

/// Which sources feed a field: +E at the listed targets (rescued ones are skipped),
/// -E at active obstacle cells and, optionally, at every robot other than `self_robot`.
struct InputSources {
  std::vector<int> target_ids;
  bool include_robots = false;
  std::optional<int> self_robot;
};

/// Throws ValidationError(ContradictoryInput) if a designated target sits on a blocked cell.
std::vector<double> assemble_external_input(const Environment& env, const InputSources& sources,
                                            const ShuntingParams& params);

/// One synchronous explicit-Euler step of the safety-augmented shunting equation,
/// clamped to [-D, B]. Returns the largest per-cell |delta zeta|.
/// Throws NumericalError naming the first cell whose pre-clamp value is not finite.
double step_field(NeuralField& field, const ShuntingParams& params);

struct RelaxResult {
  int iterations = 0;
  double last_delta = 0.0;
};

/// Up to params.relax_iters steps, stopping early once max |delta zeta| < params.tol.
RelaxResult relax(NeuralField& field, const ShuntingParams& params);

/// Steps until max |delta zeta| < params.tol or `max_steps` is reached.
RelaxResult relax_to_convergence(NeuralField& field, const ShuntingParams& params, int max_steps);

}  // namespace neurorescue
