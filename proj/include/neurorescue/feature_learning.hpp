#pragma once

#include <optional>
#include <vector>

#include "neurorescue/geometry.hpp"
#include "neurorescue/neural_field.hpp"
#include "neurorescue/params.hpp"

namespace neurorescue {

/// A sparse roadmap vertex kept from an executed trajectory.
struct FeatureNeuron {
  int id = 0;
  Cell cell{};
  std::vector<Cell> represented;  // cells whose nearest clearly linked feature this is
  int degree = 0;                 // collision-free links to other feature neurons
};

/// Symmetric K x K matrix of clear-link distances (meters), 0 where no link exists.
struct FeatureMatrix {
  int size = 0;
  std::vector<double> values;

  double at(int g, int h) const { return values[static_cast<std::size_t>(g) * size + h]; }
};

struct Representativeness {
  double ratio = 0.0;
  std::size_t represented = 0;
  std::size_t total = 0;
};

/// True iff every cell the segment between the two cell centers touches (supercover,
/// corner contacts included) is in bounds with zeta >= 0.
bool collision_free_link(Cell a, Cell b, const NeuralField& field);

/// `cell` when the wrapped heading change exceeds the threshold.
std::optional<Cell> angle_candidate(double prev_heading, double curr_heading, Cell cell, double th_theta_rad);

/// Accepts when the candidate is farther than th1 (meters) from every feature neuron.
bool distance_channel(Cell candidate, const std::vector<FeatureNeuron>& features, double th1, const GridSpec& grid);

/// Drops feature neurons sitting on negative activity; their clusters are released.
std::vector<FeatureNeuron> activity_channel(std::vector<FeatureNeuron> features, const NeuralField& field);

/// Rebuilds L(g, h) over the features in their current order and refreshes degrees.
FeatureMatrix update_feature_matrix(std::vector<FeatureNeuron>& features, const NeuralField& field);

/// Secondary distance fusion: among neurons with degree > params.fusion_min_degree, a pair
/// closer than th2 with a clear link loses its later (row-major) member. Repeats to a fixpoint.
std::vector<FeatureNeuron> secondary_fusion(std::vector<FeatureNeuron> features, const NeuralField& field,
                                            const FeatureParams& params);

/// Assigns every zeta >= 0 cell to the nearest feature neuron with a clear link (ties by
/// feature order) and returns the represented fraction. Throws std::domain_error when no cell has zeta >= 0.
Representativeness representativeness(std::vector<FeatureNeuron>& features, const NeuralField& field);

/// Mean distance (meters) from `cell` to a set of represented cells.
double mean_distance(Cell cell, const std::vector<Cell>& represented, const GridSpec& grid);

struct OptimizeResult {
  bool replaced = false;
  int replaced_id = -1;
  double mean_before = 0.0;
  double mean_after = 0.0;
};

/// Replaces the feature nearest to `candidate` when the candidate sees its whole cluster
/// and has a strictly smaller mean distance to it. Clusters must be current.
OptimizeResult optimize_feature(Cell candidate, std::vector<FeatureNeuron>& features, const NeuralField& field);

/// Online feature extraction shared by all robots. Every mutation of the feature set is
/// committed only if it does not lower representativeness; pruning by the activity
/// channel is exempt because it follows world changes.
class FeatureLearner {
 public:
  enum class PassKind { Admission, Optimization, Refresh };

  struct PassRecord {
    int tick = 0;
    PassKind kind = PassKind::Admission;
    Cell candidate{};
    double ratio_before = 0.0;
    double ratio_after = 0.0;
    bool committed = false;
    bool world_changed = false;
    std::optional<double> mean_before;
    std::optional<double> mean_after;
  };

  FeatureLearner(GridSpec grid, FeatureParams params);

  /// Turning-angle test on consecutive headings, then a candidate pass.
  void observe_step(Cell cell, double prev_heading, double curr_heading, const NeuralField& field, int tick);
  /// Runs the filtering pass (representativeness < 1) or optimization (== 1) on one candidate.
  void offer_candidate(Cell candidate, const NeuralField& field, int tick);
  /// Activity channel + matrix + representativeness against the current field.
  void refresh(const NeuralField& field, int tick);

  /// Installs a persisted model; clusters and the matrix are rebuilt against `field`.
  void load(std::vector<FeatureNeuron> features, const NeuralField& field);

  const std::vector<FeatureNeuron>& features() const { return features_; }
  const FeatureMatrix& matrix() const { return matrix_; }
  const Representativeness& representativeness() const { return rep_; }
  bool complete() const { return rep_.total > 0 && rep_.represented == rep_.total; }
  const std::vector<PassRecord>& log() const { return log_; }

 private:
  struct Evaluated {
    std::vector<FeatureNeuron> features;
    FeatureMatrix matrix;
    Representativeness rep;
  };

  Evaluated evaluate(std::vector<FeatureNeuron> features, const NeuralField& field) const;
  void commit(Evaluated e);

  GridSpec grid_;
  FeatureParams params_;
  std::vector<FeatureNeuron> features_;
  FeatureMatrix matrix_;
  Representativeness rep_;
  int next_id_ = 1;
  std::vector<PassRecord> log_;
};

}  // namespace neurorescue
