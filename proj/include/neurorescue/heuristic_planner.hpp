#pragma once

#include <cstdint>
#include <vector>

#include "neurorescue/feature_learning.hpp"
#include "neurorescue/geometry.hpp"
#include "neurorescue/neural_field.hpp"

namespace neurorescue {

/// Read-only planning snapshot. The referenced objects must outlive the query.
struct PlanQuery {
  Point start{};
  Point target{};
  const std::vector<FeatureNeuron>* features = nullptr;
  const FeatureMatrix* matrix = nullptr;
  const NeuralField* field = nullptr;
};

struct HeuristicPath {
  std::vector<Point> waypoints;  // start, feature neurons..., target
  std::vector<Cell> cells;
  double length = 0.0;  // meters
  int expanded_nodes = 0;
  long long relax_ops = 0;  // matrix entries examined
};

/// Index of the nearest feature neuron with a clear link to the pose's cell.
/// Throws PlanningError(AttachmentFailure) when none is reachable or the pose is on
/// negative activity.
std::size_t attach_endpoint(Point pose, const std::vector<FeatureNeuron>& features, const NeuralField& field);

/// Result of a single-pair search over a dense weighted graph.
struct GraphPath {
  std::vector<int> vertices;  // source ... sink
  double length = 0.0;        // summed in path order, source to sink
  int expanded_nodes = 0;
  long long relax_ops = 0;
};

/// Dijkstra over an n x n adjacency (weights >= 0 where `adjacent` is set), searching
/// backward from `sink` so that parents point toward it. O(n^2).
/// Throws PlanningError(NoPath) when source and sink are disconnected.
GraphPath dense_shortest_path(const std::vector<double>& weights, const std::vector<std::uint8_t>& adjacent, int n,
                              int source, int sink);

/// Shortest route start -> target over the feature graph plus the two attachment
/// segments (and the direct segment when it is itself clear).
HeuristicPath plan_via_matrix(const PlanQuery& query);

/// Every segment of the path still passes collision_free_link on `field`.
bool path_is_clear(const HeuristicPath& path, const NeuralField& field);

}  // namespace neurorescue
