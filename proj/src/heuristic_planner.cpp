#include "neurorescue/heuristic_planner.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "neurorescue/errors.hpp"

namespace neurorescue {

std::size_t attach_endpoint(Point pose, const std::vector<FeatureNeuron>& features, const NeuralField& field) {
  const GridSpec& grid = field.grid();
  if (!grid.contains(pose)) throw PlanningError(PlanningError::Kind::AttachmentFailure, "pose outside the grid");
  const Cell cell = grid.cell_of(pose);
  if (field.activity(cell) < 0.0) {
    throw PlanningError(PlanningError::Kind::AttachmentFailure, "pose lies on negative activity");
  }
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grid.distance(cell, features[a].cell) < grid.distance(cell, features[b].cell);
  });
  for (std::size_t i : order) {
    if (collision_free_link(cell, features[i].cell, field)) return i;
  }
  throw PlanningError(PlanningError::Kind::AttachmentFailure, "no feature neuron reachable from the pose");
}

GraphPath dense_shortest_path(const std::vector<double>& weights, const std::vector<std::uint8_t>& adjacent, int n,
                              int source, int sink) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(n, inf);
  std::vector<int> toward_sink(n, -1);
  std::vector<std::uint8_t> settled(n, 0);
  GraphPath out;
  cost[sink] = 0.0;

  for (;;) {
    int current = -1;
    for (int v = 0; v < n; ++v) {
      ++out.relax_ops;
      if (!settled[v] && cost[v] < inf && (current < 0 || cost[v] < cost[current])) current = v;
    }
    if (current < 0) break;
    settled[current] = 1;
    ++out.expanded_nodes;
    if (current == source) break;
    const std::size_t row = static_cast<std::size_t>(current) * n;
    for (int next = 0; next < n; ++next) {
      ++out.relax_ops;
      if (settled[next] || !adjacent[row + next]) continue;
      const double c = cost[current] + weights[row + next];
      if (c < cost[next]) {
        cost[next] = c;
        toward_sink[next] = current;
      }
    }
  }
  if (!settled[source]) throw PlanningError(PlanningError::Kind::NoPath, "start and target are disconnected");

  for (int v = source; v != -1; v = toward_sink[v]) out.vertices.push_back(v);
  for (std::size_t i = 0; i + 1 < out.vertices.size(); ++i) {
    out.length += weights[static_cast<std::size_t>(out.vertices[i]) * n + out.vertices[i + 1]];
  }
  return out;
}

HeuristicPath plan_via_matrix(const PlanQuery& q) {
  if (!q.features || !q.matrix || !q.field) {
    throw PlanningError(PlanningError::Kind::MissingSnapshot, "plan query without a feature snapshot");
  }
  const auto& features = *q.features;
  const FeatureMatrix& L = *q.matrix;
  const NeuralField& field = *q.field;
  const GridSpec& grid = field.grid();
  const int k = static_cast<int>(features.size());
  if (L.size != k) throw PlanningError(PlanningError::Kind::MissingSnapshot, "feature matrix does not match features");

  const std::size_t start_attach = attach_endpoint(q.start, features, field);
  const std::size_t target_attach = attach_endpoint(q.target, features, field);
  const Cell start_cell = grid.cell_of(q.start);
  const Cell target_cell = grid.cell_of(q.target);

  const int n = k + 2;
  const int s = k, t = k + 1;
  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<std::uint8_t> adj(w.size(), 0);
  auto link = [&](int a, int b, double d) {
    w[static_cast<std::size_t>(a) * n + b] = w[static_cast<std::size_t>(b) * n + a] = d;
    adj[static_cast<std::size_t>(a) * n + b] = adj[static_cast<std::size_t>(b) * n + a] = 1;
  };
  for (int g = 0; g < k; ++g) {
    for (int h = 0; h < k; ++h) {
      if (L.at(g, h) > 0.0) link(g, h, L.at(g, h));
    }
  }
  link(s, static_cast<int>(start_attach), grid.distance(start_cell, features[start_attach].cell));
  link(t, static_cast<int>(target_attach), grid.distance(target_cell, features[target_attach].cell));
  if (collision_free_link(start_cell, target_cell, field)) link(s, t, grid.distance(start_cell, target_cell));

  const GraphPath gp = dense_shortest_path(w, adj, n, s, t);
  HeuristicPath path;
  path.expanded_nodes = gp.expanded_nodes;
  path.relax_ops = gp.relax_ops;
  path.length = gp.length;
  for (int v : gp.vertices) {
    const Cell c = v == s ? start_cell : v == t ? target_cell : features[v].cell;
    if (!path.cells.empty() && path.cells.back() == c) continue;
    path.cells.push_back(c);
    path.waypoints.push_back(grid.center(c));
  }
  return path;
}

bool path_is_clear(const HeuristicPath& path, const NeuralField& field) {
  for (std::size_t i = 0; i + 1 < path.cells.size(); ++i) {
    if (!collision_free_link(path.cells[i], path.cells[i + 1], field)) return false;
  }
  return !path.cells.empty();
}

}  // namespace neurorescue
