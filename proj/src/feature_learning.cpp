#include "neurorescue/feature_learning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace neurorescue {

bool collision_free_link(Cell a, Cell b, const NeuralField& field) {
  const GridSpec& grid = field.grid();
  if (!grid.contains(a) || !grid.contains(b)) return false;
  if (a == b) return field.activity(a) >= 0.0;
  for (const Cell& c : supercover(a, b)) {
    if (field.activity(c) < 0.0) return false;
  }
  return true;
}

std::optional<Cell> angle_candidate(double prev_heading, double curr_heading, Cell cell, double th_theta_rad) {
  const double turn = std::fabs(wrap_angle(curr_heading - prev_heading));
  if (turn > th_theta_rad) return cell;
  return std::nullopt;
}

bool distance_channel(Cell candidate, const std::vector<FeatureNeuron>& features, double th1, const GridSpec& grid) {
  for (const FeatureNeuron& f : features) {
    if (grid.distance(candidate, f.cell) <= th1) return false;
  }
  return true;
}

std::vector<FeatureNeuron> activity_channel(std::vector<FeatureNeuron> features, const NeuralField& field) {
  std::erase_if(features, [&](const FeatureNeuron& f) { return field.activity(f.cell) < 0.0; });
  return features;
}

FeatureMatrix update_feature_matrix(std::vector<FeatureNeuron>& features, const NeuralField& field) {
  const int k = static_cast<int>(features.size());
  FeatureMatrix m{k, std::vector<double>(static_cast<std::size_t>(k) * k, 0.0)};
  for (FeatureNeuron& f : features) f.degree = 0;
  for (int g = 0; g < k; ++g) {
    for (int h = g + 1; h < k; ++h) {
      if (!collision_free_link(features[g].cell, features[h].cell, field)) continue;
      const double d = field.grid().distance(features[g].cell, features[h].cell);
      m.values[static_cast<std::size_t>(g) * k + h] = d;
      m.values[static_cast<std::size_t>(h) * k + g] = d;
      if (d > 0.0) {
        ++features[g].degree;
        ++features[h].degree;
      }
    }
  }
  return m;
}

std::vector<FeatureNeuron> secondary_fusion(std::vector<FeatureNeuron> features, const NeuralField& field,
                                            const FeatureParams& params) {
  const GridSpec& grid = field.grid();
  for (;;) {
    update_feature_matrix(features, field);
    std::vector<std::size_t> hubs;
    for (std::size_t i = 0; i < features.size(); ++i) {
      if (features[i].degree > params.fusion_min_degree) hubs.push_back(i);
    }
    std::sort(hubs.begin(), hubs.end(),
              [&](std::size_t a, std::size_t b) { return row_major_less(features[a].cell, features[b].cell); });
    std::optional<std::size_t> victim;
    for (std::size_t i = 0; i < hubs.size() && !victim; ++i) {
      for (std::size_t j = i + 1; j < hubs.size(); ++j) {
        const FeatureNeuron& a = features[hubs[i]];
        const FeatureNeuron& b = features[hubs[j]];
        if (grid.distance(a.cell, b.cell) < params.th2 && collision_free_link(a.cell, b.cell, field)) {
          victim = hubs[j];
          break;
        }
      }
    }
    if (!victim) return features;
    features.erase(features.begin() + static_cast<std::ptrdiff_t>(*victim));
  }
}

Representativeness representativeness(std::vector<FeatureNeuron>& features, const NeuralField& field) {
  const GridSpec& grid = field.grid();
  for (FeatureNeuron& f : features) f.represented.clear();
  Representativeness r;
  std::vector<std::pair<long, std::size_t>> order;
  for (std::size_t idx = 0; idx < grid.cell_count(); ++idx) {
    const Cell c = grid.cell_at(idx);
    if (field.activity(c) < 0.0) continue;
    ++r.total;
    if (features.empty()) continue;
    order.clear();
    for (std::size_t i = 0; i < features.size(); ++i) {
      const long dx = features[i].cell.x - c.x, dy = features[i].cell.y - c.y;
      order.emplace_back(dx * dx + dy * dy, i);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [d2, i] : order) {
      if (collision_free_link(features[i].cell, c, field)) {
        features[i].represented.push_back(c);
        ++r.represented;
        break;
      }
    }
  }
  if (r.total == 0) throw std::domain_error("representativeness undefined: no cell with non-negative activity");
  r.ratio = static_cast<double>(r.represented) / static_cast<double>(r.total);
  return r;
}

double mean_distance(Cell cell, const std::vector<Cell>& represented, const GridSpec& grid) {
  if (represented.empty()) return 0.0;
  double sum = 0.0;
  for (const Cell& c : represented) sum += grid.distance(cell, c);
  return sum / static_cast<double>(represented.size());
}

OptimizeResult optimize_feature(Cell candidate, std::vector<FeatureNeuron>& features, const NeuralField& field) {
  OptimizeResult result;
  const GridSpec& grid = field.grid();
  if (features.empty() || !grid.contains(candidate) || field.activity(candidate) < 0.0) return result;

  std::size_t nearest = 0;
  double best = grid.distance(candidate, features[0].cell);
  for (std::size_t i = 1; i < features.size(); ++i) {
    const double d = grid.distance(candidate, features[i].cell);
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  FeatureNeuron& incumbent = features[nearest];
  const std::vector<Cell>& cluster = incumbent.represented;
  if (cluster.empty() || incumbent.cell == candidate) return result;
  for (const Cell& c : cluster) {
    if (!collision_free_link(candidate, c, field)) return result;
  }
  result.mean_before = mean_distance(incumbent.cell, cluster, grid);
  result.mean_after = mean_distance(candidate, cluster, grid);
  if (result.mean_after < result.mean_before) {
    result.replaced = true;
    result.replaced_id = incumbent.id;
    incumbent.cell = candidate;
  }
  return result;
}

FeatureLearner::FeatureLearner(GridSpec grid, FeatureParams params) : grid_(grid), params_(params) {}

FeatureLearner::Evaluated FeatureLearner::evaluate(std::vector<FeatureNeuron> features,
                                                   const NeuralField& field) const {
  Evaluated e;
  e.matrix = update_feature_matrix(features, field);
  try {
    e.rep = neurorescue::representativeness(features, field);
  } catch (const std::domain_error&) {
    e.rep = {};
  }
  e.features = std::move(features);
  return e;
}

void FeatureLearner::commit(Evaluated e) {
  features_ = std::move(e.features);
  matrix_ = std::move(e.matrix);
  rep_ = e.rep;
}

void FeatureLearner::observe_step(Cell cell, double prev_heading, double curr_heading, const NeuralField& field,
                                  int tick) {
  if (auto candidate = angle_candidate(prev_heading, curr_heading, cell, params_.th_theta_rad())) {
    offer_candidate(*candidate, field, tick);
  }
}

void FeatureLearner::offer_candidate(Cell candidate, const NeuralField& field, int tick) {
  if (!grid_.contains(candidate)) return;
  const std::size_t before_count = features_.size();
  Evaluated base = evaluate(activity_channel(features_, field), field);

  PassRecord rec;
  rec.tick = tick;
  rec.candidate = candidate;
  rec.ratio_before = base.rep.ratio;
  rec.world_changed = base.features.size() != before_count;
  const bool complete = base.rep.total > 0 && base.rep.represented == base.rep.total;

  if (!complete) {
    rec.kind = PassKind::Admission;
    if (field.activity(candidate) >= 0.0 && distance_channel(candidate, base.features, params_.th1, grid_)) {
      std::vector<FeatureNeuron> trial = base.features;
      trial.push_back({next_id_, candidate, {}, 0});
      Evaluated t = evaluate(secondary_fusion(std::move(trial), field, params_), field);
      if (t.rep.represented >= base.rep.represented) {
        ++next_id_;
        rec.committed = true;
        rec.ratio_after = t.rep.ratio;
        commit(std::move(t));
        log_.push_back(rec);
        return;
      }
    }
  } else {
    rec.kind = PassKind::Optimization;
    std::vector<FeatureNeuron> trial = base.features;
    const OptimizeResult r = optimize_feature(candidate, trial, field);
    if (r.replaced) {
      Evaluated t = evaluate(std::move(trial), field);
      if (t.rep.total > 0 && t.rep.represented == t.rep.total) {
        rec.committed = true;
        rec.ratio_after = t.rep.ratio;
        rec.mean_before = r.mean_before;
        rec.mean_after = r.mean_after;
        commit(std::move(t));
        log_.push_back(rec);
        return;
      }
    }
  }
  rec.ratio_after = base.rep.ratio;
  commit(std::move(base));
  log_.push_back(rec);
}

void FeatureLearner::refresh(const NeuralField& field, int tick) {
  const std::size_t before_count = features_.size();
  const double before_ratio = rep_.ratio;
  Evaluated e = evaluate(activity_channel(features_, field), field);
  PassRecord rec;
  rec.tick = tick;
  rec.kind = PassKind::Refresh;
  rec.ratio_before = before_ratio;
  rec.ratio_after = e.rep.ratio;
  rec.world_changed = e.features.size() != before_count;
  rec.committed = true;
  commit(std::move(e));
  if (rec.world_changed || rec.ratio_after != rec.ratio_before) log_.push_back(rec);
}

void FeatureLearner::load(std::vector<FeatureNeuron> features, const NeuralField& field) {
  for (const FeatureNeuron& f : features) next_id_ = std::max(next_id_, f.id + 1);
  commit(evaluate(std::move(features), field));
}

}  // namespace neurorescue
