#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "neurorescue/feature_learning.hpp"

using namespace neurorescue;

namespace {

FeatureNeuron feature(int id, Cell c) { return {id, c, {}, 0}; }

bool has_cell(const std::vector<FeatureNeuron>& fs, Cell c) {
  for (const FeatureNeuron& f : fs) {
    if (f.cell == c) return true;
  }
  return false;
}

// Brute force: cell c is represented iff some feature with a clear link exists.
std::size_t reachable_cells(const std::vector<FeatureNeuron>& fs, const NeuralField& field) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < field.grid().cell_count(); ++i) {
    const Cell c = field.grid().cell_at(i);
    if (field.activity(c) < 0.0) continue;
    for (const FeatureNeuron& f : fs) {
      if (collision_free_link(f.cell, c, field)) {
        ++n;
        break;
      }
    }
  }
  return n;
}

}  // namespace

TEST_SUITE("feature_learning") {
  TEST_CASE("turning-angle filter") {
    const double th = 30.0 * std::numbers::pi / 180.0;
    CHECK_FALSE(angle_candidate(0.3, 0.3, {1, 1}, th).has_value());
    CHECK(angle_candidate(0.0, std::numbers::pi / 4, {1, 1}, th) == Cell{1, 1});
    CHECK_FALSE(angle_candidate(0.0, 350.0 * std::numbers::pi / 180.0, {1, 1}, th).has_value());
    CHECK(angle_candidate(std::numbers::pi, -3.0 * std::numbers::pi / 4, {2, 3}, th) == Cell{2, 3});
  }

  TEST_CASE("distance channel") {
    const GridSpec grid{20, 20, 1.0};
    CHECK(distance_channel({5, 5}, {}, 3.0, grid));
    CHECK_FALSE(distance_channel({5, 5}, {feature(1, {7, 5})}, 3.0, grid));
    CHECK(distance_channel({5, 5}, {feature(1, {9, 5})}, 3.0, grid));
    CHECK_FALSE(distance_channel({5, 5}, {feature(1, {9, 5}), feature(2, {5, 8})}, 3.0, grid));
  }

  TEST_CASE("activity channel drops features on negative cells") {
    NeuralField f(GridSpec{10, 10, 1.0});
    const std::vector<FeatureNeuron> fs{feature(1, {1, 1}), feature(2, {5, 5}), feature(3, {8, 2})};
    CHECK(activity_channel(fs, f).size() == 3);
    f.set_activity({5, 5}, -0.2);
    const auto pruned = activity_channel(fs, f);
    CHECK(pruned.size() == 2);
    CHECK_FALSE(has_cell(pruned, {5, 5}));
    f.set_activity({5, 5}, 0.1);
    CHECK(activity_channel(fs, f).size() == 3);
  }

  TEST_CASE("link checks") {
    NeuralField f(GridSpec{10, 10, 1.0});
    CHECK(collision_free_link({3, 3}, {3, 3}, f));
    CHECK(collision_free_link({0, 0}, {9, 6}, f));
    f.set_activity({4, 4}, -0.6);
    CHECK_FALSE(collision_free_link({0, 4}, {9, 4}, f));
    CHECK_FALSE(collision_free_link({3, 3}, {-1, 3}, f));
  }

  TEST_CASE("a halo cell touched only at a corner breaks the link") {
    NeuralField f(GridSpec{6, 6, 1.0});
    f.set_activity({1, 0}, -0.5);
    // The diagonal passes exactly through the shared corner of (0,0), (1,0), (0,1), (1,1).
    CHECK_FALSE(collision_free_link({0, 0}, {2, 2}, f));
    CHECK(collision_free_link({0, 1}, {2, 3}, f));
  }

  TEST_CASE("secondary fusion on a fully connected star") {
    NeuralField f(GridSpec{20, 20, 1.0});
    FeatureParams p;
    std::vector<FeatureNeuron> fs{feature(1, {5, 5}), feature(2, {15, 15}), feature(3, {5, 15}),
                                  feature(4, {15, 5}), feature(5, {8, 5})};
    const auto fused = secondary_fusion(fs, f, p);
    CHECK(fused.size() == 4);
    CHECK(has_cell(fused, {5, 5}));
    CHECK_FALSE(has_cell(fused, {8, 5}));

    std::vector<FeatureNeuron> spread{feature(1, {2, 2}), feature(2, {12, 2}), feature(3, {2, 12}),
                                      feature(4, {12, 12}), feature(5, {7, 7})};
    CHECK(secondary_fusion(spread, f, p).size() == 5);
  }

  TEST_CASE("a close pair separated by an obstacle is kept") {
    NeuralField f(GridSpec{20, 20, 1.0});
    for (int y = 3; y <= 7; ++y) {
      f.set_activity({6, y}, -0.5);
      f.set_activity({7, y}, -0.5);
    }
    std::vector<FeatureNeuron> fs{feature(1, {5, 5}), feature(2, {15, 15}), feature(3, {5, 15}),
                                  feature(4, {15, 5}), feature(5, {8, 5})};
    CHECK(secondary_fusion(fs, f, FeatureParams{}).size() == 5);
  }

  TEST_CASE("representativeness examples") {
    NeuralField f(GridSpec{10, 10, 1.0});
    std::vector<FeatureNeuron> none;
    const Representativeness empty = representativeness(none, f);
    CHECK(empty.ratio == 0.0);
    CHECK(empty.total == 100);

    std::vector<FeatureNeuron> one{feature(1, {5, 5})};
    const Representativeness r = representativeness(one, f);
    CHECK(r.ratio == 1.0);
    CHECK(one[0].represented.size() == 100);

    NeuralField blocked(GridSpec{2, 1, 1.0});
    for (double& z : blocked.activities()) z = -1.0;
    CHECK_THROWS_AS(representativeness(one, blocked), std::domain_error);
  }

  TEST_CASE("representativeness agrees with a brute-force count") {
    testgen::Gen g(31);
    for (int trial = 0; trial < 60; ++trial) {
      const GridSpec grid = g.grid(4, 14);
      const NeuralField f = g.walled_field(grid, g.integer(0, 4));
      std::vector<FeatureNeuron> fs;
      const int k = g.integer(0, 5);
      for (int i = 0; i < k; ++i) fs.push_back(feature(i + 1, g.cell(grid)));
      std::vector<FeatureNeuron> copy = fs;
      try {
        const Representativeness r = representativeness(copy, f);
        CHECK(r.represented == reachable_cells(fs, f));
        std::size_t clusters = 0;
        for (const FeatureNeuron& x : copy) clusters += x.represented.size();
        CHECK(clusters == r.represented);
      } catch (const std::domain_error&) {
        CHECK(reachable_cells(fs, f) == 0);
      }
    }
  }

  TEST_CASE("feature matrix examples") {
    NeuralField f(GridSpec{12, 12, 1.2});
    std::vector<FeatureNeuron> pair{feature(1, {1, 1}), feature(2, {7, 1})};
    const FeatureMatrix m = update_feature_matrix(pair, f);
    CHECK(m.size == 2);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.at(0, 1) == doctest::Approx(7.2));
    CHECK(m.at(1, 0) == m.at(0, 1));
    CHECK(pair[0].degree == 1);

    for (int y = 0; y < 12; ++y) f.set_activity({4, y}, -0.5);
    const FeatureMatrix walled = update_feature_matrix(pair, f);
    CHECK(walled.at(0, 1) == 0.0);
    CHECK(walled.at(1, 0) == 0.0);
    CHECK(pair[1].degree == 0);

    std::vector<FeatureNeuron> single{feature(1, {3, 3})};
    const FeatureMatrix s = update_feature_matrix(single, f);
    CHECK(s.size == 1);
    CHECK(s.values == std::vector<double>{0.0});
  }

  TEST_CASE("matrix is symmetric with a zero diagonal on random fields") {
    testgen::Gen g(37);
    for (int trial = 0; trial < 100; ++trial) {
      const GridSpec grid = g.grid(3, 16);
      const NeuralField f = g.walled_field(grid, g.integer(0, 5));
      std::vector<FeatureNeuron> fs;
      for (int i = g.integer(0, 8); i > 0; --i) fs.push_back(feature(i, g.cell(grid)));
      const FeatureMatrix m = update_feature_matrix(fs, f);
      for (int a = 0; a < m.size; ++a) {
        CHECK(m.at(a, a) == 0.0);
        for (int b = 0; b < m.size; ++b) {
          CHECK(m.at(a, b) == m.at(b, a));
          if (a != b && fs[a].cell != fs[b].cell) {
            CHECK((m.at(a, b) > 0.0) == collision_free_link(fs[a].cell, fs[b].cell, f));
          }
        }
      }
    }
  }

  TEST_CASE("optimization examples") {
    NeuralField f(GridSpec{5, 5, 1.0});
    std::vector<FeatureNeuron> fs{feature(1, {0, 0})};
    representativeness(fs, f);

    std::vector<FeatureNeuron> same = fs;
    CHECK_FALSE(optimize_feature({0, 0}, same, f).replaced);

    std::vector<FeatureNeuron> moved = fs;
    const OptimizeResult r = optimize_feature({2, 2}, moved, f);
    CHECK(r.replaced);
    CHECK(r.replaced_id == 1);
    CHECK(moved[0].cell == Cell{2, 2});
    double before = 0.0, after = 0.0;
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 5; ++x) {
        before += std::hypot(x, y);
        after += std::hypot(x - 2, y - 2);
      }
    }
    CHECK(r.mean_before == doctest::Approx(before / 25.0));
    CHECK(r.mean_after == doctest::Approx(after / 25.0));

    NeuralField walled(GridSpec{7, 7, 1.0});
    walled.set_activity({3, 3}, -0.5);
    std::vector<FeatureNeuron> w{feature(1, {0, 0})};
    representativeness(w, walled);
    CHECK_FALSE(optimize_feature({6, 6}, w, walled).replaced);
    CHECK(w[0].cell == Cell{0, 0});
  }

  TEST_CASE("learner never loses coverage on a static field") {
    testgen::Gen g(41);
    for (int trial = 0; trial < 40; ++trial) {
      const GridSpec grid = g.grid(6, 18);
      const NeuralField f = g.walled_field(grid, g.integer(0, 4));
      FeatureLearner learner(grid, FeatureParams{});
      std::size_t represented = 0;
      for (int step = 0; step < 120; ++step) {
        learner.offer_candidate(g.cell(grid), f, step);
        const auto& rec = learner.log().back();
        CHECK(learner.representativeness().represented >= represented);
        CHECK(rec.ratio_after >= rec.ratio_before);
        if (rec.kind == FeatureLearner::PassKind::Optimization && rec.committed) {
          REQUIRE(rec.mean_before.has_value());
          CHECK(*rec.mean_after < *rec.mean_before);
          CHECK(learner.complete());
        }
        represented = learner.representativeness().represented;
        for (std::size_t a = 0; a < learner.features().size(); ++a) {
          CHECK(f.activity(learner.features()[a].cell) >= 0.0);
        }
      }
    }
  }
}
