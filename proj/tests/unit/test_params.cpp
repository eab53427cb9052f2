#include "doctest.h"
#include "generators.hpp"
#include "neurorescue/errors.hpp"
#include "neurorescue/params.hpp"

using namespace neurorescue;

namespace {

ValidationError::Kind kind_of(const ShuntingParams& p) {
  try {
    p.validate();
  } catch (const ValidationError& e) {
    return e.kind();
  }
  FAIL("expected a validation error");
  return ValidationError::Kind::Schema;
}

}  // namespace

TEST_SUITE("params") {
  TEST_CASE("defaults are valid and stable") {
    ShuntingParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.A == 5.0);
    CHECK(p.B == 1.0);
    CHECK(p.D == 1.0);
    CHECK(p.mu == 1.0);
    CHECK(p.E == 70.0);
    CHECK(p.sigma == -0.5);
    CHECK(p.stability_number() == doctest::Approx(0.005 * (5 + 70 + 8)));
    CHECK_NOTHROW(FeatureParams{}.validate());
    CHECK_NOTHROW(MotionParams{}.validate());
  }

  TEST_CASE("each invariant is enforced") {
    auto broken = [](auto mutate) {
      ShuntingParams p;
      mutate(p);
      return kind_of(p);
    };
    CHECK(broken([](ShuntingParams& p) { p.A = 0.0; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.B = -1.0; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.D = 0.0; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.mu = 0.0; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.E = -3.0; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.sigma = 0.0; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.beta = 1.5; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.r0 = 0.5; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.dt_neural = 0.02; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.relax_iters = 0; }) == ValidationError::Kind::Parameter);
    CHECK(broken([](ShuntingParams& p) { p.A = std::nan(""); }) == ValidationError::Kind::Parameter);
  }

  TEST_CASE("large mu is accepted while the Euler step stays stable") {
    ShuntingParams p;
    p.mu = 5.0;
    CHECK_NOTHROW(p.validate());
    p.mu = 20.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }

  TEST_CASE("generated parameter sets always validate") {
    testgen::Gen g(3);
    for (int i = 0; i < 500; ++i) CHECK_NOTHROW(g.shunting().validate());
  }

  TEST_CASE("feature and motion parameters") {
    FeatureParams f;
    CHECK(f.th_theta_rad() == doctest::Approx(0.5235987756));
    f.th1 = -1.0;
    CHECK_THROWS_AS(f.validate(), ValidationError);
    MotionParams m;
    m.v = 0.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);
  }
}
