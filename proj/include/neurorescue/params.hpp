#pragma once

#include <cmath>
#include <numbers>

namespace neurorescue {

/// Constants of the shunting neurodynamics. Defaults are the published simulation settings
/// except the integrator constants, which the model leaves free.
struct ShuntingParams {
  double A = 5.0;       // passive decay rate
  double B = 1.0;       // activity upper bound
  double D = 1.0;       // activity lower-bound magnitude
  double mu = 1.0;      // lateral weight scale
  double E = 70.0;      // external input magnitude
  double sigma = -0.5;  // inhibitory propagation threshold
  double beta = 1.0;    // inhibitory weight fraction
  double r0 = std::numbers::sqrt2;  // receptive field radius, cells
  double dt_neural = 0.005;
  int relax_iters = 25;
  double tol = 1e-6;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
  /// dt * (A + E + 8 mu max(B, D)); must stay below 1 for explicit Euler.
  double stability_number() const;
};

struct FeatureParams {
  double th_theta_deg = 30.0;
  double th1 = 3.0;  // meters
  double th2 = 5.0;  // meters
  int fusion_min_degree = 3;  // N_D membership needs degree > this

  void validate() const;
  double th_theta_rad() const { return th_theta_deg * std::numbers::pi / 180.0; }
};

struct MotionParams {
  double v = 1.0;       // m/tick along heuristic paths
  double dt_sim = 1.0;  // ticks per step

  void validate() const;
};

struct Params {
  ShuntingParams shunting;
  FeatureParams features;
  MotionParams motion;

  void validate() const {
    shunting.validate();
    features.validate();
    motion.validate();
  }
};

}  // namespace neurorescue
