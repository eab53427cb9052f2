#include "neurorescue/params.hpp"

#include <algorithm>
#include <string>

#include "neurorescue/errors.hpp"

namespace neurorescue {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(ValidationError::Kind::Parameter, what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

double ShuntingParams::stability_number() const {
  return dt_neural * (A + E + 8.0 * mu * std::max(B, D));
}

void ShuntingParams::validate() const {
  require(finite(A) && A > 0.0, "A must be > 0");
  require(finite(B) && B > 0.0, "B must be > 0");
  require(finite(D) && D > 0.0, "D must be > 0");
  require(finite(mu) && mu > 0.0, "mu must be > 0");
  require(finite(E) && E > 0.0, "E must be > 0");
  require(finite(sigma) && sigma < 0.0, "sigma must be < 0");
  require(finite(beta) && beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
  require(finite(r0) && r0 >= 1.0, "r0 must be >= 1");
  require(finite(dt_neural) && dt_neural > 0.0, "dt_neural must be > 0");
  require(relax_iters >= 1, "relax_iters must be >= 1");
  require(finite(tol) && tol >= 0.0, "tol must be >= 0");
  require(stability_number() < 1.0, "dt_neural * (A + E + 8 mu max(B, D)) must be < 1");
}

void FeatureParams::validate() const {
  require(finite(th_theta_deg) && th_theta_deg >= 0.0 && th_theta_deg < 180.0, "th_theta_deg must lie in [0, 180)");
  require(finite(th1) && th1 >= 0.0, "th1 must be >= 0");
  require(finite(th2) && th2 >= 0.0, "th2 must be >= 0");
  require(fusion_min_degree >= 0, "fusion_min_degree must be >= 0");
}

void MotionParams::validate() const {
  require(finite(v) && v > 0.0, "v must be > 0");
  require(finite(dt_sim) && dt_sim > 0.0, "dt_sim must be > 0");
}

}  // namespace neurorescue
