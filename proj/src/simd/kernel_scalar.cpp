#include <cmath>
#include <cstddef>

#include "neurorescue/simd/shunting_kernels.hpp"

namespace neurorescue::simd {

namespace detail {

void rectify_span(const double* zeta, double* pos, double* neg, int n, double sigma) {
  for (int i = 0; i < n; ++i) {
    const double z = zeta[i];
    const double s = sigma - z;
    pos[i] = z > 0.0 ? z : 0.0;
    neg[i] = s > 0.0 ? s : 0.0;
  }
}

void update_span(const StepBuffers& buf, const ShuntingConstants& k, int row, int x_begin, int x_end,
                 StepStats& stats) {
  const std::size_t ps = static_cast<std::size_t>(buf.width) + 2;
  const std::size_t base = static_cast<std::size_t>(row) * buf.width;
  const double lo = -k.D, hi = k.B;
  for (int x = x_begin; x < x_end; ++x) {
    const std::size_t c = (static_cast<std::size_t>(row) + 1) * ps + static_cast<std::size_t>(x) + 1;
    const double* p = buf.pos;
    const double* q = buf.neg;
    const double pax = ((p[c - 1] + p[c + 1]) + p[c - ps]) + p[c + ps];
    const double pdg = ((p[c - ps - 1] + p[c - ps + 1]) + p[c + ps - 1]) + p[c + ps + 1];
    const double nax = ((q[c - 1] + q[c + 1]) + q[c - ps]) + q[c + ps];
    const double ndg = ((q[c - ps - 1] + q[c - ps + 1]) + q[c + ps - 1]) + q[c + ps + 1];

    const double in = buf.input[base + x];
    const double neg_in = 0.0 - in;
    const double ip = in > 0.0 ? in : 0.0;
    const double im = neg_in > 0.0 ? neg_in : 0.0;
    const double se = ip + (k.w_axial * pax + k.w_diag * pdg);
    const double si = im + (k.v_axial * nax + k.v_diag * ndg);

    const double z = buf.zeta[base + x];
    const double dz = ((0.0 - k.A) * z + (hi - z) * se) - (k.D + z) * si;
    const double raw = z + k.dt * dz;
    if (!(raw - raw == 0.0)) stats.nonfinite = true;
    const double t = lo > raw ? lo : raw;
    const double next = hi < t ? hi : t;
    buf.out[base + x] = next;
    const double d = std::fabs(next - z);
    if (d > stats.max_delta) stats.max_delta = d;
  }
}

}  // namespace detail

namespace {

void rectify_scalar(const StepBuffers& buf, const ShuntingConstants& k) {
  const std::size_t ps = static_cast<std::size_t>(buf.width) + 2;
  for (int y = 0; y < buf.height; ++y) {
    const std::size_t row = (static_cast<std::size_t>(y) + 1) * ps + 1;
    detail::rectify_span(buf.zeta + static_cast<std::size_t>(y) * buf.width, buf.pos + row, buf.neg + row,
                         buf.width, k.sigma);
  }
}

StepStats update_scalar(const StepBuffers& buf, const ShuntingConstants& k) {
  StepStats stats;
  for (int y = 0; y < buf.height; ++y) detail::update_span(buf, k, y, 0, buf.width, stats);
  return stats;
}

}  // namespace

const KernelTable& scalar_kernel() {
  static const KernelTable table{"scalar", &rectify_scalar, &update_scalar};
  return table;
}

}  // namespace neurorescue::simd
