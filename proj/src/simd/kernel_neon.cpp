// AArch64 Advanced SIMD variant (2 x f64 lanes).

#include <arm_neon.h>

#include <cstddef>

#include "neurorescue/simd/shunting_kernels.hpp"

namespace neurorescue::simd {

namespace {

constexpr int kLanes = 2;

// vmaxq_f64 returns NaN if either input is NaN, unlike x86 MAXPD. Use compare+select
// so that results match the scalar reference's (a > b ? a : b) exactly.
inline float64x2_t max_sel(float64x2_t a, float64x2_t b) { return vbslq_f64(vcgtq_f64(a, b), a, b); }
inline float64x2_t min_sel(float64x2_t a, float64x2_t b) { return vbslq_f64(vcltq_f64(a, b), a, b); }

void rectify_neon(const StepBuffers& buf, const ShuntingConstants& k) {
  const std::size_t ps = static_cast<std::size_t>(buf.width) + 2;
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t sigma = vdupq_n_f64(k.sigma);
  for (int y = 0; y < buf.height; ++y) {
    const double* z = buf.zeta + static_cast<std::size_t>(y) * buf.width;
    double* pos = buf.pos + (static_cast<std::size_t>(y) + 1) * ps + 1;
    double* neg = buf.neg + (static_cast<std::size_t>(y) + 1) * ps + 1;
    int x = 0;
    for (; x + kLanes <= buf.width; x += kLanes) {
      const float64x2_t zv = vld1q_f64(z + x);
      vst1q_f64(pos + x, max_sel(zv, zero));
      vst1q_f64(neg + x, max_sel(vsubq_f64(sigma, zv), zero));
    }
    detail::rectify_span(z + x, pos + x, neg + x, buf.width - x, k.sigma);
  }
}

inline float64x2_t sum4(const double* base, std::ptrdiff_t a, std::ptrdiff_t b, std::ptrdiff_t c, std::ptrdiff_t d) {
  return vaddq_f64(vaddq_f64(vaddq_f64(vld1q_f64(base + a), vld1q_f64(base + b)), vld1q_f64(base + c)),
                   vld1q_f64(base + d));
}

StepStats update_neon(const StepBuffers& buf, const ShuntingConstants& k) {
  StepStats stats;
  const std::ptrdiff_t ps = static_cast<std::ptrdiff_t>(buf.width) + 2;
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t neg_a = vdupq_n_f64(0.0 - k.A);
  const float64x2_t hi = vdupq_n_f64(k.B);
  const float64x2_t lo = vdupq_n_f64(-k.D);
  const float64x2_t dd = vdupq_n_f64(k.D);
  const float64x2_t dt = vdupq_n_f64(k.dt);
  const float64x2_t w_ax = vdupq_n_f64(k.w_axial);
  const float64x2_t w_dg = vdupq_n_f64(k.w_diag);
  const float64x2_t v_ax = vdupq_n_f64(k.v_axial);
  const float64x2_t v_dg = vdupq_n_f64(k.v_diag);
  float64x2_t max_delta = zero;
  uint64x2_t bad = vdupq_n_u64(0);

  for (int y = 0; y < buf.height; ++y) {
    const std::size_t base = static_cast<std::size_t>(y) * buf.width;
    int x = 0;
    for (; x + kLanes <= buf.width; x += kLanes) {
      const std::ptrdiff_t c = (static_cast<std::ptrdiff_t>(y) + 1) * ps + x + 1;
      const double* p = buf.pos + c;
      const double* q = buf.neg + c;
      const float64x2_t pax = sum4(p, -1, 1, -ps, ps);
      const float64x2_t pdg = sum4(p, -ps - 1, -ps + 1, ps - 1, ps + 1);
      const float64x2_t nax = sum4(q, -1, 1, -ps, ps);
      const float64x2_t ndg = sum4(q, -ps - 1, -ps + 1, ps - 1, ps + 1);

      const float64x2_t in = vld1q_f64(buf.input + base + x);
      const float64x2_t ip = max_sel(in, zero);
      const float64x2_t im = max_sel(vsubq_f64(zero, in), zero);
      const float64x2_t se = vaddq_f64(ip, vaddq_f64(vmulq_f64(w_ax, pax), vmulq_f64(w_dg, pdg)));
      const float64x2_t si = vaddq_f64(im, vaddq_f64(vmulq_f64(v_ax, nax), vmulq_f64(v_dg, ndg)));

      const float64x2_t z = vld1q_f64(buf.zeta + base + x);
      const float64x2_t growth = vaddq_f64(vmulq_f64(neg_a, z), vmulq_f64(vsubq_f64(hi, z), se));
      const float64x2_t dz = vsubq_f64(growth, vmulq_f64(vaddq_f64(dd, z), si));
      const float64x2_t raw = vaddq_f64(z, vmulq_f64(dt, dz));
      const float64x2_t diff = vsubq_f64(raw, raw);
      bad = vorrq_u64(bad, vreinterpretq_u64_u32(vmvnq_u32(vreinterpretq_u32_u64(vceqq_f64(diff, zero)))));
      const float64x2_t next = min_sel(hi, max_sel(lo, raw));
      vst1q_f64(buf.out + base + x, next);
      max_delta = max_sel(max_delta, vabsq_f64(vsubq_f64(next, z)));
    }
    detail::update_span(buf, k, y, x, buf.width, stats);
  }

  double lanes[kLanes];
  vst1q_f64(lanes, max_delta);
  for (double d : lanes) {
    if (d > stats.max_delta) stats.max_delta = d;
  }
  if ((vgetq_lane_u64(bad, 0) | vgetq_lane_u64(bad, 1)) != 0) stats.nonfinite = true;
  return stats;
}

}  // namespace

const KernelTable& neon_kernel() {
  static const KernelTable table{"neon", &rectify_neon, &update_neon};
  return table;
}

}  // namespace neurorescue::simd
