// Compiled with -mavx2 only; selected at runtime after a CPUID check.

#include <immintrin.h>

#include <cstddef>

#include "neurorescue/simd/shunting_kernels.hpp"

namespace neurorescue::simd {

namespace {

constexpr int kLanes = 4;

void rectify_avx2(const StepBuffers& buf, const ShuntingConstants& k) {
  const std::size_t ps = static_cast<std::size_t>(buf.width) + 2;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d sigma = _mm256_set1_pd(k.sigma);
  for (int y = 0; y < buf.height; ++y) {
    const double* z = buf.zeta + static_cast<std::size_t>(y) * buf.width;
    double* pos = buf.pos + (static_cast<std::size_t>(y) + 1) * ps + 1;
    double* neg = buf.neg + (static_cast<std::size_t>(y) + 1) * ps + 1;
    int x = 0;
    for (; x + kLanes <= buf.width; x += kLanes) {
      const __m256d zv = _mm256_loadu_pd(z + x);
      _mm256_storeu_pd(pos + x, _mm256_max_pd(zv, zero));
      _mm256_storeu_pd(neg + x, _mm256_max_pd(_mm256_sub_pd(sigma, zv), zero));
    }
    detail::rectify_span(z + x, pos + x, neg + x, buf.width - x, k.sigma);
  }
}

inline __m256d sum4(const double* base, std::ptrdiff_t a, std::ptrdiff_t b, std::ptrdiff_t c, std::ptrdiff_t d) {
  return _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(base + a), _mm256_loadu_pd(base + b)),
                                     _mm256_loadu_pd(base + c)),
                       _mm256_loadu_pd(base + d));
}

StepStats update_avx2(const StepBuffers& buf, const ShuntingConstants& k) {
  StepStats stats;
  const std::ptrdiff_t ps = static_cast<std::ptrdiff_t>(buf.width) + 2;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d neg_a = _mm256_set1_pd(0.0 - k.A);
  const __m256d hi = _mm256_set1_pd(k.B);
  const __m256d lo = _mm256_set1_pd(-k.D);
  const __m256d dd = _mm256_set1_pd(k.D);
  const __m256d dt = _mm256_set1_pd(k.dt);
  const __m256d w_ax = _mm256_set1_pd(k.w_axial);
  const __m256d w_dg = _mm256_set1_pd(k.w_diag);
  const __m256d v_ax = _mm256_set1_pd(k.v_axial);
  const __m256d v_dg = _mm256_set1_pd(k.v_diag);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d max_delta = zero;
  __m256d bad = zero;

  for (int y = 0; y < buf.height; ++y) {
    const std::size_t base = static_cast<std::size_t>(y) * buf.width;
    int x = 0;
    for (; x + kLanes <= buf.width; x += kLanes) {
      const std::ptrdiff_t c = (static_cast<std::ptrdiff_t>(y) + 1) * ps + x + 1;
      const double* p = buf.pos + c;
      const double* q = buf.neg + c;
      const __m256d pax = sum4(p, -1, 1, -ps, ps);
      const __m256d pdg = sum4(p, -ps - 1, -ps + 1, ps - 1, ps + 1);
      const __m256d nax = sum4(q, -1, 1, -ps, ps);
      const __m256d ndg = sum4(q, -ps - 1, -ps + 1, ps - 1, ps + 1);

      const __m256d in = _mm256_loadu_pd(buf.input + base + x);
      const __m256d ip = _mm256_max_pd(in, zero);
      const __m256d im = _mm256_max_pd(_mm256_sub_pd(zero, in), zero);
      const __m256d se = _mm256_add_pd(ip, _mm256_add_pd(_mm256_mul_pd(w_ax, pax), _mm256_mul_pd(w_dg, pdg)));
      const __m256d si = _mm256_add_pd(im, _mm256_add_pd(_mm256_mul_pd(v_ax, nax), _mm256_mul_pd(v_dg, ndg)));

      const __m256d z = _mm256_loadu_pd(buf.zeta + base + x);
      const __m256d growth = _mm256_add_pd(_mm256_mul_pd(neg_a, z), _mm256_mul_pd(_mm256_sub_pd(hi, z), se));
      const __m256d dz = _mm256_sub_pd(growth, _mm256_mul_pd(_mm256_add_pd(dd, z), si));
      const __m256d raw = _mm256_add_pd(z, _mm256_mul_pd(dt, dz));
      bad = _mm256_or_pd(bad, _mm256_cmp_pd(_mm256_sub_pd(raw, raw), zero, _CMP_NEQ_UQ));
      const __m256d next = _mm256_min_pd(hi, _mm256_max_pd(lo, raw));
      _mm256_storeu_pd(buf.out + base + x, next);
      max_delta = _mm256_max_pd(max_delta, _mm256_and_pd(_mm256_sub_pd(next, z), abs_mask));
    }
    detail::update_span(buf, k, y, x, buf.width, stats);
  }

  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, max_delta);
  for (double d : lanes) {
    if (d > stats.max_delta) stats.max_delta = d;
  }
  if (_mm256_movemask_pd(bad) != 0) stats.nonfinite = true;
  return stats;
}

}  // namespace

const KernelTable& avx2_kernel() {
  static const KernelTable table{"avx2", &rectify_avx2, &update_avx2};
  return table;
}

}  // namespace neurorescue::simd
