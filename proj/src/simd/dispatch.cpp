#include <atomic>
#include <cstdlib>
#include <string_view>

#include "neurorescue/simd/shunting_kernels.hpp"

namespace neurorescue::simd {

#if defined(NEURORESCUE_HAVE_AVX2)
const KernelTable& avx2_kernel();
#endif
#if defined(NEURORESCUE_HAVE_NEON)
const KernelTable& neon_kernel();
#endif

namespace {

std::atomic<const KernelTable*> g_forced{nullptr};

const KernelTable& detect() {
  if (const char* env = std::getenv("NEURORESCUE_KERNEL")) {
    const std::string_view want(env);
    if (want == "scalar") return scalar_kernel();
    if (want == "avx2" && kernel_for(Isa::Avx2)) return *kernel_for(Isa::Avx2);
    if (want == "neon" && kernel_for(Isa::Neon)) return *kernel_for(Isa::Neon);
  }
  if (const KernelTable* k = kernel_for(Isa::Avx2)) return *k;
  if (const KernelTable* k = kernel_for(Isa::Neon)) return *k;
  return scalar_kernel();
}

}  // namespace

const KernelTable* kernel_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &scalar_kernel();
    case Isa::Avx2:
#if defined(NEURORESCUE_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2")) return &avx2_kernel();
#endif
      return nullptr;
    case Isa::Neon:
#if defined(NEURORESCUE_HAVE_NEON)
      return &neon_kernel();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active_kernel() {
  if (const KernelTable* forced = g_forced.load(std::memory_order_acquire)) return *forced;
  static const KernelTable& detected = detect();
  return detected;
}

void force_kernel(std::optional<Isa> isa) {
  g_forced.store(isa ? kernel_for(*isa) : nullptr, std::memory_order_release);
}

}  // namespace neurorescue::simd
