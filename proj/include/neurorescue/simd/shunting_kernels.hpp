#pragma once

// Data-parallel inner loops of the shunting field update. Each ISA variant must
// reproduce the scalar reference bit for bit: same operation order, no FMA.

#include <cstddef>
#include <optional>
#include <string_view>

namespace neurorescue::simd {

struct ShuntingConstants {
  double A;
  double B;
  double D;
  double sigma;
  double dt;
  double w_axial;  // excitatory lateral weight, |kl| = 1
  double w_diag;   // excitatory lateral weight, |kl| = sqrt(2)
  double v_axial;  // inhibitory lateral weight (beta * w)
  double v_diag;
};

/// Grid buffers for one synchronous Euler step. `pos`/`neg` are zero-padded by one
/// cell on every side (row stride = width + 2).
struct StepBuffers {
  const double* zeta;
  const double* input;
  double* pos;  // [zeta]^+
  double* neg;  // [zeta - sigma]^-
  double* out;
  int width;
  int height;
};

struct StepStats {
  double max_delta = 0.0;
  bool nonfinite = false;
};

struct KernelTable {
  std::string_view name;
  /// Fill the interior of `pos`/`neg` from `zeta`.
  void (*rectify)(const StepBuffers&, const ShuntingConstants&);
  /// Write the clamped next state to `out`; returns max |delta| and a non-finite flag
  /// computed before clamping.
  StepStats (*update)(const StepBuffers&, const ShuntingConstants&);
};

enum class Isa { Scalar, Avx2, Neon };

const KernelTable& scalar_kernel();
/// Null when the ISA is not compiled in or not supported by this CPU.
const KernelTable* kernel_for(Isa isa);
/// Best available kernel, unless overridden by force_kernel() or NEURORESCUE_KERNEL
/// (scalar|avx2|neon).
const KernelTable& active_kernel();
void force_kernel(std::optional<Isa> isa);

namespace detail {
// Scalar row primitives, reused by SIMD variants for row tails.
void rectify_span(const double* zeta, double* pos, double* neg, int n, double sigma);
void update_span(const StepBuffers& buf, const ShuntingConstants& k, int row, int x_begin, int x_end,
                 StepStats& stats);
}  // namespace detail

}  // namespace neurorescue::simd
