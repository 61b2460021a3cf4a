#pragma once

// Vector-update kernels used by the integrator. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant selected at
// runtime. Variants use the same operation order and no FMA, so results
// are bit-identical across implementations.

#include <span>
#include <string_view>

namespace prionet::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  /// out = x + a * k
  void (*axpy)(std::span<double> out, std::span<const double> x, double a,
               std::span<const double> k);
  /// out = x + w * (((k1 + 2 k2) + 2 k3) + k4)
  void (*rk4_combine)(std::span<double> out, std::span<const double> x, double w,
                      std::span<const double> k1, std::span<const double> k2,
                      std::span<const double> k3, std::span<const double> k4);
  /// Replace negative entries by 0; returns the largest clamped magnitude.
  double (*clamp_nonnegative)(std::span<double> v);
  /// out = c00 y0 + c10 d0 + c01 y1 + c11 d1 (Hermite basis weights precomputed).
  void (*hermite)(std::span<double> out, std::span<const double> y0, std::span<const double> y1,
                  std::span<const double> d0, std::span<const double> d1, double c00, double c10,
                  double c01, double c11);
};

const KernelTable& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Best supported table; `PRIONET_SIMD=scalar` forces the reference path.
const KernelTable& active();

std::string_view isa_name(Isa isa);

}  // namespace prionet::kernels
