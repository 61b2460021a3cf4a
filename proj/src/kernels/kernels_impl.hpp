#pragma once

#include <span>

namespace prionet::kernels::detail {

void axpy_scalar(std::span<double> out, std::span<const double> x, double a,
                 std::span<const double> k);
void rk4_combine_scalar(std::span<double> out, std::span<const double> x, double w,
                        std::span<const double> k1, std::span<const double> k2,
                        std::span<const double> k3, std::span<const double> k4);
double clamp_nonnegative_scalar(std::span<double> v);
void hermite_scalar(std::span<double> out, std::span<const double> y0, std::span<const double> y1,
                    std::span<const double> d0, std::span<const double> d1, double c00, double c10,
                    double c01, double c11);

#if defined(PRIONET_HAVE_AVX2)
void axpy_avx2(std::span<double> out, std::span<const double> x, double a,
               std::span<const double> k);
void rk4_combine_avx2(std::span<double> out, std::span<const double> x, double w,
                      std::span<const double> k1, std::span<const double> k2,
                      std::span<const double> k3, std::span<const double> k4);
double clamp_nonnegative_avx2(std::span<double> v);
void hermite_avx2(std::span<double> out, std::span<const double> y0, std::span<const double> y1,
                  std::span<const double> d0, std::span<const double> d1, double c00, double c10,
                  double c01, double c11);
#endif

}  // namespace prionet::kernels::detail
