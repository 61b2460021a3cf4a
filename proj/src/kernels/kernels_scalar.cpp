#include <cstddef>

#include "kernels_impl.hpp"

namespace prionet::kernels::detail {

void axpy_scalar(std::span<double> out, std::span<const double> x, double a,
                 std::span<const double> k) {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = x[j] + a * k[j];
}

void rk4_combine_scalar(std::span<double> out, std::span<const double> x, double w,
                        std::span<const double> k1, std::span<const double> k2,
                        std::span<const double> k3, std::span<const double> k4) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double s = ((k1[j] + 2.0 * k2[j]) + 2.0 * k3[j]) + k4[j];
    out[j] = x[j] + w * s;
  }
}

double clamp_nonnegative_scalar(std::span<double> v) {
  double worst = 0.0;
  for (double& e : v) {
    if (e < 0.0) {
      if (-e > worst) worst = -e;
      e = 0.0;
    }
  }
  return worst;
}

void hermite_scalar(std::span<double> out, std::span<const double> y0, std::span<const double> y1,
                    std::span<const double> d0, std::span<const double> d1, double c00, double c10,
                    double c01, double c11) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = ((c00 * y0[j] + c10 * d0[j]) + c01 * y1[j]) + c11 * d1[j];
  }
}

}  // namespace prionet::kernels::detail
