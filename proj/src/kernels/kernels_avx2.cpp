// Compiled with -mavx2 (no -mfma) when PRIONET_HAVE_AVX2 is defined.
#if defined(PRIONET_HAVE_AVX2)

#include <immintrin.h>

#include <cstddef>

#include "kernels_impl.hpp"

namespace prionet::kernels::detail {

void axpy_avx2(std::span<double> out, std::span<const double> x, double a,
               std::span<const double> k) {
  const std::size_t n = out.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(&k[j]));
    _mm256_storeu_pd(&out[j], _mm256_add_pd(_mm256_loadu_pd(&x[j]), prod));
  }
  for (; j < n; ++j) out[j] = x[j] + a * k[j];
}

void rk4_combine_avx2(std::span<double> out, std::span<const double> x, double w,
                      std::span<const double> k1, std::span<const double> k2,
                      std::span<const double> k3, std::span<const double> k4) {
  const std::size_t n = out.size();
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(&k1[j]), _mm256_mul_pd(two, _mm256_loadu_pd(&k2[j])));
    s = _mm256_add_pd(s, _mm256_mul_pd(two, _mm256_loadu_pd(&k3[j])));
    s = _mm256_add_pd(s, _mm256_loadu_pd(&k4[j]));
    _mm256_storeu_pd(&out[j], _mm256_add_pd(_mm256_loadu_pd(&x[j]), _mm256_mul_pd(vw, s)));
  }
  for (; j < n; ++j) {
    const double s = ((k1[j] + 2.0 * k2[j]) + 2.0 * k3[j]) + k4[j];
    out[j] = x[j] + w * s;
  }
}

double clamp_nonnegative_avx2(std::span<double> v) {
  const std::size_t n = v.size();
  const __m256d zero = _mm256_setzero_pd();
  __m256d worst = zero;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d e = _mm256_loadu_pd(&v[j]);
    const __m256d lt = _mm256_cmp_pd(e, zero, _CMP_LT_OQ);
    // negated values where e < 0, else 0
    worst = _mm256_max_pd(worst, _mm256_and_pd(lt, _mm256_sub_pd(zero, e)));
    // blend keeps -0.0 and NaN untouched, like the scalar loop
    _mm256_storeu_pd(&v[j], _mm256_blendv_pd(e, zero, lt));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, worst);
  double result = 0.0;
  for (double l : lanes) result = l > result ? l : result;
  for (; j < n; ++j) {
    if (v[j] < 0.0) {
      if (-v[j] > result) result = -v[j];
      v[j] = 0.0;
    }
  }
  return result;
}

void hermite_avx2(std::span<double> out, std::span<const double> y0, std::span<const double> y1,
                  std::span<const double> d0, std::span<const double> d1, double c00, double c10,
                  double c01, double c11) {
  const std::size_t n = out.size();
  const __m256d a = _mm256_set1_pd(c00);
  const __m256d b = _mm256_set1_pd(c10);
  const __m256d c = _mm256_set1_pd(c01);
  const __m256d e = _mm256_set1_pd(c11);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d s = _mm256_add_pd(_mm256_mul_pd(a, _mm256_loadu_pd(&y0[j])),
                              _mm256_mul_pd(b, _mm256_loadu_pd(&d0[j])));
    s = _mm256_add_pd(s, _mm256_mul_pd(c, _mm256_loadu_pd(&y1[j])));
    s = _mm256_add_pd(s, _mm256_mul_pd(e, _mm256_loadu_pd(&d1[j])));
    _mm256_storeu_pd(&out[j], s);
  }
  for (; j < n; ++j) out[j] = ((c00 * y0[j] + c10 * d0[j]) + c01 * y1[j]) + c11 * d1[j];
}

}  // namespace prionet::kernels::detail

#endif
