#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <string_view>

#include "prionet/kernels.hpp"

using namespace prionet::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t len, bool specials) {
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::vector<double> v(len);
  for (auto& e : v) e = u(rng);
  if (specials && len >= 4) {
    v[0] = -0.0;
    v[1] = std::numeric_limits<double>::quiet_NaN();
    v[2] = -1e-300;
    v[len - 1] = std::numeric_limits<double>::infinity();
  }
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels") {
  const auto& k = scalar_kernels();
  CHECK(k.isa == Isa::scalar);
  std::vector<double> out(3);
  k.axpy(out, std::vector<double>{1, 2, 3}, 2.0, std::vector<double>{1, 1, -1});
  CHECK(out == std::vector<double>{3, 4, 1});
  k.rk4_combine(out, std::vector<double>{0, 0, 0}, 1.0, std::vector<double>{1, 1, 1}, std::vector<double>{1, 1, 1},
                std::vector<double>{1, 1, 1}, std::vector<double>{1, 1, 1});
  CHECK(out == std::vector<double>{6, 6, 6});
  std::vector<double> v = {1.0, -2.0, 0.5, -1e-3};
  CHECK(k.clamp_nonnegative(v) == 2.0);
  CHECK(v == std::vector<double>{1.0, 0.0, 0.5, 0.0});
  CHECK(isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("environment override selects the scalar kernels") {
  const char* env = std::getenv("PRIONET_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") {
    CHECK(active().isa == Isa::scalar);
  } else if (avx2_kernels() != nullptr) {
    CHECK(active().isa == Isa::avx2);
  }
}

TEST_CASE("vector kernels match the scalar reference bit for bit") {
  const KernelTable* wide = avx2_kernels();
  if (wide == nullptr) {
    MESSAGE("AVX2 not available; nothing to compare");
    return;
  }
  const auto& ref = scalar_kernels();
  std::mt19937_64 rng(31);
  for (std::size_t len = 0; len < 40; ++len) {
    for (bool specials : {false, true}) {
      const auto x = random_vector(rng, len, specials);
      const auto k1 = random_vector(rng, len, false), k2 = random_vector(rng, len, false);
      const auto k3 = random_vector(rng, len, false), k4 = random_vector(rng, len, specials);

      std::vector<double> a(len), b(len);
      ref.axpy(a, x, 0.37, k1);
      wide->axpy(b, x, 0.37, k1);
      CHECK(bit_equal(a, b));

      ref.rk4_combine(a, x, 0.0125, k1, k2, k3, k4);
      wide->rk4_combine(b, x, 0.0125, k1, k2, k3, k4);
      CHECK(bit_equal(a, b));

      ref.hermite(a, x, k1, k2, k3, 0.15625, 0.0021, 0.84375, -0.0013);
      wide->hermite(b, x, k1, k2, k3, 0.15625, 0.0021, 0.84375, -0.0013);
      CHECK(bit_equal(a, b));

      a = x;
      b = x;
      const double ca = ref.clamp_nonnegative(a);
      const double cb = wide->clamp_nonnegative(b);
      CHECK(std::memcmp(&ca, &cb, sizeof ca) == 0);
      CHECK(bit_equal(a, b));
    }
  }
}

TEST_CASE("kernels accept aliased output") {
  for (const auto* t : {&scalar_kernels(), avx2_kernels()}) {
    if (t == nullptr) continue;
    std::vector<double> s(9, 1.0), k(9, 2.0);
    t->rk4_combine(s, s, 0.5, k, k, k, k);
    for (double v : s) CHECK(v == 7.0);
  }
}
