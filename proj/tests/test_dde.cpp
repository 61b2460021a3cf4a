#include <doctest.h>

#include <cmath>

#include "prionet/config.hpp"
#include "prionet/dde.hpp"
#include "prionet/errors.hpp"
#include "prionet/kernels.hpp"

using namespace prionet;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("default step") {
  CHECK(default_step(preset("fig3").model) == doctest::Approx(0.0085).epsilon(1e-14));
  CHECK(default_step(preset("fig7").model) == doctest::Approx(0.0075).epsilon(1e-14));
  const NetworkModel undelayed({{1, 1, 0, 1}}, {}, 0.1, {2, 1});
  CHECK(default_step(undelayed) == 1e-2);
}

TEST_CASE("grid ends exactly at the horizon") {
  const auto p = preset("fig3");
  const auto traj = integrate(p.model, p.initial, 1.0);
  CHECK(traj.times().front() == 0.0);
  CHECK(traj.horizon() == 1.0);
  CHECK(traj.step() <= default_step(p.model));
  CHECK(traj.node_count() == 119);
  for (std::size_t k = 1; k < traj.node_count(); ++k) CHECK(traj.time(k) > traj.time(k - 1));
}

TEST_CASE("disease-free start stays at the equilibrium") {
  for (const auto& name : preset_names()) {
    const auto m = preset(name).model;
    const InitialData init = InitialData::standard(m, 0.0);
    const auto traj = integrate(m, init, 5.0);
    const auto eq = dfe(m);
    for (std::size_t k = 0; k < traj.node_count(); k += 37) CHECK(max_abs_diff(traj.state(k), eq) < 1e-9);
    CHECK(max_abs_diff(traj.sample(2.3456), eq) < 1e-9);
  }
}

TEST_CASE("history lookup") {
  const auto p = preset("fig4");
  const auto traj = integrate(p.model, p.initial, 2.0);
  CHECK(traj.history_lookup(0, -0.085) == 1.0);
  CHECK(traj.history_lookup(2, 0.0) == 1.0);
  for (std::size_t k : {std::size_t{1}, std::size_t{50}, traj.node_count() - 1}) {
    CHECK(traj.history_lookup(1, traj.time(k)) == traj.y(k, 1));
    CHECK(traj.sample(traj.time(k))[0] == traj.x(k, 0));
  }
  CHECK_THROWS_AS(traj.history_lookup(0, 2.5), std::out_of_range);
  CHECK_THROWS_AS(traj.history_lookup(3, 1.0), std::out_of_range);
  CHECK_THROWS_AS(traj.sample(-0.1), std::out_of_range);
  const auto s0 = traj.sample(0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(s0[i] == p.initial.x0[i]);
    CHECK(s0[3 + i] == p.initial.y_history[i]);
  }
}

TEST_CASE("hermite interpolation reproduces cubics") {
  auto f = [](double t) { return 2.0 - 0.5 * t + 3.0 * t * t - 1.25 * t * t * t; };
  auto df = [](double t) { return -0.5 + 6.0 * t - 3.75 * t * t; };
  const double t0 = 1.3, h = 0.4;
  const std::vector<double> y0 = {f(t0)}, y1 = {f(t0 + h)}, d0 = {df(t0)}, d1 = {df(t0 + h)};
  for (const auto* table : {&kernels::scalar_kernels(), kernels::avx2_kernels()}) {
    if (table == nullptr) continue;
    for (double s = 0.0; s <= 1.0; s += 0.0625) {
      const auto w = hermite_weights(s, h);
      std::vector<double> out(1);
      table->hermite(out, y0, y1, d0, d1, w.c00, w.c10, w.c01, w.c11);
      CHECK(std::abs(out[0] - f(t0 + s * h)) < 1e-12);
    }
  }
}

TEST_CASE("dense output between nodes is fourth-order accurate") {
  const auto p = preset("fig4");
  const auto coarse = integrate(p.model, p.initial, 3.0, 0.0085);
  const auto fine = integrate(p.model, p.initial, 3.0, 0.0085 / 8);
  double err = 0.0;
  for (double t = 0.0031; t < 3.0; t += 0.0997) err = std::max(err, max_abs_diff(coarse.sample(t), fine.sample(t)));
  CHECK(err < 1e-5);
}

TEST_CASE("rk4 order under step halving") {
  // Steps commensurate with the delay, so breakpoints fall on nodes.
  const auto p = preset("fig3");
  const double T = 0.17, horizon = 10.0;
  const double h = T / 8;
  auto at_end = [&](double step) {
    const auto traj = integrate(p.model, p.initial, horizon, step);
    const auto s = traj.state(traj.node_count() - 1);
    return std::vector<double>(s.begin(), s.end());
  };
  const auto ref = at_end(h / 16);
  const double e1 = max_abs_diff(at_end(h), ref);
  const double e2 = max_abs_diff(at_end(h / 2), ref);
  MESSAGE("error ratio " << e1 / e2);
  CHECK(e1 / e2 >= 8.0);
  CHECK(e1 / e2 <= 32.0);
}

TEST_CASE("reruns are bit-identical") {
  const auto p = preset("fig6");
  const auto a = integrate(p.model, p.initial, 20.0);
  const auto b = integrate(p.model, p.initial, 20.0);
  REQUIRE(a.node_count() == b.node_count());
  for (std::size_t k = 0; k < a.node_count(); ++k) {
    const auto sa = a.state(k), sb = b.state(k);
    CHECK(std::equal(sa.begin(), sa.end(), sb.begin()));
  }
}

TEST_CASE("trajectories stay nonnegative and bounded") {
  for (const auto& name : preset_names()) {
    const auto p = preset(name);
    const auto traj = integrate(p.model, p.initial, 100.0);
    const std::size_t n = p.model.size();
    bool nonneg = true, bounded = true;
    for (std::size_t k = 0; k < traj.node_count(); ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double x = traj.x(k, i), y = traj.y(k, i);
        nonneg = nonneg && x >= -1e-9 && y >= -1e-9;
        const double limit =
            std::max(p.initial.x0[i] + p.initial.y_history[i], boundedness_bound(p.model, i)) + 1e-6;
        bounded = bounded && x + y <= limit;
      }
    }
    CHECK_MESSAGE(nonneg, name);
    CHECK_MESSAGE(bounded, name);
    CHECK(traj.significant_clamps() == 0);
  }
}

TEST_CASE("integration input checks") {
  const auto p = preset("fig3");
  CHECK_THROWS_AS(integrate(p.model, p.initial, 0.0), ModelError);
  CHECK_THROWS_AS(integrate(p.model, p.initial, 1.0, 0.2), ModelError);
  CHECK_THROWS_AS(integrate(p.model, p.initial, 1.0, -0.01), ModelError);
  CHECK_THROWS_AS(integrate(p.model, InitialData{{1, 1}, {1, 1}}, 1.0), ModelError);
  CHECK_NOTHROW(integrate(p.model, p.initial, 0.34, 0.17));
}

TEST_CASE("blow-up is reported") {
  const NetworkModel m({{1e300, 1.0, 0.1, 1.0}}, {}, 1e300, {2, 1});
  const InitialData init{{1e300}, {1e300}};
  CHECK_THROWS_AS(integrate(m, init, 1.0), NumericalError);
}

TEST_CASE("undelayed neurons use the current stage value") {
  const NetworkModel m({{10, 1, 0.0, 1.0}, {10, 1, 0.2, 1.0}}, {{0, 1, 0.5, 0.3}}, 0.1, {2, 5});
  const auto traj = integrate(m, InitialData::standard(m), 2.0);
  CHECK(traj.node_count() > 2);
  CHECK(traj.y(traj.node_count() - 1, 0) > 0.0);
}
