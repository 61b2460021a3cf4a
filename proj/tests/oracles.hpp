#pragma once

// Reference computations written independently of the library code paths.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "prionet/model.hpp"

namespace oracle {

// Right-hand side evaluated straight from the edge list.
inline std::vector<double> rhs(const prionet::NetworkModel& m, const std::vector<double>& s,
                               const std::vector<double>& delayed) {
  const std::size_t n = m.size();
  std::vector<double> out(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = m.neuron(i);
    double alpha = p.alpha_sink;
    for (const auto& e : m.edges())
      if (e.from == i) alpha += e.alpha;
    double pressure = s[n + i];
    for (const auto& e : m.edges())
      if (e.to == i) pressure += e.kappa * e.alpha * s[n + e.from];
    const double b = 1.0 / (1.0 + std::pow(delayed[i] / m.hill().y_c, m.hill().p));
    const double infection = m.d() * s[i] * pressure;
    out[i] = p.K * b - p.mu * s[i] - infection;
    out[n + i] = infection - alpha * s[n + i];
  }
  return out;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  if (flo * f(hi) > 0) throw std::runtime_error("oracle bracket does not change sign");
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Symmetric endemic level of a homogeneous network: K beta(y) - alpha y - mu alpha / (d (1 + c)) = 0,
// where c is the summed incoming kappa * alpha of one neuron.
inline double symmetric_endemic_y(double K, double mu, double alpha, double d, double c, double p, double y_c) {
  auto f = [&](double y) {
    return K / (1.0 + std::pow(y / y_c, p)) - alpha * y - mu * alpha / (d * (1.0 + c));
  };
  return bisect(f, 0.0, K / alpha);
}

inline double eigen_spectral_radius(const Eigen::MatrixXd& F) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(F, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Largest root of the characteristic polynomial of a 2x2 matrix.
inline double char_poly_root_2x2(const Eigen::MatrixXd& F) {
  const double tr = F(0, 0) + F(1, 1);
  const double det = F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
  return 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
}

}  // namespace oracle
