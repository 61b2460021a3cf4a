#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "prionet/model.hpp"

namespace prionet {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Next-generation matrix at the disease-free equilibrium and its derived
/// threshold quantities.
struct NgmReport {
  std::vector<double> local_r0;  ///< d K_i / (mu_i alpha_i)
  Eigen::MatrixXd F;             ///< F_ii = R_0i, F_ij = kappa_ji alpha_{j->i} R_0i
  double r0 = 0.0;               ///< spectral radius of F (filled by compute_r0)
  std::vector<double> row_sums;
  double min_row_sum = 0.0;
  double max_row_sum = 0.0;
  /// min row sum > 1: sufficient condition for an endemic equilibrium.
  bool ee_certificate = false;
  Eigen::MatrixXd m22;      ///< new-infection block of the Jacobian at the DFE
  std::vector<double> v22;  ///< diagonal transition block, entries alpha_i
};

/// Throws ModelError when alpha_total(i) is zero.
double local_r0(const NetworkModel& model, std::size_t i);

/// F = V22^{-1} M22 with row sums; r0 left at 0.
NgmReport ngm_matrix(const NetworkModel& model);

/// Perron root of a square nonnegative matrix. Triangular matrices return the
/// largest diagonal entry; otherwise each strongly connected block of the
/// nonzero pattern is handled by shifted power iteration from a random
/// positive start, stopped once the Collatz-Wielandt bracket is narrower than
/// 1e-12 (relative). Throws NumericalError after 100000 iterations.
double spectral_radius(const Eigen::MatrixXd& F, std::uint64_t seed = kDefaultSeed);

/// Full report including r0 = spectral_radius(F).
NgmReport compute_r0(const NetworkModel& model, std::uint64_t seed = kDefaultSeed);

/// Closed-form eigenvalues (lambda_plus, lambda_minus) of the 2x2 F.
std::pair<double, double> two_neuron_lambda(const NetworkModel& model);

/// R0 (kappa alpha + 1): threshold of a fully connected homogeneous network.
double homogeneous_r0(double local_r0, double kappa, double alpha);

}  // namespace prionet
