#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prionet/dde.hpp"
#include "prionet/model.hpp"

namespace prionet {

enum class EquilibriumKind { dfe, endemic };

struct EquilibriumResult {
  EquilibriumKind kind = EquilibriumKind::dfe;
  std::vector<double> point;  ///< (x, y); empty when nothing converged
  double residual = 0.0;      ///< max-norm of rhs with delayed_y = y
  int iterations = 0;
  bool converged = false;
  std::size_t distinct_roots = 0;  ///< distinct endemic roots seen across starts
  std::size_t starts = 0;
};

/// Max-norm of the right-hand side at a constant state.
double equilibrium_residual(const NetworkModel& model, std::span<const double> point);

EquilibriumResult dfe_equilibrium(const NetworkModel& model);

/// Reduced equilibrium map in y alone, after eliminating x:
/// G_i(y) = d K_i beta(y_i) S_i / (mu_i + d S_i) - alpha_i y_i,
/// S_i = y_i + sum_j kappa_ji alpha_{j->i} y_j.
std::vector<double> reduced_system(const NetworkModel& model, std::span<const double> y);

/// x_i = K_i beta(y_i) / (mu_i + d S_i).
std::vector<double> recover_x(const NetworkModel& model, std::span<const double> y);

/// Search box [epsilon, upper]^n for endemic roots.
struct EeBox {
  double epsilon = 1e-8;
  double upper = 0.0;
  bool heuristic = true;  ///< epsilon not certified by the row-sum condition
};

EeBox ee_box(const NetworkModel& model);

/// Damped Newton on the reduced system from the optional start, a symmetric
/// start and a log-spaced lattice inside the box. Returns the lowest-residual
/// root with every y_i > 0, or converged = false.
EquilibriumResult endemic_equilibrium(const NetworkModel& model,
                                      std::optional<std::vector<double>> start = std::nullopt);

enum class Classification { extinct, endemic_steady, oscillating, undetermined };

std::string_view to_string(Classification c);

struct ClassifyOptions {
  double window_fraction = 0.3;
  double tol_extinct = 1e-6;
  double tol_osc = 1e-2;
};

struct AsymptoticsReport {
  Classification classification = Classification::undetermined;
  double window_start = 0.0;
  double window_end = 0.0;
  std::vector<double> amplitude;          ///< max - min of y_i over the window
  std::vector<double> mean;               ///< window mean of y_i
  std::vector<double> persistence_floor;  ///< window min of y_i
  std::vector<double> peak;               ///< window max of y_i
  std::vector<bool> oscillating;          ///< amplitude_i > tol_osc (1 + mean_i)
  double max_drift = 0.0;                 ///< largest |end - start| / (1 + |mean|), x and y
};

/// Classify the final `window_fraction` of the horizon.
AsymptoticsReport classify(const Trajectory& traj, const ClassifyOptions& opts = {});
/// Classify an explicit window [t_start, t_end].
AsymptoticsReport classify_window(const Trajectory& traj, double t_start, double t_end,
                                  const ClassifyOptions& opts = {});

/// Per-neuron minimum of y_i over grid nodes in [t_start, t_end].
std::vector<double> persistence_floor(const Trajectory& traj, double t_start, double t_end);

struct SweepOptions {
  double from = 0.0;
  double to = 1.0;
  std::size_t points = 10;
  double horizon = 200.0;
  std::vector<std::size_t> edges;  ///< swept edges; empty means all
  ClassifyOptions classify;
  double onset_width = 1e-4;
  std::optional<InitialData> initial;  ///< default: InitialData::standard
  std::optional<double> step;
  std::size_t threads = 0;  ///< 0: hardware concurrency; PRIONET_THREADS caps either
};

struct SweepResult {
  std::string parameter = "kappa";
  std::vector<double> grid;
  std::vector<std::vector<double>> amplitude;  ///< [grid point][neuron]
  std::vector<std::vector<bool>> oscillating;  ///< [grid point][neuron]
  std::vector<std::optional<double>> onset;    ///< per neuron
  std::vector<std::string> errors;             ///< per grid point, empty if fine
};

/// Each grid point is integrated to four times the horizon. A kappa counts as
/// oscillating for neuron i only if the windows ending at H, 2H and 4H all
/// flag it; the reported amplitude comes from the window ending at 4H.
SweepResult kappa_sweep(const NetworkModel& model, const SweepOptions& opts);

/// Worker count for sweeps: `requested` if nonzero, else hardware
/// concurrency, capped by a positive integer in PRIONET_THREADS.
std::size_t sweep_threads(std::size_t requested);

}  // namespace prionet
