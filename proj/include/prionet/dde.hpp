#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "prionet/model.hpp"

namespace prionet {

/// Dense solution of the delayed system on a uniform grid 0 = t_0 < ... < t_N
/// = horizon. Between nodes, values come from cubic Hermite interpolation of
/// the stored states and derivatives; for t <= 0 the constant history applies.
class Trajectory {
 public:
  std::size_t neurons() const { return n_; }
  std::size_t node_count() const { return times_.size(); }
  double step() const { return h_; }
  double horizon() const { return times_.empty() ? 0.0 : times_.back(); }
  const std::vector<double>& times() const { return times_; }
  double time(std::size_t k) const { return times_.at(k); }

  /// (x_1..x_n, y_1..y_n) at node k.
  std::span<const double> state(std::size_t k) const;
  std::span<const double> derivative(std::size_t k) const;
  double x(std::size_t k, std::size_t i) const { return state(k)[i]; }
  double y(std::size_t k, std::size_t i) const { return state(k)[n_ + i]; }

  const NetworkModel& model() const { return model_; }
  const InitialData& initial() const { return initial_; }

  /// y_i(t) using the history for t <= 0 and Hermite interpolation up to
  /// the last computed node. Throws std::out_of_range beyond it.
  double history_lookup(std::size_t i, double t) const;

  /// Full 2n-state at 0 <= t <= horizon.
  std::vector<double> sample(double t) const;

  /// Largest negative undershoot that was clamped to zero.
  double max_clamp() const { return max_clamp_; }
  /// Number of clamps larger than 1e-9 (signals a solver problem).
  std::size_t significant_clamps() const { return significant_clamps_; }

 private:
  friend Trajectory integrate(const NetworkModel&, const InitialData&, double,
                              std::optional<double>);

  Trajectory(const NetworkModel& model, InitialData initial, double h);

  double component_at(std::size_t c, double t) const;
  void interpolate_block(std::size_t first, std::size_t count, std::size_t k, double s,
                         std::span<double> out) const;

  NetworkModel model_;
  InitialData initial_;
  std::size_t n_;
  double h_;
  std::vector<double> times_;
  std::vector<double> states_;
  std::vector<double> derivs_;
  double max_clamp_ = 0.0;
  std::size_t significant_clamps_ = 0;
};

/// Cubic Hermite basis on [t_k, t_k + h] at s = (t - t_k) / h; the
/// derivative weights already carry the factor h.
struct HermiteWeights {
  double c00, c10, c01, c11;
};
HermiteWeights hermite_weights(double s, double h);

/// min(T_min / 20, 1e-2) when some delay is positive, else 1e-2.
double default_step(const NetworkModel& model);

/// Classical RK4 under the method of steps. The step is reduced to
/// horizon / ceil(horizon / h) so the grid ends exactly at the horizon.
/// Requires 0 < h <= smallest positive delay. Throws NumericalError on a
/// nonfinite state and ModelError on invalid initial data.
Trajectory integrate(const NetworkModel& model, const InitialData& initial, double horizon,
                     std::optional<double> step = std::nullopt);

}  // namespace prionet
