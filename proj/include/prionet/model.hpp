#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prionet {

/// Decreasing Hill feedback 1 / (1 + (y/y_c)^p) modelling the shutdown of
/// PrP^C production under PrP^Sc stress.
struct HillResponse {
  double p = 1.0;    ///< sensitivity exponent, > 0
  double y_c = 1.0;  ///< stress threshold, > 0

  double operator()(double y) const;
  double derivative(double y) const;
};

double beta(double y, const HillResponse& hill);

struct NeuronParams {
  double K = 0.0;           ///< PrP^C production rate
  double mu = 0.0;          ///< PrP^C degradation rate
  double T = 0.0;           ///< synthesis delay
  double alpha_sink = 0.0;  ///< outflow that reaches no other neuron
};

/// Directed prion flow from `from` to `to` (0-based indices).
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  double alpha = 0.0;  ///< flow rate alpha_{from->to}
  double kappa = 0.0;  ///< cross-species interaction factor kappa_{from,to}
};

struct Violation {
  std::string field;
  std::string message;
};

/// Immutable n-neuron network. Structural problems (index out of range,
/// self-edges, duplicate edges, n = 0) throw ModelError at construction;
/// numeric range problems are reported by validate().
class NetworkModel {
 public:
  NetworkModel(std::vector<NeuronParams> neurons, std::vector<Edge> edges, double d,
               HillResponse hill);

  std::size_t size() const { return neurons_.size(); }
  const std::vector<NeuronParams>& neurons() const { return neurons_; }
  const NeuronParams& neuron(std::size_t i) const { return neurons_.at(i); }
  const std::vector<Edge>& edges() const { return edges_; }
  double d() const { return d_; }
  const HillResponse& hill() const { return hill_; }

  /// alpha_sink_i + sum of outgoing edge flows.
  double alpha_total(std::size_t i) const { return alpha_total_.at(i); }
  double max_delay() const;
  /// Smallest strictly positive delay, if any neuron has one.
  std::optional<double> min_positive_delay() const;

  /// Incoming edges of neuron i, stored as (source, kappa * alpha) pairs.
  struct Incoming {
    std::size_t from;
    double weight;
  };
  std::span<const Incoming> incoming(std::size_t i) const;

  /// y_i + sum_j kappa_ji alpha_{j->i} y_j
  double infection_pressure(std::size_t i, std::span<const double> y) const;

  /// Copy with every listed edge's kappa replaced.
  NetworkModel with_kappa(double kappa, std::span<const std::size_t> edge_indices) const;
  NetworkModel with_kappa(double kappa) const;

 private:
  std::vector<NeuronParams> neurons_;
  std::vector<Edge> edges_;
  double d_;
  HillResponse hill_;
  std::vector<double> alpha_total_;
  std::vector<std::size_t> in_offsets_;
  std::vector<Incoming> in_edges_;
};

/// Initial data: x_i(0) and a constant history phi_i on [-T_max, 0].
struct InitialData {
  std::vector<double> x0;
  std::vector<double> y_history;

  /// x_i(0) = K_i / mu_i, phi_i = y0.
  static InitialData standard(const NetworkModel& model, double y0 = 1.0);
};

/// Time derivatives of the delayed system. `state` is (x_1..x_n, y_1..y_n),
/// `delayed_y` holds y_i(t - T_i); `out` receives 2n derivatives.
void rhs(const NetworkModel& model, std::span<const double> state,
         std::span<const double> delayed_y, std::span<double> out);
std::vector<double> rhs(const NetworkModel& model, std::span<const double> state,
                        std::span<const double> delayed_y);

std::vector<Violation> validate(const NetworkModel& model, bool strict);
std::vector<Violation> validate(const InitialData& initial, std::size_t n);

/// Disease-free equilibrium (K_1/mu_1, ..., K_n/mu_n, 0, ..., 0).
std::vector<double> dfe(const NetworkModel& model);

/// A-priori bound K_i / min(mu_i, alpha_i) on limsup x_i + y_i.
double boundedness_bound(const NetworkModel& model, std::size_t i);

}  // namespace prionet
