#include "prionet/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "prionet/errors.hpp"

namespace prionet {

double HillResponse::operator()(double y) const {
  if (y <= 0.0) return 1.0;
  return 1.0 / (1.0 + std::pow(y / y_c, p));
}

double HillResponse::derivative(double y) const {
  if (y <= 0.0) {
    if (p > 1.0) return 0.0;
    if (p == 1.0) return -1.0 / y_c;
    return -std::numeric_limits<double>::infinity();
  }
  const double r = std::pow(y / y_c, p);
  const double b = 1.0 / (1.0 + r);
  return -(p / y) * r * b * b;
}

double beta(double y, const HillResponse& hill) { return hill(y); }

NetworkModel::NetworkModel(std::vector<NeuronParams> neurons, std::vector<Edge> edges, double d,
                           HillResponse hill)
    : neurons_(std::move(neurons)), edges_(std::move(edges)), d_(d), hill_(hill) {
  const std::size_t n = neurons_.size();
  if (n == 0) throw ModelError("network must contain at least one neuron");

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges_) {
    if (e.from >= n || e.to >= n) {
      std::ostringstream os;
      os << "edge " << e.from + 1 << " -> " << e.to + 1 << " references an unknown neuron";
      throw ModelError(os.str());
    }
    if (e.from == e.to) {
      std::ostringstream os;
      os << "self-edge on neuron " << e.from + 1;
      throw ModelError(os.str());
    }
    if (!seen.emplace(e.from, e.to).second) {
      std::ostringstream os;
      os << "duplicate edge " << e.from + 1 << " -> " << e.to + 1;
      throw ModelError(os.str());
    }
  }

  alpha_total_.resize(n);
  for (std::size_t i = 0; i < n; ++i) alpha_total_[i] = neurons_[i].alpha_sink;
  for (const auto& e : edges_) alpha_total_[e.from] += e.alpha;

  // CSR layout of incoming edges, ordered by source for a deterministic sum.
  std::vector<std::size_t> counts(n, 0);
  for (const auto& e : edges_) ++counts[e.to];
  in_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) in_offsets_[i + 1] = in_offsets_[i] + counts[i];
  in_edges_.resize(edges_.size());
  std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  std::vector<std::size_t> order(edges_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return edges_[a].from < edges_[b].from; });
  for (std::size_t k : order) {
    const auto& e = edges_[k];
    in_edges_[cursor[e.to]++] = Incoming{e.from, e.kappa * e.alpha};
  }
}

double NetworkModel::max_delay() const {
  double t = 0.0;
  for (const auto& nrn : neurons_) t = std::max(t, nrn.T);
  return t;
}

std::optional<double> NetworkModel::min_positive_delay() const {
  std::optional<double> best;
  for (const auto& nrn : neurons_) {
    if (nrn.T > 0.0 && (!best || nrn.T < *best)) best = nrn.T;
  }
  return best;
}

std::span<const NetworkModel::Incoming> NetworkModel::incoming(std::size_t i) const {
  return {in_edges_.data() + in_offsets_.at(i), in_offsets_.at(i + 1) - in_offsets_.at(i)};
}

double NetworkModel::infection_pressure(std::size_t i, std::span<const double> y) const {
  double s = y[i];
  for (const auto& in : incoming(i)) s += in.weight * y[in.from];
  return s;
}

NetworkModel NetworkModel::with_kappa(double kappa, std::span<const std::size_t> edge_indices) const {
  auto edges = edges_;
  for (std::size_t k : edge_indices) edges.at(k).kappa = kappa;
  return NetworkModel(neurons_, std::move(edges), d_, hill_);
}

NetworkModel NetworkModel::with_kappa(double kappa) const {
  std::vector<std::size_t> all(edges_.size());
  std::iota(all.begin(), all.end(), 0);
  return with_kappa(kappa, all);
}

InitialData InitialData::standard(const NetworkModel& model, double y0) {
  InitialData init;
  for (const auto& nrn : model.neurons()) init.x0.push_back(nrn.K / nrn.mu);
  init.y_history.assign(model.size(), y0);
  return init;
}

void rhs(const NetworkModel& model, std::span<const double> state,
         std::span<const double> delayed_y, std::span<double> out) {
  const std::size_t n = model.size();
  const auto x = state.first(n);
  const auto y = state.subspan(n, n);
  const double d = model.d();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nrn = model.neuron(i);
    const double infection = d * x[i] * model.infection_pressure(i, y);
    out[i] = nrn.K * model.hill()(delayed_y[i]) - nrn.mu * x[i] - infection;
    out[n + i] = infection - model.alpha_total(i) * y[i];
  }
}

std::vector<double> rhs(const NetworkModel& model, std::span<const double> state,
                        std::span<const double> delayed_y) {
  std::vector<double> out(2 * model.size());
  rhs(model, state, delayed_y, out);
  return out;
}

namespace {

std::string neuron_field(std::size_t i, const char* key) {
  std::ostringstream os;
  os << "neuron[" << i + 1 << "]." << key;
  return os.str();
}

std::string edge_field(const Edge& e, const char* key) {
  std::ostringstream os;
  os << "edge[" << e.from + 1 << "->" << e.to + 1 << "]." << key;
  return os.str();
}

}  // namespace

std::vector<Violation> validate(const NetworkModel& model, bool strict) {
  std::vector<Violation> out;
  auto bad = [&](std::string field, std::string msg) {
    out.push_back({std::move(field), std::move(msg)});
  };

  if (!(std::isfinite(model.d()) && model.d() > 0.0)) bad("global.d", "d must be finite and > 0");
  if (!(std::isfinite(model.hill().p) && model.hill().p > 0.0))
    bad("global.p", "p must be finite and > 0");
  if (!(std::isfinite(model.hill().y_c) && model.hill().y_c > 0.0))
    bad("global.y_c", "y_c must be finite and > 0");

  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& nrn = model.neuron(i);
    if (!(std::isfinite(nrn.K) && nrn.K > 0.0)) bad(neuron_field(i, "K"), "K must be finite and > 0");
    if (!(std::isfinite(nrn.mu) && nrn.mu > 0.0))
      bad(neuron_field(i, "mu"), "mu must be finite and > 0");
    if (!(std::isfinite(nrn.T) && nrn.T >= 0.0))
      bad(neuron_field(i, "T"), "T must be finite and >= 0");
    if (!(std::isfinite(nrn.alpha_sink) && nrn.alpha_sink >= 0.0))
      bad(neuron_field(i, "alpha_sink"), "alpha_sink must be finite and >= 0");
  }
  for (const auto& e : model.edges()) {
    if (!(std::isfinite(e.alpha) && e.alpha >= 0.0))
      bad(edge_field(e, "alpha"), "alpha must be finite and >= 0");
    if (!(std::isfinite(e.kappa) && e.kappa >= 0.0 && e.kappa <= 1.0))
      bad(edge_field(e, "kappa"), "kappa out of [0,1]");
  }
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double a = model.alpha_total(i);
    if (!(std::isfinite(a) && a >= 0.0)) bad(neuron_field(i, "alpha_total"), "alpha_total must be >= 0");
  }

  if (strict) {
    std::vector<double> kappa_in(model.size(), 0.0);
    for (const auto& e : model.edges()) kappa_in[e.to] += e.kappa;
    for (std::size_t i = 0; i < model.size(); ++i) {
      if (kappa_in[i] > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "sum of incoming kappa for neuron " << i + 1 << " is " << kappa_in[i] << " > 1";
        bad(neuron_field(i, "kappa_in"), os.str());
      }
      if (!(model.alpha_total(i) > 0.0)) {
        std::ostringstream os;
        os << "alpha_total(" << i + 1 << ") = 0";
        bad(neuron_field(i, "alpha_total"), os.str());
      }
    }
  }
  return out;
}

std::vector<Violation> validate(const InitialData& initial, std::size_t n) {
  std::vector<Violation> out;
  if (initial.x0.size() != n) out.push_back({"initial.x0", "expected one value per neuron"});
  if (initial.y_history.size() != n)
    out.push_back({"initial.y_history", "expected one value per neuron"});
  for (std::size_t i = 0; i < initial.x0.size(); ++i) {
    if (!(std::isfinite(initial.x0[i]) && initial.x0[i] >= 0.0))
      out.push_back({neuron_field(i, "x0"), "initial x must be finite and >= 0"});
  }
  for (std::size_t i = 0; i < initial.y_history.size(); ++i) {
    if (!(std::isfinite(initial.y_history[i]) && initial.y_history[i] >= 0.0))
      out.push_back({neuron_field(i, "y0"), "history must be finite and >= 0"});
  }
  return out;
}

std::vector<double> dfe(const NetworkModel& model) {
  const std::size_t n = model.size();
  std::vector<double> point(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) point[i] = model.neuron(i).K / model.neuron(i).mu;
  return point;
}

double boundedness_bound(const NetworkModel& model, std::size_t i) {
  const double a = model.alpha_total(i);
  if (!(a > 0.0)) {
    std::ostringstream os;
    os << "boundedness bound undefined: alpha_total(" << i + 1 << ") = 0";
    throw ModelError(os.str());
  }
  const auto& nrn = model.neuron(i);
  return nrn.K / std::min(nrn.mu, a);
}

}  // namespace prionet
