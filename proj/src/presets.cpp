#include <string>
#include <vector>

#include "prionet/config.hpp"

namespace prionet {

namespace {

struct Homogeneous {
  std::size_t n;
  double d, p, y_c, T, K, mu;
  double edge_alpha, kappa;
  double alpha_total;  ///< sinks top every neuron up to this outflow
};

enum class Topology { full, line, ring };

NetworkModel build(const Homogeneous& h, Topology topo) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < h.n; ++i) {
    for (std::size_t j = 0; j < h.n; ++j) {
      if (i == j) continue;
      const bool linked = topo == Topology::full || j == i + 1 ||
                          (topo == Topology::ring && i + 1 == h.n && j == 0);
      if (linked) edges.push_back(Edge{i, j, h.edge_alpha, h.kappa});
    }
  }
  std::vector<double> out(h.n, 0.0);
  for (const auto& e : edges) out[e.from] += e.alpha;
  std::vector<NeuronParams> neurons(h.n);
  for (std::size_t i = 0; i < h.n; ++i) {
    neurons[i] = NeuronParams{h.K, h.mu, h.T, h.alpha_total - out[i]};
  }
  return NetworkModel(std::move(neurons), std::move(edges), h.d, HillResponse{h.p, h.y_c});
}

// Fully connected networks have no sink; fig5/fig6 use alpha_i = (n-1) * 2.5,
// the same convention as the fig7/fig9 captions (alpha_i = 3.6).
constexpr Homogeneous kFig3{3, 0.015, 5.0, 60.0, 0.17, 1500.0, 18.0, 0.9, 0.1, 1.8};
constexpr Homogeneous kFig4{3, 0.015, 5.0, 60.0, 0.17, 1500.0, 13.0, 0.9, 0.1, 1.8};
constexpr Homogeneous kFig5{5, 0.15, 10.0, 50.0, 0.15, 1500.0, 20.0, 2.5, 0.17, 10.0};
constexpr Homogeneous kFig7{5, 0.15, 10.0, 60.0, 0.15, 1800.0, 50.0, 0.9, 0.071, 3.6};
constexpr Homogeneous kFig9{9, 0.15, 10.0, 60.0, 0.15, 1800.0, 50.0, 0.45, 0.125, 3.6};

Preset make(std::string name, std::string description, NetworkModel model) {
  InitialData init = InitialData::standard(model, 1.0);
  return Preset{std::move(name), std::move(description), std::move(model), std::move(init)};
}

}  // namespace

Preset preset(std::string_view name) {
  if (name == "fig3" || name == "fig3-full3") {
    return make("fig3-full3", "fully connected n=3, R0 < 1 (extinction)", build(kFig3, Topology::full));
  }
  if (name == "fig4" || name == "fig4-full3") {
    return make("fig4-full3", "fully connected n=3, R0 > 1 (persistence)", build(kFig4, Topology::full));
  }
  if (name == "fig5" || name == "fig5-line5") {
    return make("fig5-line5", "line n=5, settles to an endemic equilibrium", build(kFig5, Topology::line));
  }
  if (name == "fig6" || name == "fig6-ring5") {
    return make("fig6-ring5", "ring n=5, same parameters as fig5, oscillates", build(kFig5, Topology::ring));
  }
  if (name == "fig7" || name == "fig7-line5") {
    return make("fig7-line5", "line n=5, kappa = 0.071, bifurcation template", build(kFig7, Topology::line));
  }
  if (name == "fig9" || name == "fig9-line9") {
    return make("fig9-line9", "line n=9, kappa = 0.125", build(kFig9, Topology::line));
  }
  throw ModelError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"fig3-full3", "fig4-full3", "fig5-line5", "fig6-ring5", "fig7-line5", "fig9-line9"};
}

}  // namespace prionet
