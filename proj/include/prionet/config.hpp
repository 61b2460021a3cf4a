#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prionet/analysis.hpp"
#include "prionet/dde.hpp"
#include "prionet/errors.hpp"
#include "prionet/model.hpp"

namespace prionet {

/// Model-file error with the 1-based line it refers to (0 when global).
class ParseError : public ModelError {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Key/value entries of one section, with the line each key was read from.
struct Section {
  std::size_t line = 0;
  std::map<std::string, double> values;
  std::map<std::string, std::size_t> lines;
};

/// Syntactic view of a model file:
///
///   # comment
///   [global]            d, p, y_c; optional defaults T, K, mu, alpha_sink
///   [neuron <int>]      K, mu, T, alpha_sink
///   [edge <int> -> <int>]  alpha, kappa
struct ModelDocument {
  std::optional<Section> global;
  std::map<std::size_t, Section> neurons;  ///< keyed by 1-based id
  std::map<std::pair<std::size_t, std::size_t>, Section> edges;
  std::vector<std::pair<std::size_t, std::size_t>> edge_order;  ///< file order
};

ModelDocument parse_document(std::string_view text);
NetworkModel to_model(const ModelDocument& doc);
NetworkModel parse_model(std::string_view text);
NetworkModel load_model(const std::string& path);

/// Canonical text form; parse_model(emit_model(m)) reproduces m exactly.
std::string emit_model(const NetworkModel& model);

struct Preset {
  std::string name;
  std::string description;
  NetworkModel model;
  InitialData initial;
};

/// Known names: fig3, fig4, fig5, fig6, fig7, fig9, or the long forms
/// fig3-full3, fig4-full3, fig5-line5, fig6-ring5, fig7-line5, fig9-line9.
Preset preset(std::string_view name);
std::vector<std::string> preset_names();

/// Shortest round-trip decimal form.
std::string format_number(double v);
/// 17 significant digits.
std::string format_full(double v);

/// Header t,x_1,y_1,...,x_n,y_n then every stride-th node, LF-terminated.
void write_csv(const Trajectory& traj, std::size_t stride, std::ostream& out);
/// kappa,neuron,amplitude,oscillating: one row per grid point per neuron.
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

}  // namespace prionet
