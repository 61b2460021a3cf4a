#include <ostream>
#include <stdexcept>

#include "prionet/config.hpp"

namespace prionet {

void write_csv(const Trajectory& traj, std::size_t stride, std::ostream& out) {
  if (stride == 0) throw std::invalid_argument("stride must be >= 1");
  const std::size_t n = traj.neurons();
  out << 't';
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i << ",y_" << i;
  out << '\n';
  for (std::size_t k = 0; k < traj.node_count(); k += stride) {
    out << format_full(traj.time(k));
    for (std::size_t i = 0; i < n; ++i) {
      out << ',' << format_full(traj.x(k, i)) << ',' << format_full(traj.y(k, i));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing trajectory CSV");
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  out << sweep.parameter << ",neuron,amplitude,oscillating\n";
  for (std::size_t j = 0; j < sweep.grid.size(); ++j) {
    for (std::size_t i = 0; i < sweep.amplitude[j].size(); ++i) {
      out << format_full(sweep.grid[j]) << ',' << i + 1 << ',' << format_full(sweep.amplitude[j][i]) << ','
          << (sweep.oscillating[j][i] ? 1 : 0) << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing sweep CSV");
}

}  // namespace prionet
