#include "prionet/dde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "prionet/errors.hpp"
#include "prionet/kernels.hpp"

namespace prionet {

namespace {

constexpr double kClampDiagnostic = 1e-9;

}  // namespace

HermiteWeights hermite_weights(double s, double h) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return {2.0 * s3 - 3.0 * s2 + 1.0, (s3 - 2.0 * s2 + s) * h, -2.0 * s3 + 3.0 * s2, (s3 - s2) * h};
}

Trajectory::Trajectory(const NetworkModel& model, InitialData initial, double h)
    : model_(model), initial_(std::move(initial)), n_(model.size()), h_(h) {}

std::span<const double> Trajectory::state(std::size_t k) const {
  if (k >= times_.size()) throw std::out_of_range("trajectory node out of range");
  return {states_.data() + k * 2 * n_, 2 * n_};
}

std::span<const double> Trajectory::derivative(std::size_t k) const {
  if (k >= times_.size()) throw std::out_of_range("trajectory node out of range");
  return {derivs_.data() + k * 2 * n_, 2 * n_};
}

void Trajectory::interpolate_block(std::size_t first, std::size_t count, std::size_t k, double s,
                                   std::span<double> out) const {
  const std::size_t w = 2 * n_;
  const double* y0 = states_.data() + k * w + first;
  const double* y1 = states_.data() + (k + 1) * w + first;
  const double* d0 = derivs_.data() + k * w + first;
  const double* d1 = derivs_.data() + (k + 1) * w + first;
  const auto hw = hermite_weights(s, h_);
  kernels::active().hermite(out.first(count), {y0, count}, {y1, count}, {d0, count}, {d1, count},
                            hw.c00, hw.c10, hw.c01, hw.c11);
}

double Trajectory::component_at(std::size_t c, double t) const {
  const std::size_t last = times_.size() - 1;
  if (t > times_[last]) {
    std::ostringstream os;
    os << "lookup at t = " << t << " is beyond the integration front " << times_[last];
    throw std::out_of_range(os.str());
  }
  const std::size_t w = 2 * n_;
  if (t == times_[last]) return states_[last * w + c];
  auto k = static_cast<std::size_t>(std::floor(t / h_));
  k = std::min(k, last - 1);
  if (t == times_[k]) return states_[k * w + c];
  if (t == times_[k + 1]) return states_[(k + 1) * w + c];
  const double s = (t - times_[k]) / h_;
  double v = 0.0;
  interpolate_block(c, 1, k, s, {&v, 1});
  return v;
}

double Trajectory::history_lookup(std::size_t i, double t) const {
  if (i >= n_) throw std::out_of_range("neuron index out of range");
  if (t <= 0.0) return initial_.y_history[i];
  return component_at(n_ + i, t);
}

std::vector<double> Trajectory::sample(double t) const {
  if (!(t >= 0.0 && t <= horizon())) {
    std::ostringstream os;
    os << "sample time " << t << " outside [0, " << horizon() << "]";
    throw std::out_of_range(os.str());
  }
  std::vector<double> out(2 * n_);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = component_at(c, t);
  return out;
}

double default_step(const NetworkModel& model) {
  if (const auto tmin = model.min_positive_delay()) return std::min(*tmin / 20.0, 1e-2);
  return 1e-2;
}

namespace {

// Locates tau on the grid. Nodes up to `front` carry derivatives; a tau
// within rounding of the front snaps onto it.
struct GridPoint {
  std::size_t k;
  double s;  // 0 means exactly node k
};

GridPoint locate(double tau, const std::vector<double>& times, std::size_t front, double h) {
  if (tau >= times[front]) {
    if (tau - times[front] > 1e-9 * h) throw std::logic_error("delayed lookup beyond the integration front");
    return {front, 0.0};
  }
  auto k = std::min(static_cast<std::size_t>(std::floor(tau / h)), front - 1);
  if (tau == times[k + 1]) return {k + 1, 0.0};
  if (tau == times[k]) return {k, 0.0};
  return {k, (tau - times[k]) / h};
}

class DelayGather {
 public:
  DelayGather(const NetworkModel& model, const std::vector<double>& history)
      : model_(model), history_(history), n_(model.size()) {
    uniform_ = model.neuron(0).T > 0.0;
    for (const auto& nrn : model.neurons()) {
      if (nrn.T != model.neuron(0).T) uniform_ = false;
    }
  }

  // out[i] = y_i(t - T_i), or the stage value when T_i = 0.
  void operator()(double t, std::span<const double> stage_y, std::span<double> out,
                  const std::vector<double>& times,
                  const std::vector<double>& states, const std::vector<double>& derivs,
                  double h) const {
    const std::size_t w = 2 * n_;
    // derivs is empty only at t = 0, where every lookup hits the history
    const std::size_t front = derivs.empty() ? 0 : derivs.size() / w - 1;
    if (uniform_) {
      const double tau = t - model_.neuron(0).T;
      if (tau <= 0.0) {
        std::copy(history_.begin(), history_.end(), out.begin());
        return;
      }
      const auto g = locate(tau, times, front, h);
      if (g.s == 0.0) {
        std::copy_n(states.begin() + static_cast<std::ptrdiff_t>(g.k * w + n_), n_, out.begin());
        return;
      }
      const auto hw = hermite_weights(g.s, h);
      kernels::active().hermite(out, {states.data() + g.k * w + n_, n_},
                                {states.data() + (g.k + 1) * w + n_, n_},
                                {derivs.data() + g.k * w + n_, n_},
                                {derivs.data() + (g.k + 1) * w + n_, n_}, hw.c00, hw.c10, hw.c01,
                                hw.c11);
      return;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      const double T = model_.neuron(i).T;
      if (T == 0.0) {
        out[i] = stage_y[i];
        continue;
      }
      const double tau = t - T;
      if (tau <= 0.0) {
        out[i] = history_[i];
        continue;
      }
      const auto g = locate(tau, times, front, h);
      const std::size_t c = n_ + i;
      if (g.s == 0.0) {
        out[i] = states[g.k * w + c];
        continue;
      }
      const auto hw = hermite_weights(g.s, h);
      out[i] = ((hw.c00 * states[g.k * w + c] + hw.c10 * derivs[g.k * w + c]) +
                hw.c01 * states[(g.k + 1) * w + c]) +
               hw.c11 * derivs[(g.k + 1) * w + c];
    }
  }

 private:
  const NetworkModel& model_;
  const std::vector<double>& history_;
  std::size_t n_;
  bool uniform_;
};

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

}  // namespace

Trajectory integrate(const NetworkModel& model, const InitialData& initial, double horizon,
                     std::optional<double> step) {
  const std::size_t n = model.size();
  if (auto bad = validate(initial, n); !bad.empty()) {
    throw ModelError("invalid initial data: " + bad.front().field + ": " + bad.front().message);
  }
  if (!(std::isfinite(horizon) && horizon > 0.0)) throw ModelError("horizon must be > 0");
  const double h_req = step.value_or(default_step(model));
  if (!(std::isfinite(h_req) && h_req > 0.0)) throw ModelError("step must be finite and > 0");
  if (const auto tmin = model.min_positive_delay(); tmin && h_req > *tmin * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "step " << h_req << " exceeds the smallest positive delay " << *tmin;
    throw ModelError(os.str());
  }

  const auto steps = static_cast<std::size_t>(std::ceil(horizon / h_req - 1e-9));
  const double h = horizon / static_cast<double>(std::max<std::size_t>(steps, 1));
  const std::size_t N = std::max<std::size_t>(steps, 1);
  const std::size_t w = 2 * n;
  const auto& kern = kernels::active();

  Trajectory traj(model, initial, h);
  traj.times_.reserve(N + 1);
  traj.states_.reserve((N + 1) * w);
  traj.derivs_.reserve((N + 1) * w);

  std::vector<double> s(w);
  std::copy(initial.x0.begin(), initial.x0.end(), s.begin());
  std::copy(initial.y_history.begin(), initial.y_history.end(), s.begin() + static_cast<std::ptrdiff_t>(n));

  DelayGather gather(model, initial.y_history);
  std::vector<double> lag(n), k1(w), k2(w), k3(w), k4(w), tmp(w);
  const auto ys = [&](std::span<const double> v) { return v.subspan(n, n); };

  traj.times_.push_back(0.0);
  traj.states_.insert(traj.states_.end(), s.begin(), s.end());
  gather(0.0, ys(s), lag, traj.times_, traj.states_, traj.derivs_, h);
  rhs(model, s, lag, k1);
  traj.derivs_.insert(traj.derivs_.end(), k1.begin(), k1.end());

  auto clamp = [&](std::span<double> v) {
    const double c = kern.clamp_nonnegative(v);
    if (c > traj.max_clamp_) traj.max_clamp_ = c;
    if (c > kClampDiagnostic) ++traj.significant_clamps_;
  };

  for (std::size_t k = 0; k < N; ++k) {
    const double t = traj.times_[k];
    const double t_mid = t + 0.5 * h;
    const double t_next = (k + 1 == N) ? horizon : static_cast<double>(k + 1) * h;

    std::copy_n(traj.derivs_.begin() + static_cast<std::ptrdiff_t>(k * w), w, k1.begin());

    kern.axpy(tmp, s, 0.5 * h, k1);
    clamp(tmp);
    gather(t_mid, ys(tmp), lag, traj.times_, traj.states_, traj.derivs_, h);
    rhs(model, tmp, lag, k2);

    kern.axpy(tmp, s, 0.5 * h, k2);
    clamp(tmp);
    gather(t_mid, ys(tmp), lag, traj.times_, traj.states_, traj.derivs_, h);
    rhs(model, tmp, lag, k3);

    kern.axpy(tmp, s, h, k3);
    clamp(tmp);
    gather(t + h, ys(tmp), lag, traj.times_, traj.states_, traj.derivs_, h);
    rhs(model, tmp, lag, k4);

    kern.rk4_combine(s, s, h / 6.0, k1, k2, k3, k4);
    clamp(s);
    if (!all_finite(s)) {
      std::ostringstream os;
      os << "integration blow-up: nonfinite state at t = " << t_next;
      throw NumericalError(os.str());
    }

    traj.times_.push_back(t_next);
    traj.states_.insert(traj.states_.end(), s.begin(), s.end());
    gather(t_next, ys(s), lag, traj.times_, traj.states_, traj.derivs_, h);
    rhs(model, s, lag, k1);
    if (!all_finite(k1)) {
      std::ostringstream os;
      os << "integration blow-up: nonfinite derivative at t = " << t_next;
      throw NumericalError(os.str());
    }
    traj.derivs_.insert(traj.derivs_.end(), k1.begin(), k1.end());
  }
  return traj;
}

}  // namespace prionet
