#include "prionet/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "prionet/errors.hpp"
#include "prionet/ngm.hpp"

namespace prionet {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

}  // namespace

double equilibrium_residual(const NetworkModel& model, std::span<const double> point) {
  const std::size_t n = model.size();
  const auto f = rhs(model, point, point.subspan(n, n));
  return max_abs(f);
}

EquilibriumResult dfe_equilibrium(const NetworkModel& model) {
  EquilibriumResult res;
  res.kind = EquilibriumKind::dfe;
  res.point = dfe(model);
  res.residual = equilibrium_residual(model, res.point);
  res.converged = true;
  return res;
}

std::vector<double> reduced_system(const NetworkModel& model, std::span<const double> y) {
  const std::size_t n = model.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nrn = model.neuron(i);
    const double S = model.infection_pressure(i, y);
    const double dS = model.d() * S;
    g[i] = model.d() * nrn.K * model.hill()(y[i]) * S / (nrn.mu + dS) - model.alpha_total(i) * y[i];
  }
  return g;
}

std::vector<double> recover_x(const NetworkModel& model, std::span<const double> y) {
  const std::size_t n = model.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nrn = model.neuron(i);
    x[i] = nrn.K * model.hill()(y[i]) / (nrn.mu + model.d() * model.infection_pressure(i, y));
  }
  return x;
}

EeBox ee_box(const NetworkModel& model) {
  const NgmReport rep = ngm_matrix(model);
  EeBox box;
  double bound = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) bound = std::max(bound, boundedness_bound(model, i));
  box.upper = 2.0 * bound;
  if (!rep.ee_certificate) return box;

  std::vector<double> probe(model.size());
  for (double eps = 1e-3; eps >= 1e-16; eps /= 10.0) {
    std::fill(probe.begin(), probe.end(), eps);
    const auto g = reduced_system(model, probe);
    if (std::all_of(g.begin(), g.end(), [](double v) { return v > 0.0; })) {
      box.epsilon = eps;
      box.heuristic = false;
      return box;
    }
  }
  return box;
}

namespace {

struct NewtonOutcome {
  std::vector<double> y;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool ok = false;
};

constexpr int kNewtonMaxIterations = 100;
constexpr int kMaxHalvings = 30;
constexpr double kFdRelative = 1e-6;

NewtonOutcome newton(const NetworkModel& model, std::vector<double> y) {
  const std::size_t n = model.size();
  const auto dim = static_cast<Eigen::Index>(n);
  NewtonOutcome out;
  auto g = reduced_system(model, y);
  double r = max_abs(g);
  Eigen::MatrixXd J(dim, dim);
  Eigen::VectorXd rhs_vec(dim);
  std::vector<double> probe(n), trial(n);

  int it = 0;
  for (; it < kNewtonMaxIterations && r > 1e-12; ++it) {
    for (std::size_t j = 0; j < n; ++j) {
      const double delta = kFdRelative * std::max(std::abs(y[j]), 1e-6);
      probe = y;
      probe[j] = y[j] + delta;
      const auto gp = reduced_system(model, probe);
      probe[j] = y[j] - delta;
      const auto gm = reduced_system(model, probe);
      for (std::size_t i = 0; i < n; ++i) {
        J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (gp[i] - gm[i]) / (2.0 * delta);
      }
    }
    for (std::size_t i = 0; i < n; ++i) rhs_vec(static_cast<Eigen::Index>(i)) = -g[i];
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible()) break;
    const Eigen::VectorXd dy = lu.solve(rhs_vec);

    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, lambda *= 0.5) {
      bool positive = true;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = y[i] + lambda * dy(static_cast<Eigen::Index>(i));
        if (!(trial[i] > 0.0)) positive = false;
      }
      if (!positive) continue;
      auto gt = reduced_system(model, trial);
      const double rt = max_abs(gt);
      if (rt < r) {
        y = trial;
        g = std::move(gt);
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.iterations = it;
  out.residual = r;
  out.y = std::move(y);
  out.ok = std::isfinite(r);
  return out;
}

std::vector<std::vector<double>> start_points(const NetworkModel& model, const EeBox& box,
                                              const std::optional<std::vector<double>>& user) {
  const std::size_t n = model.size();
  std::vector<std::vector<double>> starts;
  if (user) {
    if (user->size() != n) throw ModelError("start guess must have one value per neuron");
    starts.push_back(*user);
  }

  const double lo = std::log(box.epsilon);
  const double hi = std::log(box.upper);

  // symmetric start: root of sum_i G_i(s 1) along the diagonal, if bracketed
  auto diag = [&](double s) {
    const std::vector<double> v(n, s);
    const auto g = reduced_system(model, v);
    return std::accumulate(g.begin(), g.end(), 0.0);
  };
  double a = box.epsilon, b = box.upper;
  double sym = std::exp(0.5 * (lo + hi));
  if (diag(a) > 0.0 && diag(b) < 0.0) {
    for (int k = 0; k < 200 && (b - a) > 1e-14 * b; ++k) {
      const double m = 0.5 * (a + b);
      (diag(m) > 0.0 ? a : b) = m;
    }
    sym = 0.5 * (a + b);
  }
  starts.emplace_back(n, sym);

  const double levels[3] = {std::exp(lo + (hi - lo) / 6.0), std::exp(0.5 * (lo + hi)),
                            std::exp(lo + 5.0 * (hi - lo) / 6.0)};
  const std::size_t digits = std::min<std::size_t>(n, 6);
  std::size_t count = 1;
  for (std::size_t k = 0; k < digits; ++k) count *= 3;
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<std::size_t> digit(digits);
    std::size_t c = code;
    for (std::size_t k = 0; k < digits; ++k) {
      digit[k] = c % 3;
      c /= 3;
    }
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = levels[digit[i % digits]];
    starts.push_back(std::move(s));
  }
  return starts;
}

}  // namespace

EquilibriumResult endemic_equilibrium(const NetworkModel& model,
                                      std::optional<std::vector<double>> start) {
  const std::size_t n = model.size();
  const EeBox box = ee_box(model);
  const auto starts = start_points(model, box, start);

  EquilibriumResult best;
  best.kind = EquilibriumKind::endemic;
  best.residual = std::numeric_limits<double>::infinity();
  best.starts = starts.size();
  std::vector<std::vector<double>> roots;
  const double positivity = 1e-8;

  for (const auto& s : starts) {
    auto out = newton(model, s);
    if (!out.ok) continue;
    if (*std::min_element(out.y.begin(), out.y.end()) <= positivity) continue;

    std::vector<double> point = recover_x(model, out.y);
    point.insert(point.end(), out.y.begin(), out.y.end());
    const double residual = equilibrium_residual(model, point);
    if (!(residual < 1e-10)) continue;

    const double scale = 1.0 + max_abs(out.y);
    const bool seen = std::any_of(roots.begin(), roots.end(), [&](const std::vector<double>& r) {
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(r[i] - out.y[i]));
      return diff <= 1e-6 * scale;
    });
    if (!seen) roots.push_back(out.y);

    if (residual < best.residual) {
      best.point = std::move(point);
      best.residual = residual;
      best.iterations = out.iterations;
      best.converged = true;
    }
  }
  best.distinct_roots = roots.size();
  if (!best.converged) best.point.clear();
  return best;
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::extinct:
      return "extinct";
    case Classification::endemic_steady:
      return "endemic-steady";
    case Classification::oscillating:
      return "oscillating";
    case Classification::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

AsymptoticsReport classify(const Trajectory& traj, const ClassifyOptions& opts) {
  const double end = traj.horizon();
  return classify_window(traj, end * (1.0 - opts.window_fraction), end, opts);
}

AsymptoticsReport classify_window(const Trajectory& traj, double t_start, double t_end,
                                  const ClassifyOptions& opts) {
  const std::size_t n = traj.neurons();
  const auto& times = traj.times();
  const auto first = static_cast<std::size_t>(
      std::lower_bound(times.begin(), times.end(), t_start) - times.begin());
  const auto last_it = std::upper_bound(times.begin(), times.end(), t_end);
  if (first >= times.size() || last_it == times.begin() ||
      static_cast<std::size_t>(last_it - times.begin()) <= first) {
    throw std::invalid_argument("classification window contains no grid nodes");
  }
  const auto last = static_cast<std::size_t>(last_it - times.begin()) - 1;
  const std::size_t count = last - first + 1;

  AsymptoticsReport rep;
  rep.window_start = times[first];
  rep.window_end = times[last];
  std::vector<double> lo(2 * n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(2 * n, -std::numeric_limits<double>::infinity());
  std::vector<double> sum(2 * n, 0.0);
  for (std::size_t k = first; k <= last; ++k) {
    const auto s = traj.state(k);
    for (std::size_t c = 0; c < 2 * n; ++c) {
      lo[c] = std::min(lo[c], s[c]);
      hi[c] = std::max(hi[c], s[c]);
      sum[c] += s[c];
    }
  }

  rep.amplitude.resize(n);
  rep.mean.resize(n);
  rep.persistence_floor.resize(n);
  rep.peak.resize(n);
  rep.oscillating.resize(n);
  double late_max = 0.0;
  bool any_osc = false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = n + i;
    rep.amplitude[i] = hi[c] - lo[c];
    rep.mean[i] = sum[c] / static_cast<double>(count);
    rep.persistence_floor[i] = lo[c];
    rep.peak[i] = hi[c];
    rep.oscillating[i] = rep.amplitude[i] > opts.tol_osc * (1.0 + rep.mean[i]);
    any_osc = any_osc || rep.oscillating[i];
    late_max = std::max(late_max, hi[c]);
  }
  const auto s0 = traj.state(first);
  const auto s1 = traj.state(last);
  for (std::size_t c = 0; c < 2 * n; ++c) {
    const double mean = sum[c] / static_cast<double>(count);
    rep.max_drift = std::max(rep.max_drift, std::abs(s1[c] - s0[c]) / (1.0 + std::abs(mean)));
  }

  if (late_max < opts.tol_extinct) {
    rep.classification = Classification::extinct;
  } else if (any_osc) {
    rep.classification = Classification::oscillating;
  } else if (rep.max_drift < opts.tol_osc) {
    rep.classification = Classification::endemic_steady;
  } else {
    rep.classification = Classification::undetermined;
  }
  return rep;
}

std::vector<double> persistence_floor(const Trajectory& traj, double t_start, double t_end) {
  const std::size_t n = traj.neurons();
  std::vector<double> floor(n, std::numeric_limits<double>::infinity());
  bool any = false;
  for (std::size_t k = 0; k < traj.node_count(); ++k) {
    const double t = traj.time(k);
    if (t < t_start || t > t_end) continue;
    any = true;
    for (std::size_t i = 0; i < n; ++i) floor[i] = std::min(floor[i], traj.y(k, i));
  }
  if (!any) throw std::invalid_argument("persistence window contains no grid nodes");
  return floor;
}

std::size_t sweep_threads(std::size_t requested) {
  std::size_t count = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PRIONET_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) count = std::min(count, static_cast<std::size_t>(v));
  }
  return count;
}

namespace {

struct PointEval {
  std::vector<double> amplitude;
  std::vector<bool> oscillating;
  std::string error;
};

PointEval evaluate_kappa(const NetworkModel& model, double kappa, const SweepOptions& opts) {
  const std::size_t n = model.size();
  PointEval ev;
  try {
    const NetworkModel m = opts.edges.empty() ? model.with_kappa(kappa)
                                              : model.with_kappa(kappa, opts.edges);
    const InitialData init = opts.initial.value_or(InitialData::standard(m));
    const double H = opts.horizon;
    const auto traj = integrate(m, init, 4.0 * H, opts.step);
    const double frac = opts.classify.window_fraction;
    ev.oscillating.assign(n, true);
    for (const double end : {H, 2.0 * H, 4.0 * H}) {
      const auto rep = classify_window(traj, end * (1.0 - frac), end, opts.classify);
      for (std::size_t i = 0; i < n; ++i) ev.oscillating[i] = ev.oscillating[i] && rep.oscillating[i];
      ev.amplitude = rep.amplitude;
    }
  } catch (const std::exception& e) {
    ev.amplitude.assign(n, std::numeric_limits<double>::quiet_NaN());
    ev.oscillating.assign(n, false);
    ev.error = e.what();
  }
  return ev;
}

}  // namespace

SweepResult kappa_sweep(const NetworkModel& model, const SweepOptions& opts) {
  if (!(opts.from >= 0.0 && opts.to <= 1.0 && opts.from <= opts.to))
    throw ModelError("kappa sweep range must satisfy 0 <= from <= to <= 1");
  if (opts.points < 2) throw ModelError("kappa sweep needs at least 2 points");
  for (std::size_t k : opts.edges) {
    if (k >= model.edges().size()) throw ModelError("swept edge index out of range");
  }

  const std::size_t n = model.size();
  const std::size_t P = opts.points;
  SweepResult res;
  res.grid.resize(P);
  for (std::size_t j = 0; j < P; ++j) {
    res.grid[j] = opts.from + (opts.to - opts.from) * static_cast<double>(j) / static_cast<double>(P - 1);
  }
  res.grid.back() = opts.to;

  std::vector<PointEval> evals(P);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < P; j = next++) evals[j] = evaluate_kappa(model, res.grid[j], opts);
  };
  const std::size_t workers = std::min(sweep_threads(opts.threads), P);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  res.amplitude.resize(P);
  res.oscillating.resize(P);
  res.errors.resize(P);
  for (std::size_t j = 0; j < P; ++j) {
    res.amplitude[j] = evals[j].amplitude;
    res.oscillating[j] = evals[j].oscillating;
    res.errors[j] = evals[j].error;
  }

  // Onsets: refine the first off->on transition of each neuron by bisection.
  std::map<double, std::vector<bool>> cache;
  for (std::size_t j = 0; j < P; ++j) cache[res.grid[j]] = res.oscillating[j];
  auto flags_at = [&](double kappa) -> const std::vector<bool>& {
    auto it = cache.find(kappa);
    if (it == cache.end()) it = cache.emplace(kappa, evaluate_kappa(model, kappa, opts).oscillating).first;
    return it->second;
  };

  res.onset.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    if (res.oscillating[0][i]) {
      res.onset[i] = res.grid[0];
      continue;
    }
    for (std::size_t j = 1; j < P; ++j) {
      if (!res.oscillating[j][i]) continue;
      double lo = res.grid[j - 1];
      double hi = res.grid[j];
      while (hi - lo > opts.onset_width) {
        const double mid = 0.5 * (lo + hi);
        (flags_at(mid)[i] ? hi : lo) = mid;
      }
      res.onset[i] = 0.5 * (lo + hi);
      break;
    }
  }
  return res;
}

}  // namespace prionet
