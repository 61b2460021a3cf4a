#include "prionet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "prionet/analysis.hpp"
#include "prionet/config.hpp"
#include "prionet/dde.hpp"
#include "prionet/errors.hpp"
#include "prionet/kernels.hpp"
#include "prionet/ngm.hpp"

namespace prionet::cli {

namespace {

struct Source {
  std::string model_path;
  std::string preset_name;
};

struct Loaded {
  std::string label;
  NetworkModel model;
  InitialData initial;
};

void add_source(CLI::App* cmd, Source& src) {
  auto* m = cmd->add_option("--model", src.model_path, "model file");
  auto* p = cmd->add_option("--preset", src.preset_name, "built-in preset name");
  m->excludes(p);
  p->excludes(m);
}

Loaded load(const Source& src) {
  if (!src.preset_name.empty()) {
    Preset p = preset(src.preset_name);
    return Loaded{p.name, std::move(p.model), std::move(p.initial)};
  }
  if (src.model_path.empty()) throw CLI::ValidationError("one of --model or --preset is required");
  NetworkModel m = load_model(src.model_path);
  InitialData init = InitialData::standard(m);
  return Loaded{src.model_path, std::move(m), std::move(init)};
}

std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

// Destination for machine payloads; "-" is standard output.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& stdout_stream) : path_(path) {
    if (path == "-") {
      stream_ = &stdout_stream;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

  // Runs `write` against the stream, attaching the path to any failure.
  template <class F>
  void write(F&& fn) {
    try {
      fn(*stream_);
      stream_->flush();
      if (!*stream_) throw std::runtime_error("write failed");
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("'" + path_ + "': " + e.what());
    }
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::vector<double> parse_list(const std::string& text, std::size_t n, const char* flag) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(flag) + ": invalid number '" + item + "'");
    }
  }
  if (vals.size() == 1) vals.assign(n, vals.front());
  if (vals.size() != n) {
    throw CLI::ValidationError(std::string(flag) + ": expected 1 or " + std::to_string(n) + " values");
  }
  return vals;
}

bool report_violations(const std::vector<Violation>& v, std::ostream& err) {
  for (const auto& e : v) err << "violation: " << e.field << ": " << e.message << '\n';
  return !v.empty();
}

int cmd_r0(const Source& src, std::uint64_t seed, const std::string& out_path, std::ostream& stdout_stream,
           std::ostream& err) {
  const Loaded l = load(src);
  const auto violations = validate(l.model, true);
  if (report_violations(violations, err)) {
    const bool zero_alpha = std::any_of(violations.begin(), violations.end(), [](const Violation& v) {
      return v.message.rfind("alpha_total(", 0) == 0;
    });
    if (zero_alpha) {
      err << "R0 is defined only when every neuron has positive total outflow alpha_i; "
             "the next-generation matrix needs V = diag(alpha_i) to be invertible\n";
    }
    return kModelError;
  }
  const NgmReport rep = compute_r0(l.model, seed);
  const std::size_t n = l.model.size();
  Sink sink(out_path, stdout_stream);
  std::ostream& out = sink.stream();
  out << "model = " << l.label << '\n';
  out << "neurons = " << n << '\n';
  for (std::size_t i = 0; i < n; ++i) out << "local_R0[" << i + 1 << "] = " << fixed4(rep.local_r0[i]) << '\n';
  out << "F =\n";
  for (Eigen::Index i = 0; i < rep.F.rows(); ++i) {
    out << ' ';
    for (Eigen::Index j = 0; j < rep.F.cols(); ++j) out << ' ' << fixed4(rep.F(i, j));
    out << '\n';
  }
  out << "R0 = " << fixed4(rep.r0) << '\n';
  out << "R0_full = " << format_full(rep.r0) << '\n';
  out << "min_row_sum = " << fixed4(rep.min_row_sum) << '\n';
  out << "max_row_sum = " << fixed4(rep.max_row_sum) << '\n';
  out << "certificate = " << (rep.ee_certificate ? "true" : "false") << '\n';
  return kOk;
}

struct SimulateArgs {
  double horizon = 300.0;
  std::optional<double> step;
  std::string out_path;
  std::size_t stride = 1;
  std::string x0, y0;
  ClassifyOptions classify;
};

int cmd_simulate(const Source& src, const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  Loaded l = load(src);
  if (report_violations(validate(l.model, false), err)) return kModelError;
  const std::size_t n = l.model.size();
  if (!a.x0.empty()) l.initial.x0 = parse_list(a.x0, n, "--x0");
  if (!a.y0.empty()) l.initial.y_history = parse_list(a.y0, n, "--y0");
  if (report_violations(validate(l.initial, n), err)) return kModelError;

  const Trajectory traj = integrate(l.model, l.initial, a.horizon, a.step);
  std::ostream* report = &out;
  if (!a.out_path.empty()) {
    Sink sink(a.out_path, out);
    sink.write([&](std::ostream& os) { write_csv(traj, a.stride, os); });
    if (a.out_path == "-") report = &err;
  }
  const auto rep = classify(traj, a.classify);
  std::ostream& r = *report;
  r << "model = " << l.label << '\n';
  r << "horizon = " << format_number(traj.horizon()) << '\n';
  r << "step = " << format_full(traj.step()) << '\n';
  r << "nodes = " << traj.node_count() << '\n';
  r << "classification = " << to_string(rep.classification) << '\n';
  r << "window = [" << format_number(rep.window_start) << ", " << format_number(rep.window_end) << "]\n";
  for (std::size_t i = 0; i < n; ++i) {
    r << "neuron " << i + 1 << ": mean_y = " << fixed4(rep.mean[i]) << " amplitude = " << fixed4(rep.amplitude[i])
      << " floor = " << format_full(rep.persistence_floor[i])
      << " oscillating = " << (rep.oscillating[i] ? "yes" : "no") << '\n';
  }
  if (traj.significant_clamps() > 0) {
    err << "warning: " << traj.significant_clamps() << " negative undershoots above 1e-9 were clamped (max "
        << format_full(traj.max_clamp()) << ")\n";
  }
  return kOk;
}

void print_point(std::ostream& out, const char* key, const std::vector<double>& p, std::size_t n) {
  out << key << " = ";
  for (std::size_t i = 0; i < n; ++i) {
    out << (i ? " " : "") << "(x_" << i + 1 << "=" << format_full(p[i]) << ", y_" << i + 1 << "="
        << format_full(p[n + i]) << ")";
  }
  out << '\n';
}

int cmd_equilibrium(const Source& src, const std::string& out_path, std::ostream& stdout_stream,
                    std::ostream& err) {
  const Loaded l = load(src);
  if (report_violations(validate(l.model, true), err)) return kModelError;
  Sink sink(out_path, stdout_stream);
  std::ostream& out = sink.stream();
  const std::size_t n = l.model.size();
  const auto d = dfe_equilibrium(l.model);
  out << "model = " << l.label << '\n';
  print_point(out, "dfe", d.point, n);
  out << "dfe_residual = " << format_full(d.residual) << '\n';
  const auto ee = endemic_equilibrium(l.model);
  if (!ee.converged) {
    out << "no endemic equilibrium found (" << ee.starts << " starts)\n";
    return kOk;
  }
  print_point(out, "endemic", ee.point, n);
  out << "endemic_residual = " << format_full(ee.residual) << '\n';
  out << "iterations = " << ee.iterations << '\n';
  out << "distinct_roots = " << ee.distinct_roots << '\n';
  if (ee.distinct_roots > 1) out << "note: multiple distinct endemic roots were found\n";
  return kOk;
}

struct SweepArgs {
  std::string param = "kappa";
  double from = 0.055;
  double to = 0.1;
  std::size_t points = 90;
  double horizon = 200.0;
  std::string out_path;
  std::size_t threads = 0;
};

int cmd_sweep(const Source& src, const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (a.param != "kappa") throw CLI::ValidationError("--param: only 'kappa' can be swept");
  const Loaded l = load(src);
  if (report_violations(validate(l.model, false), err)) return kModelError;
  SweepOptions opts;
  opts.from = a.from;
  opts.to = a.to;
  opts.points = a.points;
  opts.horizon = a.horizon;
  opts.initial = l.initial;
  opts.threads = a.threads;
  const SweepResult res = kappa_sweep(l.model, opts);

  std::ostream* report = &out;
  if (!a.out_path.empty()) {
    Sink sink(a.out_path, out);
    sink.write([&](std::ostream& os) { write_sweep_csv(res, os); });
    if (a.out_path == "-") report = &err;
  }
  std::ostream& r = *report;
  r << "model = " << l.label << '\n';
  r << "points = " << res.grid.size() << '\n';
  for (std::size_t i = 0; i < l.model.size(); ++i) {
    r << "onset[" << i + 1 << "] = " << (res.onset[i] ? fixed4(*res.onset[i]) : std::string("none")) << '\n';
  }
  std::size_t failures = 0;
  for (std::size_t j = 0; j < res.errors.size(); ++j) {
    if (res.errors[j].empty()) continue;
    ++failures;
    err << "grid point " << j << " (kappa = " << format_number(res.grid[j]) << "): " << res.errors[j] << '\n';
  }
  return failures == 0 ? kOk : kNumericalFailure;
}

int cmd_preset(const std::string& name, const std::string& out_path, bool list, std::ostream& out) {
  if (list) {
    for (const auto& p : preset_names()) out << p << '\n';
    return kOk;
  }
  if (name.empty()) throw CLI::ValidationError("--name is required");
  const Preset p = preset(name);
  Sink sink(out_path, out);
  sink.write([&](std::ostream& os) { os << "# preset " << p.name << ": " << p.description << '\n' << emit_model(p.model); });
  return kOk;
}

int cmd_validate(const Source& src, bool strict, const std::string& out_path, std::ostream& stdout_stream,
                 std::ostream& err) {
  const Loaded l = load(src);
  if (report_violations(validate(l.model, strict), err)) return kModelError;
  Sink sink(out_path, stdout_stream);
  std::ostream& out = sink.stream();
  out << "ok: " << l.label << " (" << l.model.size() << " neurons, " << l.model.edges().size() << " edges"
      << (strict ? ", strict" : "") << ")\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delayed prion spread on neuron networks"};
  app.name("prionet");
  app.require_subcommand(1);

  Source src;
  std::uint64_t seed = kDefaultSeed;

  auto* r0 = app.add_subcommand("r0", "next-generation matrix and basic reproduction number");
  add_source(r0, src);
  r0->add_option("--seed", seed, "seed for the power-iteration start vector");
  std::string report_path = "-";
  r0->add_option("--out", report_path, "report path, '-' for stdout");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "integrate the delayed system and classify the outcome");
  add_source(simulate, src);
  simulate->add_option("--horizon", sim.horizon, "final time")->check(CLI::PositiveNumber);
  simulate->add_option("--step", sim.step, "RK4 step (default min(T/20, 0.01))");
  simulate->add_option("--out", sim.out_path, "trajectory CSV path, '-' for stdout");
  simulate->add_option("--stride", sim.stride, "write every stride-th node")->check(CLI::PositiveNumber);
  simulate->add_option("--x0", sim.x0, "initial x, one value or comma list");
  simulate->add_option("--y0", sim.y0, "constant history for y, one value or comma list");
  simulate->add_option("--window", sim.classify.window_fraction, "analysed fraction of the horizon");
  simulate->add_option("--tol-extinct", sim.classify.tol_extinct, "extinction tolerance");
  simulate->add_option("--tol-osc", sim.classify.tol_osc, "relative oscillation threshold");

  auto* equilibrium = app.add_subcommand("equilibrium", "disease-free and endemic equilibria");
  add_source(equilibrium, src);
  equilibrium->add_option("--out", report_path, "report path, '-' for stdout");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "oscillation amplitudes over a kappa grid");
  add_source(sweep, src);
  sweep->add_option("--param", sw.param, "swept parameter (kappa)");
  sweep->add_option("--from", sw.from, "grid start");
  sweep->add_option("--to", sw.to, "grid end");
  sweep->add_option("--points", sw.points, "grid size");
  sweep->add_option("--horizon", sw.horizon, "integration horizon per point")->check(CLI::PositiveNumber);
  sweep->add_option("--out", sw.out_path, "amplitude CSV path, '-' for stdout");
  sweep->add_option("--threads", sw.threads, "worker threads (default all cores, capped by PRIONET_THREADS)");

  std::string preset_name, preset_out = "-";
  bool preset_list = false;
  auto* preset_cmd = app.add_subcommand("preset", "emit a built-in preset as a model file");
  preset_cmd->add_option("--name", preset_name, "preset name");
  preset_cmd->add_option("--out", preset_out, "output path, '-' for stdout");
  preset_cmd->add_flag("--list", preset_list, "list preset names");

  bool strict = false;
  auto* validate_cmd = app.add_subcommand("validate", "check a model against its constraints");
  add_source(validate_cmd, src);
  validate_cmd->add_option("--out", report_path, "report path, '-' for stdout");
  validate_cmd->add_flag("--strict", strict, "also require sum of incoming kappa <= 1 and alpha_i > 0");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (r0->parsed()) return cmd_r0(src, seed, report_path, out, err);
    if (simulate->parsed()) return cmd_simulate(src, sim, out, err);
    if (equilibrium->parsed()) return cmd_equilibrium(src, report_path, out, err);
    if (sweep->parsed()) return cmd_sweep(src, sw, out, err);
    if (preset_cmd->parsed()) return cmd_preset(preset_name, preset_out, preset_list, out);
    if (validate_cmd->parsed()) return cmd_validate(src, strict, report_path, out, err);
    return kUsageError;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return kModelError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace prionet::cli
