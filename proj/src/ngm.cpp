#include "prionet/ngm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "prionet/errors.hpp"

namespace prionet {

double local_r0(const NetworkModel& model, std::size_t i) {
  const double a = model.alpha_total(i);
  if (!(a > 0.0)) {
    std::ostringstream os;
    os << "alpha_total is zero for neuron " << i + 1
       << ": the reproduction number needs every neuron to have positive outflow alpha_i";
    throw ModelError(os.str());
  }
  const auto& nrn = model.neuron(i);
  return model.d() * nrn.K / (nrn.mu * a);
}

NgmReport ngm_matrix(const NetworkModel& model) {
  const std::size_t n = model.size();
  const auto dim = static_cast<Eigen::Index>(n);
  NgmReport rep;
  rep.local_r0.resize(n);
  rep.v22.resize(n);
  rep.F = Eigen::MatrixXd::Zero(dim, dim);
  rep.m22 = Eigen::MatrixXd::Zero(dim, dim);

  for (std::size_t i = 0; i < n; ++i) {
    rep.local_r0[i] = local_r0(model, i);
    rep.v22[i] = model.alpha_total(i);
    const auto ii = static_cast<Eigen::Index>(i);
    const double dk = model.d() * model.neuron(i).K / model.neuron(i).mu;
    rep.m22(ii, ii) = dk;
    rep.F(ii, ii) = rep.local_r0[i];
    for (const auto& in : model.incoming(i)) {
      const auto jj = static_cast<Eigen::Index>(in.from);
      rep.m22(ii, jj) = dk * in.weight;
      rep.F(ii, jj) = in.weight * rep.local_r0[i];
    }
  }

  rep.row_sums.resize(n);
  for (std::size_t i = 0; i < n; ++i) rep.row_sums[i] = rep.F.row(static_cast<Eigen::Index>(i)).sum();
  rep.min_row_sum = *std::min_element(rep.row_sums.begin(), rep.row_sums.end());
  rep.max_row_sum = *std::max_element(rep.row_sums.begin(), rep.row_sums.end());
  rep.ee_certificate = rep.min_row_sum > 1.0;
  return rep;
}

namespace {

bool is_triangular(const Eigen::MatrixXd& A) {
  bool upper_zero = true;
  bool lower_zero = true;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (A(i, j) == 0.0) continue;
      if (j > i) upper_zero = false;
      if (j < i) lower_zero = false;
    }
  }
  return upper_zero || lower_zero;
}

// Tarjan's algorithm on the pattern i -> j whenever A(i, j) != 0.
std::vector<std::vector<Eigen::Index>> strong_components(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack;
  std::vector<std::vector<Eigen::Index>> comps;
  int counter = 0;

  std::function<void(Eigen::Index)> visit = [&](Eigen::Index v) {
    const auto vs = static_cast<std::size_t>(v);
    index[vs] = low[vs] = counter++;
    stack.push_back(v);
    on_stack[vs] = true;
    for (Eigen::Index w = 0; w < n; ++w) {
      if (w == v || A(v, w) == 0.0) continue;
      const auto ws = static_cast<std::size_t>(w);
      if (index[ws] < 0) {
        visit(w);
        low[vs] = std::min(low[vs], low[ws]);
      } else if (on_stack[ws]) {
        low[vs] = std::min(low[vs], index[ws]);
      }
    }
    if (low[vs] == index[vs]) {
      std::vector<Eigen::Index> comp;
      Eigen::Index w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (Eigen::Index v = 0; v < n; ++v) {
    if (index[static_cast<std::size_t>(v)] < 0) visit(v);
  }
  return comps;
}

// Irreducible block: iterate on B = A + I, which is primitive, so the
// Collatz-Wielandt bounds min/max (Bv)_i / v_i close in on rho(A) + 1.
double perron_root_irreducible(const Eigen::MatrixXd& A, std::mt19937_64& rng) {
  constexpr int kMaxIterations = 100000;
  const Eigen::Index n = A.rows();
  std::uniform_real_distribution<double> start(0.5, 1.5);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = start(rng);
  v /= v.sum();

  Eigen::VectorXd w(n);
  for (int it = 0; it < kMaxIterations; ++it) {
    w.noalias() = A * v;
    w += v;
    double lo = w(0) / v(0);
    double hi = lo;
    for (Eigen::Index i = 1; i < n; ++i) {
      const double r = w(i) / v(i);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (hi - lo <= 1e-12 * std::max(1.0, hi)) return 0.5 * (lo + hi) - 1.0;
    v = w / w.sum();
  }
  throw NumericalError("spectral radius: power iteration did not converge");
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& F, std::uint64_t seed) {
  if (F.rows() != F.cols()) throw std::invalid_argument("spectral radius: matrix must be square");
  for (Eigen::Index i = 0; i < F.rows(); ++i) {
    for (Eigen::Index j = 0; j < F.cols(); ++j) {
      if (!std::isfinite(F(i, j)) || F(i, j) < 0.0)
        throw std::invalid_argument("spectral radius: entries must be finite and nonnegative");
    }
  }
  if (F.rows() == 0) return 0.0;
  if (is_triangular(F)) return F.diagonal().maxCoeff();

  std::mt19937_64 rng(seed);
  double rho = 0.0;
  for (const auto& comp : strong_components(F)) {
    if (comp.size() == 1) {
      rho = std::max(rho, F(comp[0], comp[0]));
      continue;
    }
    const auto m = static_cast<Eigen::Index>(comp.size());
    Eigen::MatrixXd block(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) {
        block(a, b) = F(comp[static_cast<std::size_t>(a)], comp[static_cast<std::size_t>(b)]);
      }
    }
    rho = std::max(rho, perron_root_irreducible(block, rng));
  }
  return rho;
}

NgmReport compute_r0(const NetworkModel& model, std::uint64_t seed) {
  NgmReport rep = ngm_matrix(model);
  rep.r0 = spectral_radius(rep.F, seed);
  return rep;
}

std::pair<double, double> two_neuron_lambda(const NetworkModel& model) {
  if (model.size() != 2) throw ModelError("two-neuron eigenvalues require exactly 2 neurons");
  const NgmReport rep = ngm_matrix(model);
  const double r1 = rep.F(0, 0);
  const double r2 = rep.F(1, 1);
  const double disc = (r1 - r2) * (r1 - r2) + 4.0 * rep.F(0, 1) * rep.F(1, 0);
  const double root = std::sqrt(disc);
  return {0.5 * (r1 + r2 + root), 0.5 * (r1 + r2 - root)};
}

double homogeneous_r0(double local_r0, double kappa, double alpha) {
  return local_r0 * (kappa * alpha + 1.0);
}

}  // namespace prionet
