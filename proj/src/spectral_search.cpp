#include "powerwalk/spectral_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace powerwalk {

namespace {

constexpr double kPi = std::numbers::pi;

double phase_from_gap(double gap) { return 2.0 * std::asin(std::sqrt(std::clamp(gap, 0.0, 2.0) / 2.0)); }

void push_entry(ReducedOperator& op, double overlap, double phase, double gap) {
  op.overlap.push_back(overlap);
  op.weight.push_back(overlap * overlap);
  op.rotor.push_back(std::polar(1.0, phase));
  op.gap.push_back(gap);
}

double min_active_gap(const ReducedOperator& op) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < op.gap.size(); ++j)
    if (op.weight[j] > 0.0) g = std::min(g, op.gap[j]);
  return g;
}

}  // namespace

double ReducedOperator::first_phase() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < gap.size(); ++j) g = std::min(g, gap[j]);
  return phase_from_gap(g);
}

ReducedRun run_reduced(const ReducedOperator& op, std::int64_t steps, bool record) {
  if (steps < 0) throw std::invalid_argument("step count must be >= 0");
  ReducedRun run;
  run.state.assign(op.overlap.size(), {0.0, 0.0});
  run.state[0] = 1.0;
  std::complex<double> amp = kernels::parallel::target_amplitude(run.state, op.overlap);
  if (record) {
    run.trajectory.reserve(static_cast<std::size_t>(steps) + 1);
    run.trajectory.push_back(std::norm(amp));
  }
  for (std::int64_t q = 0; q < steps; ++q) {
    amp = kernels::parallel::search_step(run.state, op.overlap, op.rotor, amp);
    if (record) run.trajectory.push_back(std::norm(amp));
  }
  run.probability = std::norm(amp);
  return run;
}

Eigen::MatrixXcd reduced_matrix(const ReducedOperator& op, std::int64_t budget) {
  const std::int64_t n = op.dimension();
  if (n > budget)
    throw BudgetExceeded("reduced dimension " + std::to_string(n) + " exceeds dense budget " +
                         std::to_string(budget));
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(op.overlap.data(), n);
  Eigen::MatrixXd reflect = Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose();
  Eigen::VectorXcd d = Eigen::Map<const Eigen::VectorXcd>(op.rotor.data(), n);
  return d.asDiagonal() * reflect.cast<std::complex<double>>();
}

double secular_function(const ReducedOperator& op, double alpha) {
  const double s = std::sin(alpha / 2.0);
  const double h = 2.0 * s * s;
  const std::span<const double> gaps(op.gap.data() + 1, op.gap.size() - 1);
  const std::span<const double> weights(op.weight.data() + 1, op.weight.size() - 1);
  return op.weight[0] / h - kernels::parallel::weighted_pole_sum(gaps, weights, h);
}

double secular_alpha(const ReducedOperator& op) {
  if (op.overlap.empty() || op.weight[0] <= 0.0) throw std::invalid_argument("degenerate model: a_0 = 0");
  const double g1 = min_active_gap(op);
  if (!std::isfinite(g1)) throw std::invalid_argument("degenerate model: all a_k = 0");
  const std::span<const double> gaps(op.gap.data() + 1, op.gap.size() - 1);
  const std::span<const double> weights(op.weight.data() + 1, op.weight.size() - 1);
  auto f = [&](double h) { return op.weight[0] / h - kernels::parallel::weighted_pole_sum(gaps, weights, h); };
  double lo = 0.0;
  double hi = g1;
  for (int it = 0; it < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return phase_from_gap(0.5 * (lo + hi));
}

double dense_alpha(const ReducedOperator& op, std::int64_t budget) {
  const Eigen::MatrixXcd u = reduced_matrix(op, budget);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("reduced eigendecomposition failed");
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) {
    const double phase = std::arg(solver.eigenvalues()[j]);
    if (phase > 1e-12) best = std::min(best, phase);
  }
  return best;
}

double trajectory_alpha(const ReducedOperator& op, double alpha_guess) {
  if (!(alpha_guess > 0.0)) throw std::invalid_argument("alpha guess must be positive");
  const auto limit = static_cast<std::int64_t>(std::ceil(3.0 * kPi / (2.0 * alpha_guess))) + 3;
  const ReducedRun run = run_reduced(op, limit, true);
  const std::vector<double>& p = run.trajectory;
  const double pmax = *std::max_element(p.begin(), p.end());
  // first peak region: from the first 0.9 pmax crossing until p falls below pmax / 2
  std::size_t i = 0;
  while (p[i] < 0.9 * pmax) ++i;
  for (std::size_t j = i + 1; j < p.size() && p[j] >= 0.5 * pmax; ++j)
    if (p[j] > p[i]) i = j;
  double peak = static_cast<double>(i);
  if (i > 0 && i + 1 < p.size()) {
    const double curv = p[i - 1] - 2.0 * p[i] + p[i + 1];
    if (curv < 0.0) peak += 0.5 * (p[i - 1] - p[i + 1]) / curv;
  }
  return kPi / (2.0 * std::max(peak, 0.5));
}

SpectralModel build_model(const TorusGrid& grid, int t, Vertex marked) {
  if (t < 1 || t % 2 == 0) throw std::invalid_argument("search requires a positive odd t, got " + std::to_string(t));
  if (!grid.contains(marked)) throw std::out_of_range("marked vertex outside the grid");
  SpectralModel model;
  model.grid = grid;
  model.t = t;
  model.marked = marked;
  const std::int64_t n = grid.vertex_count();
  const double nn = static_cast<double>(n);
  model.a0 = 1.0 / std::sqrt(nn);
  if (grid.bipartite())
    model.warnings.push_back("even L: bipartite mode adds a walk eigenvector with eigenvalue -1");

  ReducedOperator& op = model.op;
  op.overlap.reserve(static_cast<std::size_t>(2 * n));
  push_entry(op, model.a0, 0.0, 0.0);
  const double pair_overlap = 1.0 / std::sqrt(2.0 * nn);
  for (std::int64_t i = 1; i < n; ++i) {
    const double g = powered_gap(grid, grid.mode(i), t);
    if (g >= 2.0) {
      push_entry(op, model.a0, kPi, 2.0);
    } else {
      const double theta = phase_from_gap(g);
      push_entry(op, pair_overlap, theta, g);
      push_entry(op, pair_overlap, -theta, g);
    }
  }
  model.sums = kernels::parallel::grid_sum_terms(grid.side(), t);
  return model;
}

double alpha_estimate(const SpectralModel& model) {
  return 1.0 / std::sqrt(0.5 * model.sums.inverse_gap);
}

AlphaPair compute_alpha(const SpectralModel& model, AlphaMethod method, std::int64_t budget) {
  AlphaPair out;
  out.estimate = alpha_estimate(model);
  switch (method) {
    case AlphaMethod::secular:
      out.exact = secular_alpha(model.op);
      break;
    case AlphaMethod::dense:
      out.exact = dense_alpha(model.op, budget);
      break;
    case AlphaMethod::trajectory:
      out.exact = trajectory_alpha(model.op, out.estimate);
      break;
  }
  return out;
}

Flagged overlap_ws(const SpectralModel& model, double alpha) {
  const double a2 = alpha * alpha;
  return {1.0 - a2 * a2 * 0.5 * model.sums.inverse_gap_squared, alpha < model.op.first_phase() / 2.0};
}

double overlap_wt(const SpectralModel& model) {
  const double s = model.sums.cot_squared / (2.0 * static_cast<double>(model.vertex_count()));
  return s > 0.0 ? std::min(1.0 / std::sqrt(s), 1.0) : 1.0;
}

double abstract_alpha_estimate(const AbstractModes& modes) {
  if (!(modes.a0_sq > 0.0)) throw std::invalid_argument("degenerate model: a_0 = 0");
  kernels::CompensatedSum acc;
  for (std::size_t k = 0; k < modes.a_sq.size(); ++k) acc.add(modes.a_sq[k] / modes.a0_sq / modes.gap[k]);
  if (!(acc.value() > 0.0)) throw std::invalid_argument("degenerate model: all a_k = 0");
  return 1.0 / std::sqrt(acc.value());
}

double abstract_ws(const AbstractModes& modes, double alpha) {
  kernels::CompensatedSum acc;
  for (std::size_t k = 0; k < modes.a_sq.size(); ++k)
    acc.add(modes.a_sq[k] / modes.a0_sq / (modes.gap[k] * modes.gap[k]));
  const double a2 = alpha * alpha;
  return 1.0 - a2 * a2 * acc.value();
}

double abstract_wt(const AbstractModes& modes) {
  kernels::CompensatedSum acc;
  for (std::size_t k = 0; k < modes.a_sq.size(); ++k) {
    const double cot = 1.0 / std::tan(phase_from_gap(modes.gap[k]) / 2.0);
    acc.add(modes.a_sq[k] * cot * cot);
  }
  return acc.value() > 0.0 ? std::min(1.0 / std::sqrt(acc.value()), 1.0) : 1.0;
}

std::int64_t iteration_count(double alpha, Rounding rounding) {
  const double x = kPi / (2.0 * alpha);
  return rounding == Rounding::floor ? static_cast<std::int64_t>(std::floor(x)) : std::llround(x);
}

std::int64_t amplification_rounds(double p_s, const SearchOptions& options) {
  const double p = std::min(p_s, 1.0);
  if (p >= options.amplification_threshold) return 0;
  if (!(p > 0.0)) throw std::domain_error("success probability is zero");
  return static_cast<std::int64_t>(std::ceil(options.amplification_constant / std::sqrt(p)));
}

SearchResult success_probability(const SpectralModel& model, const SearchOptions& options) {
  SearchResult r;
  r.alpha_exact = secular_alpha(model.op);
  r.alpha_estimate = alpha_estimate(model);
  r.Q = iteration_count(r.alpha_exact, options.rounding);
  ReducedRun run = run_reduced(model.op, r.Q, options.record_trajectory);
  r.p_s = std::min(run.probability, 1.0);
  const Flagged ws = overlap_ws(model, r.alpha_exact);
  r.ws = ws.value;
  r.precondition_ok = ws.precondition_ok;
  r.wt = overlap_wt(model);
  const double c = std::cos(r.alpha_exact);
  r.p_bound = std::min(c * c * r.ws * r.ws * r.wt * r.wt, 1.0);
  r.rounds = amplification_rounds(r.p_s, options);
  r.Q_O = (r.rounds + 1) * r.Q;
  r.Q_G = model.t * r.Q_O;
  r.trajectory = std::move(run.trajectory);
  return r;
}

std::vector<double> iterate_search(const SpectralModel& model, std::int64_t steps) {
  return run_reduced(model.op, steps, true).trajectory;
}

double shell_upper_bound(const TorusGrid& grid, int t) {
  const double n = static_cast<double>(grid.vertex_count());
  kernels::CompensatedSum acc;
  for (int l = 1; l <= grid.side() / 2; ++l) acc.add(l / -std::expm1(-4.0 * l * l * t / n));
  return 8.0 * acc.value();
}

GridSums grid_sums(const TorusGrid& grid, int t) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  const kernels::GridSumTerms terms = kernels::parallel::grid_sum_terms(grid.side(), t);
  const kernels::GridSumTerms base = t == 1 ? terms : kernels::parallel::grid_sum_terms(grid.side(), 1);
  GridSums s;
  s.S1 = terms.inverse_gap;
  s.S2 = terms.inverse_gap_squared;
  s.S3 = terms.cot_squared;
  s.lower = base.inverse_gap / t;
  s.upper = shell_upper_bound(grid, t);
  const double n = static_cast<double>(grid.vertex_count());
  s.identity_residual = std::abs(s.S3 - (1.0 - n + 2.0 * s.S1)) / std::max(std::abs(s.S3), 1.0);
  s.bounds_ok = s.lower <= s.S1 && s.S1 <= s.upper;
  return s;
}

double spectral_gap_power(double g, int t) {
  if (!(g > 0.0 && g <= 1.0)) throw std::invalid_argument("spectral gap must lie in (0, 1]");
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  return g < 1.0 ? -std::expm1(t * std::log1p(-g)) : 1.0;
}

int nearest_odd(double x) {
  return std::max(1, 2 * static_cast<int>(std::llround((x - 1.0) / 2.0)) + 1);
}

std::vector<int> t_values(TSchedule schedule, std::int64_t vertex_count, int fixed_t, double c) {
  const int top = nearest_odd(c * std::log(static_cast<double>(vertex_count)));
  switch (schedule) {
    case TSchedule::fixed:
      return {fixed_t};
    case TSchedule::log_n:
      return {top};
    case TSchedule::sweep: {
      std::vector<int> out;
      for (int t = 1; t <= top; t += 2) out.push_back(t);
      return out;
    }
  }
  return {};
}

}  // namespace powerwalk
