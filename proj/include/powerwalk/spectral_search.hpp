#pragma once

// Search dynamics of U_t = W_t O_t restricted to the invariant subspace
// spanned by the uniform state and the non-real walk eigenvectors.
//
// In the walk eigenbasis the walk is diagonal and the oracle is a rank-1
// reflection about the target's coordinates, so one step costs O(N).

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "powerwalk/kernels.hpp"
#include "powerwalk/torus.hpp"

namespace powerwalk {

/// Walk eigenbasis picture of a search operator. Entry 0 is the phase-zero
/// starting state.
struct ReducedOperator {
  std::vector<double> overlap;             // target coordinates, real and >= 0
  std::vector<std::complex<double>> rotor; // walk eigenvalues e^{i theta}
  std::vector<double> gap;                 // 1 - cos(theta), accurate for small theta
  std::vector<double> weight;              // overlap^2

  std::int64_t dimension() const noexcept { return static_cast<std::int64_t>(overlap.size()); }
  /// Smallest positive walk eigenphase.
  double first_phase() const;
};

struct ReducedRun {
  std::vector<std::complex<double>> state;
  std::vector<double> trajectory;  // success probability after 0..steps iterations
  double probability = 0.0;        // after the last step
};

/// Applies `steps` iterations starting from the phase-zero state. With
/// `record`, the trajectory holds steps + 1 entries.
ReducedRun run_reduced(const ReducedOperator& op, std::int64_t steps, bool record = true);

/// Dense matrix of the reduced search operator. Refuses above the budget.
Eigen::MatrixXcd reduced_matrix(const ReducedOperator& op, std::int64_t budget);

/// With h = 1 - cos(alpha), the positive eigenphases of the search operator
/// solve  w_0 / h = sum_j w_j / (gap_j - h). The smallest one lies in
/// (0, theta_1) and is found by bisection.
double secular_alpha(const ReducedOperator& op);

/// Value of the secular function at h = 1 - cos(alpha). Positive below the
/// smallest eigenphase, negative between it and theta_1.
double secular_function(const ReducedOperator& op, double alpha);

/// Smallest positive eigenphase from a dense eigendecomposition.
double dense_alpha(const ReducedOperator& op, std::int64_t budget);

/// pi / (2 Q*) where Q* is the highest sample of the first peak of the success
/// trajectory, refined by a parabola through the three samples around it.
double trajectory_alpha(const ReducedOperator& op, double alpha_guess);

struct SpectralModel {
  TorusGrid grid{3};
  int t = 1;
  Vertex marked;
  double a0 = 0.0;
  ReducedOperator op;
  kernels::GridSumTerms sums;  // over the nonzero grid modes
  std::vector<std::string> warnings;

  std::int64_t vertex_count() const noexcept { return grid.vertex_count(); }
};

/// Builds the reduced model. Rejects even t. Even L is accepted with a
/// warning: the bipartite mode then contributes one eigenvector with phase pi.
SpectralModel build_model(const TorusGrid& grid, int t, Vertex marked = {});

enum class AlphaMethod { secular, dense, trajectory };

struct AlphaPair {
  double exact = 0.0;
  double estimate = 0.0;
};

inline constexpr std::int64_t kDefaultReducedBudget = 4096;

AlphaPair compute_alpha(const SpectralModel& model, AlphaMethod method = AlphaMethod::secular,
                        std::int64_t budget = kDefaultReducedBudget);

/// 1 / sqrt(sum_k (a_k^2 / a_0^2) / (1 - cos^t phi_k)).
double alpha_estimate(const SpectralModel& model);

struct Flagged {
  double value = 0.0;
  bool precondition_ok = true;
};

/// 1 - alpha^4 sum_k (a_k^2 / a_0^2) / (1 - cos^t phi_k)^2, flagged when
/// alpha >= theta_1 / 2.
Flagged overlap_ws(const SpectralModel& model, double alpha);

/// min(1 / sqrt(sum_k a_k^2 cot^2(theta_k / 2)), 1)
double overlap_wt(const SpectralModel& model);

/// Search quantities from explicit mode data: the phase-zero weight a_0^2 and,
/// per mode k != 0, the weight a_k^2 and 1 - cos(theta_k).
struct AbstractModes {
  double a0_sq = 0.0;
  std::vector<double> a_sq;
  std::vector<double> gap;
};

double abstract_alpha_estimate(const AbstractModes& modes);
double abstract_ws(const AbstractModes& modes, double alpha);
double abstract_wt(const AbstractModes& modes);

enum class Rounding { floor, nearest };

struct SearchOptions {
  Rounding rounding = Rounding::floor;
  double amplification_constant = 1.0;
  double amplification_threshold = 1.0 / 3.0;
  bool record_trajectory = false;
};

struct SearchResult {
  std::int64_t Q = 0;
  double p_s = 0.0;
  double p_bound = 0.0;  // cos^2(alpha) ws^2 wt^2
  std::int64_t rounds = 0;
  std::int64_t Q_O = 0;
  std::int64_t Q_G = 0;
  double alpha_exact = 0.0;
  double alpha_estimate = 0.0;
  double ws = 0.0;
  double wt = 0.0;
  bool precondition_ok = true;
  std::vector<double> trajectory;
};

std::int64_t iteration_count(double alpha, Rounding rounding);

/// Amplitude amplification round count, 0 when p_s already meets the threshold.
std::int64_t amplification_rounds(double p_s, const SearchOptions& options);

/// Runs the search for Q = floor(pi / (2 alpha)) steps and fills the query
/// counters: Q_O = (rounds + 1) Q, Q_G = t Q_O.
SearchResult success_probability(const SpectralModel& model, const SearchOptions& options = {});

/// Success-probability trajectory for Q = 0..steps.
std::vector<double> iterate_search(const SpectralModel& model, std::int64_t steps);

struct GridSums {
  double S1 = 0.0;
  double S2 = 0.0;
  double S3 = 0.0;
  double lower = 0.0;  // (1/t) sum 1/(1 - cos phi_k)
  double upper = 0.0;  // 8 sum_l l / (1 - exp(-4 l^2 t / N))
  double identity_residual = 0.0;  // |S3 - (1 - N + 2 S1)| / |S3|
  bool bounds_ok = false;
};

GridSums grid_sums(const TorusGrid& grid, int t);

/// Shell upper bound for S1.
double shell_upper_bound(const TorusGrid& grid, int t);

/// g_t = 1 - (1 - g)^t for g in (0, 1].
double spectral_gap_power(double g, int t);

/// Nearest odd integer, at least 1.
int nearest_odd(double x);

enum class TSchedule { fixed, log_n, sweep };

/// Walk lengths for an N-vertex instance. log_n gives nearest_odd(c ln N);
/// sweep gives every odd t up to it.
std::vector<int> t_values(TSchedule schedule, std::int64_t vertex_count, int fixed_t, double c = 1.0);

}  // namespace powerwalk
