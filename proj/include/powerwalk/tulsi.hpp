#pragma once

// Ancilla-controlled search. The walk gains an extra eigenvalue -1 block on
// the ancilla |1> half and the oracle reflects about |psi_m>|delta>, with
// |delta> = cos(delta)|0> + sin(delta)|1>.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "powerwalk/full_walk.hpp"
#include "powerwalk/spectral_search.hpp"

namespace powerwalk {

struct TulsiModel {
  SpectralModel base;
  double delta = 0.0;
  double a_pi = 0.0;  // sin(delta)
  ReducedOperator op;  // base entries scaled by cos(delta), then the extra phase-pi entry

  double tan2_delta() const {
    const double t = std::tan(delta);
    return t * t;
  }
  /// a_0(delta)^2 = cos^2(delta) / N
  double a0_squared() const;
};

/// Rejects delta outside [0, pi/2).
TulsiModel build_tulsi(const SpectralModel& base, double delta);

/// a_0(delta) / sqrt(sum_k a_k^2(delta) / (1 - cos^t phi_k) + a_pi^2 / 4)
double compute_alpha_delta(const TulsiModel& tm);

/// Smallest positive eigenphase of the controlled search operator.
double tulsi_alpha_exact(const TulsiModel& tm);

struct TulsiOverlaps {
  Flagged ws;  // includes the extra -alpha^4 a_pi^2 / a_0(delta)^2 loss
  double wt = 0.0;
};

TulsiOverlaps tulsi_overlaps(const TulsiModel& tm, double alpha);

struct TulsiResult {
  double delta = 0.0;
  double tan2_delta = 0.0;
  double a_pi = 0.0;
  SearchResult search;  // Q is Q_delta, alpha_exact is alpha_delta
};

TulsiResult tulsi_search(const TulsiModel& tm, const SearchOptions& options = {});

/// Success-probability trajectory for Q = 0..steps.
std::vector<double> iterate_tulsi(const TulsiModel& tm, std::int64_t steps);

enum class DeltaPolicy { optimal_QO, balanced, original_tulsi };

/// Chooses delta from the walk length of `model`, with log N = ln N / ln(base):
///   original_tulsi  t = 1 and tan^2 = log N
///   balanced        tan^2 = log N / t, requires t <= log N
///   optimal_QO      tan^2 = clamp(log N / t - 1, 0, 1)
double tune_delta(const SpectralModel& model, DeltaPolicy policy, double log_base = std::numbers::e);

struct CircuitRun {
  std::vector<double> trajectory;  // |<psi_m, delta|state>|^2 after 0..steps iterations
  double max_norm_error = 0.0;
};

/// Full-space simulation of one controlled-search iteration built from
/// X_delta, controlled O, X_delta^T, controlled W, Z. The controlled gates act
/// when the ancilla equals `control_value`.
CircuitRun tulsi_circuit_trajectory(const FullWalk& walk, Vertex marked, double delta,
                                    std::int64_t steps, int control_value = 0);

/// Full-space simulation of diag(W_t, -I) (I - 2 |psi_m delta><psi_m delta|).
CircuitRun tulsi_block_trajectory(const FullWalk& walk, Vertex marked, double delta, std::int64_t steps);

}  // namespace powerwalk
