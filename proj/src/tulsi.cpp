#include "powerwalk/tulsi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace powerwalk {

namespace {

struct Halves {
  FullState zero;
  FullState one;
};

double norm_error(const Halves& s) {
  return std::abs(std::sqrt(s.zero.squaredNorm() + s.one.squaredNorm()) - 1.0);
}

std::complex<double> delta_amplitude(const FullState& psi, const Halves& s, double c, double sn) {
  return c * psi.dot(s.zero) + sn * psi.dot(s.one);
}

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta < std::numbers::pi / 2.0))
    throw std::invalid_argument("delta must lie in [0, pi/2)");
}

}  // namespace

double TulsiModel::a0_squared() const {
  const double c = std::cos(delta);
  return c * c / static_cast<double>(base.vertex_count());
}

TulsiModel build_tulsi(const SpectralModel& base, double delta) {
  check_delta(delta);
  TulsiModel tm;
  tm.base = base;
  tm.delta = delta;
  tm.a_pi = std::sin(delta);
  const double c = std::cos(delta);
  tm.op = base.op;
  for (std::size_t j = 0; j < tm.op.overlap.size(); ++j) {
    tm.op.overlap[j] *= c;
    tm.op.weight[j] = tm.op.overlap[j] * tm.op.overlap[j];
  }
  tm.op.overlap.push_back(tm.a_pi);
  tm.op.weight.push_back(tm.a_pi * tm.a_pi);
  tm.op.rotor.push_back({-1.0, 0.0});
  tm.op.gap.push_back(2.0);
  return tm;
}

double compute_alpha_delta(const TulsiModel& tm) {
  const double n = static_cast<double>(tm.base.vertex_count());
  const double c = std::cos(tm.delta);
  const double pole = c * c * tm.base.sums.inverse_gap / (2.0 * n) + tm.a_pi * tm.a_pi / 4.0;
  return std::sqrt(tm.a0_squared() / pole);
}

double tulsi_alpha_exact(const TulsiModel& tm) { return secular_alpha(tm.op); }

TulsiOverlaps tulsi_overlaps(const TulsiModel& tm, double alpha) {
  const double a4 = alpha * alpha * alpha * alpha;
  const double n = static_cast<double>(tm.base.vertex_count());
  const double c = std::cos(tm.delta);
  TulsiOverlaps out;
  out.ws.value = 1.0 - a4 * 0.5 * tm.base.sums.inverse_gap_squared - a4 * tm.a_pi * tm.a_pi / tm.a0_squared();
  out.ws.precondition_ok = alpha < tm.base.op.first_phase() / 2.0;
  const double s = c * c * tm.base.sums.cot_squared / (2.0 * n);
  out.wt = s > 0.0 ? std::min(1.0 / std::sqrt(s), 1.0) : 1.0;
  return out;
}

TulsiResult tulsi_search(const TulsiModel& tm, const SearchOptions& options) {
  TulsiResult out;
  out.delta = tm.delta;
  out.tan2_delta = tm.tan2_delta();
  out.a_pi = tm.a_pi;
  SearchResult& r = out.search;
  r.alpha_exact = tulsi_alpha_exact(tm);
  r.alpha_estimate = compute_alpha_delta(tm);
  r.Q = iteration_count(r.alpha_exact, options.rounding);
  ReducedRun run = run_reduced(tm.op, r.Q, options.record_trajectory);
  r.p_s = std::min(run.probability, 1.0);
  const TulsiOverlaps ov = tulsi_overlaps(tm, r.alpha_exact);
  r.ws = ov.ws.value;
  r.precondition_ok = ov.ws.precondition_ok;
  r.wt = ov.wt;
  const double c = std::cos(r.alpha_exact);
  r.p_bound = std::min(c * c * r.ws * r.ws * r.wt * r.wt, 1.0);
  r.rounds = amplification_rounds(r.p_s, options);
  r.Q_O = (r.rounds + 1) * r.Q;
  r.Q_G = tm.base.t * r.Q_O;
  r.trajectory = std::move(run.trajectory);
  return out;
}

std::vector<double> iterate_tulsi(const TulsiModel& tm, std::int64_t steps) {
  return run_reduced(tm.op, steps, true).trajectory;
}

double tune_delta(const SpectralModel& model, DeltaPolicy policy, double log_base) {
  if (!(log_base > 1.0)) throw std::invalid_argument("log base must exceed 1");
  const double log_n = std::log(static_cast<double>(model.vertex_count())) / std::log(log_base);
  const double t = model.t;
  double ratio = 0.0;
  switch (policy) {
    case DeltaPolicy::original_tulsi:
      if (model.t != 1) throw std::invalid_argument("original_tulsi policy requires t = 1");
      ratio = log_n;
      break;
    case DeltaPolicy::balanced:
      if (t > log_n) throw std::invalid_argument("balanced policy requires t <= log N");
      ratio = log_n / t;
      break;
    case DeltaPolicy::optimal_QO:
      ratio = std::clamp(log_n / t - 1.0, 0.0, 1.0);
      break;
  }
  return std::atan(std::sqrt(ratio));
}

CircuitRun tulsi_circuit_trajectory(const FullWalk& walk, Vertex marked, double delta,
                                    std::int64_t steps, int control_value) {
  check_delta(delta);
  if (control_value != 0 && control_value != 1) throw std::invalid_argument("control value must be 0 or 1");
  const double c = std::cos(delta);
  const double sn = std::sin(delta);
  const FullState psi = walk.coin_uniform_state(marked);
  Halves s{walk.uniform_state(), FullState::Zero(walk.dimension())};
  CircuitRun out;
  out.trajectory.push_back(std::norm(delta_amplitude(psi, s, c, sn)));
  auto controlled = [&](auto&& gate) {
    FullState& target = control_value == 0 ? s.zero : s.one;
    target = gate(target);
  };
  for (std::int64_t q = 0; q < steps; ++q) {
    // X_delta
    FullState z = c * s.zero + sn * s.one;
    s.one = -sn * s.zero + c * s.one;
    s.zero = std::move(z);
    controlled([&](const FullState& x) { return walk.oracle(marked, x); });
    // X_delta^T
    z = c * s.zero - sn * s.one;
    s.one = sn * s.zero + c * s.one;
    s.zero = std::move(z);
    controlled([&](const FullState& x) { return walk.walk(x); });
    s.one = -s.one;
    out.trajectory.push_back(std::norm(delta_amplitude(psi, s, c, sn)));
    out.max_norm_error = std::max(out.max_norm_error, norm_error(s));
  }
  return out;
}

CircuitRun tulsi_block_trajectory(const FullWalk& walk, Vertex marked, double delta, std::int64_t steps) {
  check_delta(delta);
  const double c = std::cos(delta);
  const double sn = std::sin(delta);
  const FullState psi = walk.coin_uniform_state(marked);
  Halves s{walk.uniform_state(), FullState::Zero(walk.dimension())};
  CircuitRun out;
  out.trajectory.push_back(std::norm(delta_amplitude(psi, s, c, sn)));
  for (std::int64_t q = 0; q < steps; ++q) {
    const std::complex<double> amp = delta_amplitude(psi, s, c, sn);
    s.zero -= (2.0 * c) * amp * psi;
    s.one -= (2.0 * sn) * amp * psi;
    s.zero = walk.walk(s.zero);
    s.one = -s.one;
    out.trajectory.push_back(std::norm(delta_amplitude(psi, s, c, sn)));
    out.max_norm_error = std::max(out.max_norm_error, norm_error(s));
  }
  return out;
}

}  // namespace powerwalk
