#include <cmath>
#include <numbers>
#include <vector>

#include "powerwalk/kernels.hpp"

namespace powerwalk::kernels::serial {

cd target_amplitude(std::span<const cd> state, std::span<const double> overlap) {
  cd acc{};
  for (std::size_t i = 0; i < state.size(); ++i) acc += overlap[i] * state[i];
  return acc;
}

cd search_step(std::span<cd> state, std::span<const double> overlap, std::span<const cd> phase, cd amplitude) {
  const cd twice = 2.0 * amplitude;
  cd next{};
  for (std::size_t i = 0; i < state.size(); ++i) {
    state[i] = phase[i] * (state[i] - overlap[i] * twice);
    next += overlap[i] * state[i];
  }
  return next;
}

double squared_norm(std::span<const cd> state) {
  double acc = 0.0;
  for (const cd& z : state) acc += std::norm(z);
  return acc;
}

double weighted_pole_sum(std::span<const double> gaps, std::span<const double> weights, double shift) {
  double acc = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) acc += weights[i] / (gaps[i] - shift);
  return acc;
}

GridSumTerms grid_sum_terms(int side, int t) {
  std::vector<double> sin2(static_cast<std::size_t>(side));
  for (int k = 0; k < side; ++k) {
    const double s = std::sin(std::numbers::pi * k / side);
    sin2[static_cast<std::size_t>(k)] = s * s;
  }
  GridSumTerms out;
  for (int ky = 0; ky < side; ++ky) {
    for (int kx = 0; kx < side; ++kx) {
      if (kx == 0 && ky == 0) continue;
      const double g1 = sin2[static_cast<std::size_t>(kx)] + sin2[static_cast<std::size_t>(ky)];
      const double g = g1 < 1.0 ? -std::expm1(t * std::log1p(-g1)) : 1.0 - std::pow(1.0 - g1, t);
      const double half_phase = std::asin(std::sqrt(g / 2.0));
      const double cot = 1.0 / std::tan(half_phase);
      out.inverse_gap += 1.0 / g;
      out.inverse_gap_squared += 1.0 / (g * g);
      out.cot_squared += cot * cot;
    }
  }
  return out;
}

}  // namespace powerwalk::kernels::serial
