#pragma once

// Inner loops of the reduced search engine and the grid sums.
//
// `serial` holds the plain reference loops. `parallel` holds the OpenMP
// versions used by the engine; their reductions run over fixed-size blocks
// with compensated summation and combine the block partials in index order, so
// results do not depend on the thread count.

#include <complex>
#include <cstdint>
#include <span>

namespace powerwalk::kernels {

using cd = std::complex<double>;

/// Reduction block length of the parallel kernels.
inline constexpr std::int64_t kBlock = 4096;

struct GridSumTerms {
  double inverse_gap = 0.0;          // sum 1/(1 - cos^t phi_k)
  double inverse_gap_squared = 0.0;  // sum 1/(1 - cos^t phi_k)^2
  double cot_squared = 0.0;          // sum cot^2(phi^(t)_k / 2)
};

/// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

namespace serial {

/// sum_j overlap_j * state_j
cd target_amplitude(std::span<const cd> state, std::span<const double> overlap);

/// state <- phase .* (state - 2 overlap amplitude); returns the new target
/// amplitude. `amplitude` must be target_amplitude(state, overlap).
cd search_step(std::span<cd> state, std::span<const double> overlap, std::span<const cd> phase, cd amplitude);

double squared_norm(std::span<const cd> state);

/// sum_k weight_k / (gap_k - shift)
double weighted_pole_sum(std::span<const double> gaps, std::span<const double> weights, double shift);

/// Direct sums over the nonzero modes of the side x side torus at walk length t.
GridSumTerms grid_sum_terms(int side, int t);

}  // namespace serial

namespace parallel {

cd target_amplitude(std::span<const cd> state, std::span<const double> overlap);
cd search_step(std::span<cd> state, std::span<const double> overlap, std::span<const cd> phase, cd amplitude);
double squared_norm(std::span<const cd> state);
double weighted_pole_sum(std::span<const double> gaps, std::span<const double> weights, double shift);
GridSumTerms grid_sum_terms(int side, int t);

/// Number of threads the parallel kernels will use.
int thread_count();

}  // namespace parallel

}  // namespace powerwalk::kernels
