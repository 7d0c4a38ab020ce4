#include <cmath>
#include <numbers>
#include <vector>

#include "powerwalk/kernels.hpp"

#ifdef POWERWALK_HAVE_OPENMP
#include <omp.h>
#endif

namespace powerwalk::kernels::parallel {

namespace {

std::int64_t block_count(std::int64_t n) { return (n + kBlock - 1) / kBlock; }

struct ComplexPartial {
  CompensatedSum re;
  CompensatedSum im;
  void add(cd z) noexcept {
    re.add(z.real());
    im.add(z.imag());
  }
  cd value() const noexcept { return {re.value(), im.value()}; }
};

cd combine(const std::vector<cd>& partials) {
  ComplexPartial total;
  for (const cd& p : partials) total.add(p);
  return total.value();
}

double combine(const std::vector<double>& partials) {
  CompensatedSum total;
  for (double p : partials) total.add(p);
  return total.value();
}

}  // namespace

int thread_count() {
#ifdef POWERWALK_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

cd target_amplitude(std::span<const cd> state, std::span<const double> overlap) {
  const auto n = static_cast<std::int64_t>(state.size());
  const std::int64_t blocks = block_count(n);
  std::vector<cd> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    ComplexPartial acc;
    const std::int64_t end = std::min(n, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < end; ++i) acc.add(overlap[static_cast<std::size_t>(i)] * state[static_cast<std::size_t>(i)]);
    partial[static_cast<std::size_t>(b)] = acc.value();
  }
  return combine(partial);
}

cd search_step(std::span<cd> state, std::span<const double> overlap, std::span<const cd> phase, cd amplitude) {
  const auto n = static_cast<std::int64_t>(state.size());
  const std::int64_t blocks = block_count(n);
  const cd twice = 2.0 * amplitude;
  std::vector<cd> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    ComplexPartial acc;
    const std::int64_t end = std::min(n, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < end; ++i) {
      const auto j = static_cast<std::size_t>(i);
      state[j] = phase[j] * (state[j] - overlap[j] * twice);
      acc.add(overlap[j] * state[j]);
    }
    partial[static_cast<std::size_t>(b)] = acc.value();
  }
  return combine(partial);
}

double squared_norm(std::span<const cd> state) {
  const auto n = static_cast<std::int64_t>(state.size());
  const std::int64_t blocks = block_count(n);
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    CompensatedSum acc;
    const std::int64_t end = std::min(n, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < end; ++i) acc.add(std::norm(state[static_cast<std::size_t>(i)]));
    partial[static_cast<std::size_t>(b)] = acc.value();
  }
  return combine(partial);
}

double weighted_pole_sum(std::span<const double> gaps, std::span<const double> weights, double shift) {
  const auto n = static_cast<std::int64_t>(gaps.size());
  const std::int64_t blocks = block_count(n);
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    CompensatedSum acc;
    const std::int64_t end = std::min(n, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < end; ++i) {
      const auto j = static_cast<std::size_t>(i);
      acc.add(weights[j] / (gaps[j] - shift));
    }
    partial[static_cast<std::size_t>(b)] = acc.value();
  }
  return combine(partial);
}

GridSumTerms grid_sum_terms(int side, int t) {
  std::vector<double> sin2(static_cast<std::size_t>(side));
  for (int k = 0; k < side; ++k) {
    const double s = std::sin(std::numbers::pi * k / side);
    sin2[static_cast<std::size_t>(k)] = s * s;
  }
  const std::int64_t n = static_cast<std::int64_t>(side) * side;
  const std::int64_t blocks = block_count(n);
  std::vector<double> p1(static_cast<std::size_t>(blocks));
  std::vector<double> p2(static_cast<std::size_t>(blocks));
  std::vector<double> p3(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    CompensatedSum s1;
    CompensatedSum s2;
    CompensatedSum s3;
    const std::int64_t end = std::min(n, (b + 1) * kBlock);
    for (std::int64_t i = std::max<std::int64_t>(1, b * kBlock); i < end; ++i) {
      const double g1 = sin2[static_cast<std::size_t>(i % side)] + sin2[static_cast<std::size_t>(i / side)];
      const double g = g1 < 1.0 ? -std::expm1(t * std::log1p(-g1)) : 1.0 - std::pow(1.0 - g1, t);
      const double cot = 1.0 / std::tan(std::asin(std::sqrt(g / 2.0)));
      s1.add(1.0 / g);
      s2.add(1.0 / (g * g));
      s3.add(cot * cot);
    }
    p1[static_cast<std::size_t>(b)] = s1.value();
    p2[static_cast<std::size_t>(b)] = s2.value();
    p3[static_cast<std::size_t>(b)] = s3.value();
  }
  return {combine(p1), combine(p2), combine(p3)};
}

}  // namespace powerwalk::kernels::parallel
