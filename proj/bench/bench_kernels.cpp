#include <complex>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "powerwalk/kernels.hpp"
#include "powerwalk/spectral_search.hpp"

using namespace powerwalk;
using kernels::cd;

namespace {

struct StepData {
  std::vector<cd> state;
  std::vector<double> overlap;
  std::vector<cd> rotor;
};

StepData step_data(std::int64_t side) {
  const SpectralModel model = build_model(TorusGrid(static_cast<int>(side)), 3);
  StepData d;
  d.overlap = model.op.overlap;
  d.rotor = model.op.rotor;
  d.state.assign(d.overlap.size(), cd(0.0, 0.0));
  d.state[0] = 1.0;
  return d;
}

template <bool Parallel>
void BM_SearchStep(benchmark::State& st) {
  StepData d = step_data(st.range(0));
  cd amp = kernels::serial::target_amplitude(d.state, d.overlap);
  for (auto _ : st) {
    if constexpr (Parallel)
      amp = kernels::parallel::search_step(d.state, d.overlap, d.rotor, amp);
    else
      amp = kernels::serial::search_step(d.state, d.overlap, d.rotor, amp);
    benchmark::DoNotOptimize(amp);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(d.state.size()));
}

template <bool Parallel>
void BM_GridSums(benchmark::State& st) {
  const int side = static_cast<int>(st.range(0));
  for (auto _ : st) {
    const auto s = Parallel ? kernels::parallel::grid_sum_terms(side, 7) : kernels::serial::grid_sum_terms(side, 7);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(st.iterations() * side * side);
}

template <bool Parallel>
void BM_PoleSum(benchmark::State& st) {
  const SpectralModel model = build_model(TorusGrid(static_cast<int>(st.range(0))), 3);
  const std::span<const double> gaps(model.op.gap.data() + 1, model.op.gap.size() - 1);
  const std::span<const double> weights(model.op.weight.data() + 1, model.op.weight.size() - 1);
  for (auto _ : st) {
    const double v = Parallel ? kernels::parallel::weighted_pole_sum(gaps, weights, 1e-5)
                              : kernels::serial::weighted_pole_sum(gaps, weights, 1e-5);
    benchmark::DoNotOptimize(v);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(gaps.size()));
}

}  // namespace

BENCHMARK(BM_SearchStep<false>)->Name("search_step/serial")->Arg(65)->Arg(257)->Arg(1025);
BENCHMARK(BM_SearchStep<true>)->Name("search_step/parallel")->Arg(65)->Arg(257)->Arg(1025);
BENCHMARK(BM_GridSums<false>)->Name("grid_sum_terms/serial")->Arg(257)->Arg(1025);
BENCHMARK(BM_GridSums<true>)->Name("grid_sum_terms/parallel")->Arg(257)->Arg(1025);
BENCHMARK(BM_PoleSum<false>)->Name("weighted_pole_sum/serial")->Arg(257)->Arg(1025);
BENCHMARK(BM_PoleSum<true>)->Name("weighted_pole_sum/parallel")->Arg(257)->Arg(1025);

BENCHMARK_MAIN();
