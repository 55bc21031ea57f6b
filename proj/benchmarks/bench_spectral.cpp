#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "okbim/spectral.hpp"

namespace {

std::vector<double> sample(std::size_t n) {
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
    f[j] = std::exp(std::cos(a)) + 0.1 * std::sin(5.0 * a);
  }
  return f;
}

void BM_Derivative(benchmark::State& state) {
  const auto f = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(okbim::spectral::derivative(f));
}
BENCHMARK(BM_Derivative)->RangeMultiplier(4)->Range(64, 4096);

void BM_LogKernelConvolution(benchmark::State& state) {
  const auto f = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(okbim::spectral::log_kernel_convolution(f));
}
BENCHMARK(BM_LogKernelConvolution)->RangeMultiplier(4)->Range(64, 4096);

void BM_Filters(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto base = okbim::spectral::forward(sample(n));
  for (auto _ : state) {
    auto c = base;
    okbim::spectral::krasny_filter(c, 1e-10);
    okbim::spectral::smoothing_filter(c, n);
    benchmark::DoNotOptimize(c.data());
  }
}
BENCHMARK(BM_Filters)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace
