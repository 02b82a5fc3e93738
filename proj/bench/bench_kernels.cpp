// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <vector>

#include "phi4/dispersion.hpp"
#include "phi4/kernels.hpp"

using namespace phi4;

namespace {

const kernels::BoxRates& rates(int K) {
  static std::vector<std::pair<int, kernels::BoxRates>> cache;
  for (const auto& [k, r] : cache)
    if (k == K) return r;
  cache.emplace_back(K, kernels::BoxRates::from_symbol(DispersionQ::bilaplacian(1.0, 0.1), K));
  return cache.back().second;
}

template <double (*Fn)(const kernels::BoxRates&, int, double)>
void BM_resonance(benchmark::State& st) {
  const auto& r = rates(int(st.range(0)));
  const int p = int(st.range(1));
  const double dt = st.range(2) == 0 ? 0.0 : 1e-3;
  for (auto _ : st) benchmark::DoNotOptimize(Fn(r, p, dt));
}

template <void (*Fn)(const Polynomial&, const double*, double*, std::size_t)>
void BM_polymap(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const Polynomial P({0.1, -0.3, 0.5, 0.0, 0.25, 0.0, 1.0 / 6.0});
  std::vector<double> in(n), out(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = -2.0 + 4.0 * double(i) / double(n);
  for (auto _ : st) {
    Fn(P, in.data(), out.data(), n);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(std::int64_t(st.iterations()) * std::int64_t(n));
}

}  // namespace

BENCHMARK(BM_resonance<kernels::wick_resonance_direct_serial>)->Name("direct/serial")->Args({8, 2, 0})->Args({2, 3, 0});
BENCHMARK(BM_resonance<kernels::wick_resonance_direct_omp>)->Name("direct/omp")->Args({8, 2, 0})->Args({2, 3, 0});
BENCHMARK(BM_resonance<kernels::wick_resonance_fft_serial>)->Name("fft/serial")->Args({16, 2, 0})->Args({8, 2, 1});
BENCHMARK(BM_resonance<kernels::wick_resonance_fft_omp>)->Name("fft/omp")->Args({16, 2, 0})->Args({8, 2, 1});
BENCHMARK(BM_polymap<kernels::polynomial_map_serial>)->Name("polymap/serial")->Arg(1 << 20);
BENCHMARK(BM_polymap<kernels::polynomial_map_omp>)->Name("polymap/omp")->Arg(1 << 20);

BENCHMARK_MAIN();
