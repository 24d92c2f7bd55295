// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... as usual.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "fuplab/kernels.hpp"
#include "fuplab/words.hpp"

using namespace fuplab;
using kernels::Exec;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }
void label(benchmark::State& st) { st.SetLabel(st.range(0) ? "parallel" : "serial"); }

void BM_SampleSymbol(benchmark::State& st) {
  const Symbol a = [](double x, double xi) { return std::exp(std::cos(kTwoPi * x) * std::sin(kTwoPi * xi)); };
  for (auto _ : st) benchmark::DoNotOptimize(kernels::sample_symbol(a, 1024, 0.0, exec_of(st)));
  label(st);
}

void BM_WordMask(benchmark::State& st) {
  const AnosovMapSpec spec = AnosovMapSpec::cat(0.05);
  const Partition part;
  const Word w{Alphabet::Coarse, std::vector<int>(10, kStar), Orientation::Future};
  for (auto _ : st) benchmark::DoNotOptimize(kernels::sample_word_mask(spec, part, w, Grid2{512}, exec_of(st)));
  label(st);
}

void BM_FourierKernel(benchmark::State& st) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 2048;
  std::vector<double> s(n), c(n, 1.0), t(n), d(n, 1.0);
  std::vector<cdouble> v(n), y;
  for (int i = 0; i < n; ++i) s[i] = u(rng), t[i] = u(rng), v[i] = {u(rng), u(rng)};
  for (auto _ : st) {
    kernels::fourier_kernel_apply(s, c, t, d, 1e-3, v, y, exec_of(st));
    benchmark::DoNotOptimize(y.data());
  }
  label(st);
}

void BM_GapOracle(benchmark::State& st) {
  std::vector<double> l, r;
  for (int k = 0; k < 512; ++k) l.push_back(k / 512.0), r.push_back(k / 512.0 + 0.3 / 512);
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::brute_force_gap_ratio(l, r, 0.01, -0.01, 1.0, 200000, exec_of(st)));
  label(st);
}

}  // namespace

BENCHMARK(BM_SampleSymbol)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WordMask)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FourierKernel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GapOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
