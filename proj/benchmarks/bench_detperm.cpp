#include <cstddef>
#include <vector>

#include <benchmark/benchmark.h>

#include "detperm/estimator.hpp"
#include "detperm/linalg.hpp"
#include "detperm/matrix.hpp"
#include "detperm/permanent.hpp"
#include "detperm/rng.hpp"
#include "detperm/sampling.hpp"
#include "detperm/spectrum.hpp"

namespace {

using namespace detperm;

DenseMatrix gaussian_matrix(std::size_t n, std::uint64_t stream) {
  PhiloxEngine engine(SeededSource{1357, stream});
  std::vector<double> entries(n * n);
  for (double& v : entries) v = engine.next_normal();
  return DenseMatrix(n, n, std::move(entries));
}

DenseMatrix uniform_matrix(std::size_t n, std::uint64_t stream) {
  PhiloxEngine engine(SeededSource{1357, stream});
  std::vector<double> entries(n * n);
  for (double& v : entries) v = 1.0 + engine.next_uniform();
  return DenseMatrix(n, n, std::move(entries));
}

void BM_LogDetLu(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = gaussian_matrix(n, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_det_lu(a));
  }
}
BENCHMARK(BM_LogDetLu)->Arg(50)->Arg(100)->Arg(200);

void BM_LogDetDistances(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = gaussian_matrix(n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_det_distances(a));
  }
}
BENCHMARK(BM_LogDetDistances)->Arg(50)->Arg(100);

void BM_SingularValues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = gaussian_matrix(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(singular_values(a));
  }
}
BENCHMARK(BM_SingularValues)->Arg(50)->Arg(100);

void BM_RyserPermanent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = uniform_matrix(n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(permanent_ryser(a, 1));
  }
}
BENCHMARK(BM_RyserPermanent)->Arg(15)->Arg(20)->Arg(22)
    ->Unit(benchmark::kMillisecond);

void BM_RyserPermanentThreaded(benchmark::State& state) {
  const DenseMatrix a = uniform_matrix(24, 4);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(permanent_ryser(a, threads));
  }
}
BENCHMARK(BM_RyserPermanentThreaded)->Arg(1)->Arg(4)->Arg(8)
    ->Unit(benchmark::kMillisecond);

void BM_SampleMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const EntryModel model = EntryModel::gaussian();
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_matrix(model, n, SeededSource{9, t++}));
  }
}
BENCHMARK(BM_SampleMatrix)->Arg(100);

void BM_SignLift(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix m = uniform_matrix(n, 5);
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(godsil_gutman_lift(m, SeededSource{10, t++}));
  }
}
BENCHMARK(BM_SignLift)->Arg(100);

void BM_EstimatorTrial(benchmark::State& state) {
  // One full estimator trial: lift, factorize, square.
  const DenseMatrix m = uniform_matrix(50, 6);
  std::uint64_t t = 0;
  for (auto _ : state) {
    const DenseMatrix lifted = godsil_gutman_lift(m, SeededSource{11, t++});
    benchmark::DoNotOptimize(log_det_lu(lifted).squared());
  }
}
BENCHMARK(BM_EstimatorTrial);

void BM_SpectrumSplit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = gaussian_matrix(n, 7);
  const double eps = default_epsilon(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum_split(a, eps));
  }
}
BENCHMARK(BM_SpectrumSplit)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
