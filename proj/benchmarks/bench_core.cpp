#include <benchmark/benchmark.h>

#include "btrank/inference.hpp"
#include "btrank/likelihood.hpp"
#include "btrank/simulate.hpp"
#include "btrank/solver.hpp"

namespace {

using namespace btrank;

DesignSpec bench_design(int n, long subjects) {
  DesignSpec spec;
  spec.beta_star = centered_linspace(n, -1.0, 1.0);
  spec.pair_frequency = uniform_pair_frequency(n);
  spec.subjects = subjects;
  spec.comparisons = SubjectComparisons::fixed(8);
  spec.seed = 42;
  return spec;
}

ComparisonData bench_data(int n) {
  // dense enough that strong connectivity holds at every size
  return generate_dataset(bench_design(n, 40L * n));
}

void BM_log_likelihood(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComparisonData data = bench_data(n);
  const ScoreVector beta = centered_linspace(n, -1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_likelihood(beta, data));
  }
}
BENCHMARK(BM_log_likelihood)->Arg(8)->Arg(32)->Arg(128);

void BM_hessian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComparisonData data = bench_data(n);
  const ScoreVector beta = centered_linspace(n, -1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hessian(beta, data));
  }
}
BENCHMARK(BM_hessian)->Arg(8)->Arg(32)->Arg(128);

void BM_fit_sum_constraint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComparisonData data = bench_data(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_sum_constraint(data));
  }
}
BENCHMARK(BM_fit_sum_constraint)->Arg(8)->Arg(32)->Arg(64);

void BM_pseudoinverse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComparisonData data = bench_data(n);
  const FitResult fit = fit_sum_constraint(data);
  const Eigen::MatrixXd neg_hessian = -hessian(fit.beta_hat, data);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pseudoinverse_known_kernel(neg_hessian));
  }
}
BENCHMARK(BM_pseudoinverse)->Arg(8)->Arg(32)->Arg(128);

void BM_generate_dataset(benchmark::State& state) {
  const DesignSpec spec = bench_design(6, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_dataset(spec));
  }
}
BENCHMARK(BM_generate_dataset)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
