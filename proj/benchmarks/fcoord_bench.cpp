#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "fcoord/fcoord.hpp"

using namespace fcoord;

static Grid line(int n) { return make_uniform_grid(-6.0, 6.0, n, false); }

static void discretize_gaussian(benchmark::State& state) {
  const Grid g = line(static_cast<int>(state.range(0)));
  const Kernel k = gaussian();
  for (auto _ : state) benchmark::DoNotOptimize(discretize(k, g));
}

static void discretize_fourier(benchmark::State& state) {
  const Grid g = make_uniform_grid(0.0, 2 * std::numbers::pi, static_cast<int>(state.range(0)), true);
  const Kernel k = fourier();
  for (auto _ : state) benchmark::DoNotOptimize(discretize(k, g));
}

static void diff_matrix_fd(benchmark::State& state) {
  const Grid g = line(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diff_matrix(g, 2));
}

static void diff_matrix_spectral(benchmark::State& state) {
  const Grid g = make_uniform_grid(0.0, 2 * std::numbers::pi, static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(diff_matrix(g, 1));
}

static void invert_gaussian(benchmark::State& state) {
  const OperatorMatrix w = discretize(gaussian(), line(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(invert(w));
}

static void apply_heaviside(benchmark::State& state) {
  const Grid g = line(static_cast<int>(state.range(0)));
  const Kernel k = gaussian();
  const auto f = GeneralizedFunction::heaviside(g, 0.0) + GeneralizedFunction::delta(g, 1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(apply(k, f));
}

static void conjugate_derivative(benchmark::State& state) {
  const Grid g = line(static_cast<int>(state.range(0)));
  const OperatorMatrix w = discretize(gaussian(), g);
  const OperatorMatrix d = diff_matrix(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(conjugate(d, w));
}

BENCHMARK(discretize_gaussian)->Arg(64)->Arg(256);
BENCHMARK(discretize_fourier)->Arg(32)->Arg(128);
BENCHMARK(diff_matrix_fd)->Arg(64)->Arg(256);
BENCHMARK(diff_matrix_spectral)->Arg(32)->Arg(128);
BENCHMARK(invert_gaussian)->Arg(64)->Arg(128);
BENCHMARK(apply_heaviside)->Arg(64)->Arg(256);
BENCHMARK(conjugate_derivative)->Arg(64);

BENCHMARK_MAIN();
