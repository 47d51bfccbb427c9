// Copyright 2026 The trpca Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstddef>
#include <cstdint>

#include <benchmark/benchmark.h>

#include "trpca/certificate.hpp"
#include "trpca/projections.hpp"
#include "trpca/random_models.hpp"
#include "trpca/rng.hpp"
#include "trpca/solver.hpp"
#include "trpca/t_algebra.hpp"

namespace trpca {
namespace {

DenseTensor gaussian(const Shape3& s, std::uint64_t seed) {
  Philox4x32 rng(seed);
  DenseTensor t(s);
  for (double& v : t.values()) v = rng.normal();
  return t;
}

Shape3 cube(const benchmark::State& state) {
  return Shape3{static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)),
                static_cast<std::size_t>(state.range(1))};
}

void BM_Tprod(benchmark::State& state) {
  const Shape3 s = cube(state);
  const DenseTensor a = gaussian(s, 1), b = gaussian(s, 2);
  for (auto _ : state) benchmark::DoNotOptimize(tprod(a, b));
}
BENCHMARK(BM_Tprod)->Args({20, 4})->Args({40, 10})->Args({64, 16});

void BM_Dft(benchmark::State& state) {
  const DenseTensor a = gaussian(cube(state), 3);
  for (auto _ : state) benchmark::DoNotOptimize(idft_mode3(dft_mode3(a)));
}
BENCHMARK(BM_Dft)->Args({40, 10})->Args({64, 16});

void BM_Tsvt(benchmark::State& state) {
  const DenseTensor a = gaussian(cube(state), 4);
  for (auto _ : state) benchmark::DoNotOptimize(tsvt(a, 1.0));
}
BENCHMARK(BM_Tsvt)->Args({20, 4})->Args({40, 10})->Args({64, 16});

void BM_SpectralNorm(benchmark::State& state) {
  const DenseTensor a = gaussian(cube(state), 5);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(a));
}
BENCHMARK(BM_SpectralNorm)->Args({20, 4})->Args({60, 8});

void BM_ProjectT(benchmark::State& state) {
  const Shape3 s = cube(state);
  const TangentSpace t = sample_low_tubal_rank(s, 3, 6).tangent;
  const DenseTensor z = gaussian(s, 7);
  for (auto _ : state) benchmark::DoNotOptimize(t.project(z));
}
BENCHMARK(BM_ProjectT)->Args({20, 4})->Args({40, 10})->Args({64, 16});

void BM_SolverIteration(benchmark::State& state) {
  const Shape3 s = cube(state);
  const DenseTensor x = sample_low_tubal_rank(s, 3, 8).L + sample_sign_tensor(s, 0.1, 9);
  SolverConfig cfg = SolverConfig::defaults_for(s);
  cfg.max_iter = 1;
  for (auto _ : state) benchmark::DoNotOptimize(solve(x, cfg));
}
BENCHMARK(BM_SolverIteration)->Args({20, 4})->Args({40, 10});

void BM_Certificate(benchmark::State& state) {
  const Shape3 s = cube(state);
  const LowRankSample low = sample_low_tubal_rank(s, 1, 10);
  const SupportSet omega = sample_bernoulli_support(s, 0.05, 11);
  const DenseTensor sign = sample_signs_on(omega, 12);
  const double lambda = default_lambda(s);
  for (auto _ : state) benchmark::DoNotOptimize(construct_certificate(low.tangent, omega, sign, lambda, 13));
}
BENCHMARK(BM_Certificate)->Args({20, 4});

}  // namespace
}  // namespace trpca

BENCHMARK_MAIN();
