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

#include "trpca/random_models.hpp"

#include <cmath>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trpca/error.hpp"
#include "trpca/t_algebra.hpp"

namespace trpca {
namespace {

TEST(BernoulliSupport, DegenerateRates) {
  const Shape3 s{5, 4, 3};
  EXPECT_TRUE(sample_bernoulli_support(s, 0.0, 1).is_empty());
  EXPECT_EQ(sample_bernoulli_support(s, 1.0, 1), SupportSet::full(s));
  EXPECT_THROW(sample_bernoulli_support(s, 1.5, 1), InvalidArgument);
  EXPECT_THROW(sample_bernoulli_support(s, -0.1, 1), InvalidArgument);
}

TEST(BernoulliSupport, MeanDensityWithinBand) {
  const Shape3 s{20, 20, 10};
  const int trials = 500;
  double total = 0.0;
  std::vector<int> hits(s.size(), 0);
  for (int seed = 0; seed < trials; ++seed) {
    const SupportSet omega = sample_bernoulli_support(s, 0.3, seed);
    total += omega.density();
    for (std::size_t o = 0; o < s.size(); ++o) hits[o] += omega.contains_offset(o);
  }
  EXPECT_NEAR(total / trials, 0.3, 0.01);
  // Per-entry frequencies: about 0.27% of entries fall outside a 3-sigma
  // band by chance.
  const double band = testing::binomial_band(0.3, trials);
  int outside = 0;
  for (int h : hits) outside += std::abs(h / static_cast<double>(trials) - 0.3) > band;
  EXPECT_LE(outside, static_cast<int>(0.01 * s.size()));
}

TEST(SignTensor, DegenerateRates) {
  const Shape3 s{6, 6, 4};
  EXPECT_EQ(infinity_norm(sample_sign_tensor(s, 0.0, 3)), 0.0);
  const DenseTensor full = sample_sign_tensor(s, 1.0, 3);
  double sum = 0.0;
  for (double v : full.values()) {
    EXPECT_EQ(std::abs(v), 1.0);
    sum += v;
  }
  EXPECT_LE(std::abs(sum / s.size()), 3.0 / std::sqrt(static_cast<double>(s.size())));
}

TEST(SignTensor, EmpiricalLawOverMillionDraws) {
  const Shape3 s{100, 100, 100};
  const DenseTensor m = sample_sign_tensor(s, 0.2, 4);
  double plus = 0, minus = 0, zero = 0;
  for (double v : m.values()) {
    if (v == 1.0) {
      ++plus;
    } else if (v == -1.0) {
      ++minus;
    } else {
      ASSERT_EQ(v, 0.0);
      ++zero;
    }
  }
  const double n = static_cast<double>(s.size());
  EXPECT_NEAR(plus / n, 0.1, testing::binomial_band(0.1, n));
  EXPECT_NEAR(minus / n, 0.1, testing::binomial_band(0.1, n));
  EXPECT_NEAR(zero / n, 0.8, testing::binomial_band(0.8, n));
}

TEST(SignTensor, SignsAreIndependentOfSupport) {
  const SupportSet omega = sample_bernoulli_support(Shape3{30, 30, 10}, 0.5, 5);
  const DenseTensor m = sample_sign_tensor(Shape3{30, 30, 10}, 0.5, 5);
  EXPECT_EQ(SupportSet::support_of(m), omega);
  EXPECT_EQ(sample_signs_on(omega, 5), m);
}

TEST(LowTubalRank, ZeroRankAndFullRankMatrix) {
  const LowRankSample zero = sample_low_tubal_rank(Shape3{4, 5, 3}, 0, 6);
  EXPECT_EQ(infinity_norm(zero.L), 0.0);
  EXPECT_EQ(zero.tangent.rank(), 0u);
  const LowRankSample full = sample_low_tubal_rank(Shape3{6, 4, 1}, 4, 6);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(full.L.frontal_slice(0));
  EXPECT_EQ(lu.rank(), 4);
  EXPECT_THROW(sample_low_tubal_rank(Shape3{6, 4, 1}, 5, 6), InvalidArgument);
}

TEST(LowTubalRank, SpectralGapAtRequestedRank) {
  const Shape3 s{40, 40, 10};
  const LowRankSample sample = sample_low_tubal_rank(s, 3, 7);
  EXPECT_EQ(tubal_rank(sample.L), 3u);
  double sigma1 = 0.0, sigma4 = 0.0;
  for (const auto& sv : fourier_singular_values(sample.L)) {
    sigma1 = std::max(sigma1, sv(0));
    sigma4 = std::max(sigma4, sv(3));
  }
  EXPECT_LT(sigma4 / sigma1, 1e-10);
  EXPECT_LT(frobenius_norm(project_T_complement(sample.L, sample.tangent)), 1e-10 * frobenius_norm(sample.L));
}

TEST(Determinism, IdenticalSeedsGiveIdenticalBytes) {
  const Shape3 s{9, 7, 5};
  const LowRankSample a = sample_low_tubal_rank(s, 2, 99);
  const LowRankSample b = sample_low_tubal_rank(s, 2, 99);
  EXPECT_EQ(std::memcmp(a.L.values().data(), b.L.values().data(), a.L.size() * sizeof(double)), 0);
  EXPECT_EQ(sample_sign_tensor(s, 0.3, 99), sample_sign_tensor(s, 0.3, 99));
  EXPECT_EQ(sample_bernoulli_support(s, 0.3, 99), sample_bernoulli_support(s, 0.3, 99));
  const SupportSet omega = sample_bernoulli_support(s, 0.3, 99);
  EXPECT_EQ(partition_complement(omega, GolfingConfig::for_shape(s, 0.3), 99),
            partition_complement(omega, GolfingConfig::for_shape(s, 0.3), 99));
  EXPECT_NE(sample_sign_tensor(s, 0.3, 99), sample_sign_tensor(s, 0.3, 100));
}

TEST(GolfingConfig, PublishedExample) {
  const GolfingConfig c = GolfingConfig::with_rounds(12, 0.25);
  EXPECT_NEAR(c.q, 0.1091, 5e-5);
  EXPECT_GE(c.q, (1.0 - 0.25) / 12.0);
  EXPECT_LE(std::abs(std::pow(1.0 - c.q, 12) - 0.25), 1e-12);
}

TEST(GolfingConfig, DefaultRoundsUseNaturalLog) {
  // 2 * ceil(ln(40 * 10)) = 2 * ceil(5.99) = 12.
  EXPECT_EQ(GolfingConfig::for_shape(Shape3{40, 40, 10}, 0.1).j0, 12u);
  // 2 * ceil(ln(20 * 4)) = 2 * ceil(4.38) = 10; rectangular uses max(n1, n2).
  EXPECT_EQ(GolfingConfig::for_shape(Shape3{10, 20, 4}, 0.1).j0, 10u);
  EXPECT_EQ(GolfingConfig::for_shape(Shape3{1, 1, 1}, 0.1).j0, 1u);
}

TEST(GolfingConfig, ConsistencyAcrossParameters) {
  for (std::size_t j0 = 1; j0 <= 30; ++j0)
    for (double rho : {0.0, 0.01, 0.05, 0.2, 0.5, 0.9, 0.99}) {
      const GolfingConfig c = GolfingConfig::with_rounds(j0, rho);
      EXPECT_NO_THROW(c.validate());
      EXPECT_LE(std::abs(std::pow(1.0 - c.q, static_cast<double>(j0)) - rho), 1e-12);
      EXPECT_GE(c.q * static_cast<double>(j0), 1.0 - rho - 1e-12);
    }
  GolfingConfig bad = GolfingConfig::with_rounds(4, 0.3);
  bad.q += 0.01;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_THROW(GolfingConfig::with_rounds(0, 0.3), InvalidArgument);
  EXPECT_THROW(GolfingConfig::with_rounds(3, 1.0), InvalidArgument);
}

TEST(PartitionComplement, SingleRoundIsTheComplement) {
  const Shape3 s{6, 6, 3};
  const SupportSet omega = sample_bernoulli_support(s, 0.3, 8);
  const auto parts = partition_complement(omega, GolfingConfig::with_rounds(1, 0.3), 8);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], omega.complement());
}

TEST(PartitionComplement, UnionIsExactlyTheComplement) {
  const Shape3 s{8, 7, 4};
  for (int trial = 0; trial < 100; ++trial) {
    const double rho = 0.05 + 0.009 * trial;
    const SupportSet omega = sample_bernoulli_support(s, rho, 1000 + trial);
    const GolfingConfig config = GolfingConfig::for_shape(s, rho);
    const auto parts = partition_complement(omega, config, 2000 + trial);
    ASSERT_EQ(parts.size(), config.j0);
    SupportSet all = SupportSet::empty(s);
    for (const SupportSet& p : parts) {
      EXPECT_TRUE(p.intersect(omega).is_empty());
      all = all.unite(p);
    }
    EXPECT_EQ(all, omega.complement());
  }
}

TEST(PartitionComplement, RoundsAreMarginallyBernoulliQ) {
  const Shape3 s{20, 20, 10};
  const double rho = 0.2;
  const GolfingConfig config = GolfingConfig::with_rounds(6, rho);
  const int trials = 50;
  std::vector<double> density(config.j0, 0.0);
  for (int trial = 0; trial < trials; ++trial) {
    const SupportSet omega = sample_bernoulli_support(s, rho, 3000 + trial);
    const auto parts = partition_complement(omega, config, 4000 + trial);
    for (std::size_t j = 0; j < config.j0; ++j) density[j] += parts[j].density() / trials;
  }
  const double band = testing::binomial_band(config.q, static_cast<double>(trials * s.size()));
  for (double d : density) EXPECT_NEAR(d, config.q, band);
}

}  // namespace
}  // namespace trpca
