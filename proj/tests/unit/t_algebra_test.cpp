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

#include "trpca/t_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trpca/error.hpp"

namespace trpca {
namespace {

using testing::random_tensor;

DenseTensor random_unit_spectral(const Shape3& s, std::uint64_t seed) {
  DenseTensor a = random_tensor(s, seed);
  return a * (1.0 / spectral_norm(a));
}

Shape3 random_small_shape(std::mt19937_64& gen) {
  std::uniform_int_distribution<std::size_t> d(1, 5), d3(1, 4);
  return Shape3{d(gen), d(gen), d3(gen)};
}

TEST(Tprod, IdentityIsNeutral) {
  const DenseTensor a = random_tensor(Shape3{4, 4, 5}, 1);
  EXPECT_LT(max_abs_diff(tprod(a, identity_tensor(4, 5)), a), 1e-12);
  EXPECT_LT(max_abs_diff(tprod(identity_tensor(4, 5), a), a), 1e-12);
}

TEST(Tprod, SingleSliceIsMatrixProduct) {
  const DenseTensor a = random_tensor(Shape3{3, 2, 1}, 2);
  const DenseTensor b = random_tensor(Shape3{2, 4, 1}, 3);
  const Eigen::MatrixXd expected = a.frontal_slice(0) * b.frontal_slice(0);
  EXPECT_LT((tprod(a, b).frontal_slice(0) - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Tprod, MatchesBcircOracle) {
  const DenseTensor a = random_tensor(Shape3{3, 2, 4}, 4);
  const DenseTensor b = random_tensor(Shape3{2, 5, 4}, 5);
  EXPECT_LT(max_abs_diff(tprod(a, b), testing::bcirc_tprod(a, b)), 1e-10);
}

TEST(Tprod, RejectsDimensionMismatch) {
  EXPECT_THROW(tprod(DenseTensor(Shape3{2, 3, 4}), DenseTensor(Shape3{2, 3, 4})), ShapeError);
  EXPECT_THROW(tprod(DenseTensor(Shape3{2, 3, 4}), DenseTensor(Shape3{3, 3, 5})), ShapeError);
}

TEST(Ttranspose, IdentityAndSingleSlice) {
  EXPECT_EQ(ttranspose(identity_tensor(3, 4)), identity_tensor(3, 4));
  const DenseTensor a = random_tensor(Shape3{3, 5, 1}, 6);
  EXPECT_EQ(ttranspose(a).frontal_slice(0), Eigen::MatrixXd(a.frontal_slice(0).transpose()));
}

TEST(Ttranspose, FourierSlicesAreConjugateTransposes) {
  const DenseTensor a = random_tensor(Shape3{3, 4, 5}, 7);
  const SpectralTensor fa = dft_mode3(a);
  const SpectralTensor ft = dft_mode3(ttranspose(a));
  for (std::size_t k = 0; k < 5; ++k)
    EXPECT_LT((ft.slice(k) - fa.slice(k).adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ttranspose, InvolutionAndReversesProducts) {
  const DenseTensor a = random_tensor(Shape3{3, 2, 4}, 8);
  const DenseTensor b = random_tensor(Shape3{2, 5, 4}, 9);
  EXPECT_EQ(ttranspose(ttranspose(a)), a);
  EXPECT_LT(max_abs_diff(ttranspose(tprod(a, b)), tprod(ttranspose(b), ttranspose(a))), 1e-12);
}

TEST(BasisTensors, IdentityLayout) {
  const DenseTensor id = identity_tensor(3, 4);
  EXPECT_EQ(id.frontal_slice(0), Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3)));
  for (std::size_t k = 1; k < 4; ++k) EXPECT_EQ(id.frontal_slice(k).cwiseAbs().maxCoeff(), 0.0);
}

TEST(BasisTensors, FactoredBasisHasSingleUnitEntry) {
  const DenseTensor e =
      tprod(tprod(basis_e_ring(2, 3, 4), basis_e_dot(3, 4)), ttranspose(basis_e_ring(1, 3, 4)));
  ASSERT_EQ(e.shape(), (Shape3{3, 3, 4}));
  EXPECT_LT(max_abs_diff(e, basis_e(Shape3{3, 3, 4}, 2, 1, 3)), 1e-14);
  EXPECT_NEAR(e(2, 1, 3), 1.0, 1e-14);
  EXPECT_NEAR(l1_norm(e), 1.0, 1e-13);
}

TEST(BasisTensors, AllFactoredBasesMatchUnitTensors) {
  const Shape3 s{3, 2, 3};
  for (std::size_t i = 0; i < s.n1; ++i)
    for (std::size_t j = 0; j < s.n2; ++j)
      for (std::size_t k = 0; k < s.n3; ++k) {
        const DenseTensor e = tprod(tprod(basis_e_ring(i, s.n1, s.n3), basis_e_dot(k, s.n3)),
                                    ttranspose(basis_e_ring(j, s.n2, s.n3)));
        EXPECT_LT(max_abs_diff(e, basis_e(s, i, j, k)), 1e-14);
      }
}

TEST(BasisTensors, TubeProductGivesUnitTube) {
  for (std::size_t k = 0; k < 4; ++k) {
    const DenseTensor ej = basis_e_ring(1, 3, 4);
    const DenseTensor ek = basis_e_dot(k, 4);
    const DenseTensor prod =
        tprod(tprod(tprod(ek, ttranspose(ej)), ej), ttranspose(ek));
    EXPECT_LT(max_abs_diff(prod, identity_tensor(1, 4)), 1e-14);
  }
}

TEST(BasisTensors, RejectOutOfRange) {
  EXPECT_THROW(basis_e_ring(3, 3, 2), ShapeError);
  EXPECT_THROW(basis_e_dot(2, 2), ShapeError);
  EXPECT_THROW(basis_e(Shape3{2, 2, 2}, 0, 2, 0), ShapeError);
}

void expect_valid_factors(const DenseTensor& a, const TSvdFactors& f, TsvdMode mode) {
  const std::size_t r = f.U.shape().n2;
  EXPECT_LT(max_abs_diff(tprod(ttranspose(f.U), f.U), identity_tensor(r, a.shape().n3)), 1e-8);
  EXPECT_LT(max_abs_diff(tprod(ttranspose(f.V), f.V), identity_tensor(f.V.shape().n2, a.shape().n3)), 1e-8);
  const SpectralTensor fs = dft_mode3(f.S);
  for (std::size_t k = 0; k < a.shape().n3; ++k) {
    const Eigen::MatrixXcd& m = fs.slice(k);
    const Eigen::Index d = std::min(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (i != j) {
          EXPECT_LT(std::abs(m(i, j)), 1e-10);
        }
    for (Eigen::Index i = 0; i < d; ++i) {
      EXPECT_LT(std::abs(m(i, i).imag()), 1e-10);
      EXPECT_GE(m(i, i).real(), -1e-12);
      if (i > 0) {
        EXPECT_LE(m(i, i).real(), m(i - 1, i - 1).real() + 1e-10);
      }
    }
  }
  const DenseTensor rec = tprod(tprod(f.U, f.S), ttranspose(f.V));
  EXPECT_LE(frobenius_norm(rec - a), 1e-8 * std::max(1.0, frobenius_norm(a))) << (mode == TsvdMode::kFull);
}

TEST(Tsvd, IdentityTensor) {
  const TSvdFactors f = tsvd(identity_tensor(3, 4));
  EXPECT_EQ(f.tubal_rank, 3u);
  EXPECT_LT(max_abs_diff(f.S, identity_tensor(3, 4)), 1e-12);
}

TEST(Tsvd, RankOneOuterProduct) {
  const DenseTensor u = random_tensor(Shape3{4, 1, 5}, 10);
  const DenseTensor v = random_tensor(Shape3{3, 1, 5}, 11);
  const DenseTensor a = tprod(u, ttranspose(v));
  const TSvdFactors f = tsvd(a);
  EXPECT_EQ(f.tubal_rank, 1u);
  EXPECT_LT(max_abs_diff(tprod(tprod(f.U, f.S), ttranspose(f.V)), a), 1e-10);
}

TEST(Tsvd, BcircSingularValuesAreTheFourierMultiset) {
  const DenseTensor a = random_tensor(Shape3{4, 3, 5}, 12);
  std::vector<double> fourier;
  for (const auto& sv : fourier_singular_values(a))
    for (Eigen::Index i = 0; i < sv.size(); ++i) fourier.push_back(sv(i));
  std::sort(fourier.rbegin(), fourier.rend());
  const Eigen::VectorXd oracle = testing::bcirc_singular_values(a);
  ASSERT_EQ(static_cast<Eigen::Index>(fourier.size()), oracle.size());
  for (std::size_t i = 0; i < fourier.size(); ++i) EXPECT_NEAR(fourier[i], oracle(static_cast<Eigen::Index>(i)), 1e-8);
}

TEST(Tsvd, FactorInvariantsAcrossShapesAndModes) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 40; ++trial) {
    const Shape3 s = random_small_shape(gen);
    const DenseTensor a = random_tensor(s, 1000 + trial);
    for (TsvdMode mode : {TsvdMode::kFull, TsvdMode::kSkinny}) {
      const TSvdFactors f = tsvd(a, mode);
      expect_valid_factors(a, f, mode);
      EXPECT_EQ(f.tubal_rank, s.smaller());
    }
  }
}

TEST(Tsvd, ZeroTensorKeepsPlaceholderColumn) {
  const DenseTensor z(Shape3{3, 2, 4});
  const TSvdFactors f = tsvd(z);
  EXPECT_EQ(f.tubal_rank, 0u);
  EXPECT_EQ(f.U.shape().n2, 1u);
  EXPECT_EQ(infinity_norm(tprod(tprod(f.U, f.S), ttranspose(f.V))), 0.0);
}

TEST(Tsvd, TruncationKeepsRequestedRank) {
  const DenseTensor a = random_tensor(Shape3{5, 4, 3}, 14);
  const TSvdFactors f = tsvd_truncated(a, 2);
  EXPECT_EQ(f.U.shape(), (Shape3{5, 2, 3}));
  EXPECT_EQ(tubal_rank(tprod(tprod(f.U, f.S), ttranspose(f.V))), 2u);
  EXPECT_THROW(tsvd_truncated(a, 0), InvalidArgument);
  EXPECT_THROW(tsvd_truncated(a, 5), InvalidArgument);
}

TEST(Ranks, IdentityZeroAndRankOne) {
  EXPECT_EQ(tubal_rank(identity_tensor(4, 3)), 4u);
  EXPECT_DOUBLE_EQ(average_rank(identity_tensor(4, 3)), 4.0);
  EXPECT_EQ(tubal_rank(DenseTensor(Shape3{3, 3, 3})), 0u);
  EXPECT_EQ(average_rank(DenseTensor(Shape3{3, 3, 3})), 0.0);
  const DenseTensor uv = tprod(random_tensor(Shape3{4, 1, 4}, 15), ttranspose(random_tensor(Shape3{5, 1, 4}, 16)));
  EXPECT_EQ(tubal_rank(uv), 1u);
  EXPECT_LE(average_rank(uv), 1.0);
}

TEST(Ranks, AverageRankBelowOneWhenSomeSlicesVanish) {
  // Tube (1, 1, 1, 1) has DFT (4, 0, 0, 0): only one slice carries rank.
  DenseTensor a(Shape3{1, 1, 4});
  for (double& v : a.values()) v = 1.0;
  EXPECT_EQ(tubal_rank(a), 1u);
  EXPECT_DOUBLE_EQ(average_rank(a), 0.25);
  EXPECT_NEAR(testing::bcirc_average_rank(a, rank_threshold(a.shape())), 0.25, 1e-15);
}

TEST(Norms, IdentityAndZero) {
  EXPECT_NEAR(tnn(identity_tensor(4, 3)), 4.0, 1e-12);
  EXPECT_NEAR(spectral_norm(identity_tensor(4, 3)), 1.0, 1e-12);
  EXPECT_EQ(tnn(DenseTensor(Shape3{2, 3, 4})), 0.0);
  EXPECT_EQ(spectral_norm(DenseTensor(Shape3{2, 3, 4})), 0.0);
}

TEST(Norms, MatchBcircOnFixedExample) {
  const DenseTensor a = random_tensor(Shape3{4, 4, 3}, 17);
  EXPECT_NEAR(tnn(a), testing::bcirc_nuclear(a), 1e-8);
  EXPECT_NEAR(spectral_norm(a), testing::bcirc_spectral(a), 1e-8);
}

TEST(OracleEquivalence, RandomShapesAgreeWithBcirc) {
  std::mt19937_64 gen(18);
  for (int trial = 0; trial < 120; ++trial) {
    const Shape3 s = random_small_shape(gen);
    std::uniform_int_distribution<std::size_t> dm(1, 5);
    const std::size_t m = dm(gen);
    const DenseTensor a = random_tensor(s, 2000 + trial);
    const DenseTensor b = random_tensor(Shape3{s.n2, m, s.n3}, 3000 + trial);
    EXPECT_LT(max_abs_diff(tprod(a, b), testing::bcirc_tprod(a, b)), 1e-8);
    EXPECT_NEAR(tnn(a), testing::bcirc_nuclear(a), 1e-8);
    EXPECT_NEAR(spectral_norm(a), testing::bcirc_spectral(a), 1e-8);
    EXPECT_NEAR(average_rank(a), testing::bcirc_average_rank(a, rank_threshold(s)), 1e-8);
    // Low-rank inputs exercise the rank cut.
    const DenseTensor low = tprod(random_tensor(Shape3{s.n1, 1, s.n3}, 4000 + trial),
                                  random_tensor(Shape3{1, s.n2, s.n3}, 5000 + trial));
    EXPECT_NEAR(average_rank(low), testing::bcirc_average_rank(low, rank_threshold(s)), 1e-8);
  }
}

TEST(ConvexEnvelope, TnnBelowAverageRankOnSpectralBall) {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape3 s = random_small_shape(gen);
    const DenseTensor a = random_unit_spectral(s, 6000 + trial);
    EXPECT_LE(tnn(a), average_rank(a) + 1e-8);
    const DenseTensor low = tprod(random_tensor(Shape3{s.n1, 1, s.n3}, 7000 + trial),
                                  random_tensor(Shape3{1, s.n2, s.n3}, 8000 + trial));
    const DenseTensor scaled = low * (1.0 / spectral_norm(low));
    EXPECT_LE(tnn(scaled), average_rank(scaled) + 1e-8);
  }
}

TEST(ConvexEnvelope, TnnIsConvexTriangleAndHomogeneous) {
  std::mt19937_64 gen(20);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape3 s = random_small_shape(gen);
    const DenseTensor a = random_tensor(s, 9000 + trial);
    const DenseTensor b = random_tensor(s, 9500 + trial);
    const double theta = unif(gen);
    EXPECT_LE(tnn(theta * a + (1.0 - theta) * b), theta * tnn(a) + (1.0 - theta) * tnn(b) + 1e-8);
    EXPECT_LE(tnn(a + b), tnn(a) + tnn(b) + 1e-8);
    const double c = 4.0 * unif(gen) - 2.0;
    EXPECT_NEAR(tnn(c * a), std::abs(c) * tnn(a), 1e-10 * (1.0 + tnn(a)));
  }
}

TEST(Tsvt, ZeroThresholdIsIdentityMap) {
  const DenseTensor a = random_tensor(Shape3{4, 3, 5}, 21);
  EXPECT_LT(max_abs_diff(tsvt(a, 0.0), a), 1e-12);
}

TEST(Tsvt, ShrinksIdentityUniformly) {
  for (double tau : {0.0, 0.25, 0.5, 1.0, 1.5}) {
    const DenseTensor expected = identity_tensor(3, 4) * std::max(0.0, 1.0 - tau);
    EXPECT_LT(max_abs_diff(tsvt(identity_tensor(3, 4), tau), expected), 1e-12) << tau;
  }
}

TEST(Tsvt, RejectsNegativeThreshold) {
  EXPECT_THROW(tsvt(identity_tensor(2, 2), -0.1), InvalidArgument);
}

TEST(Tsvt, ResidualIsASubgradient) {
  const DenseTensor a = random_tensor(Shape3{3, 3, 4}, 22);
  const double tau = 0.5;
  const DenseTensor x = tsvt(a, tau);
  const SubgradientCheck check = check_tnn_subgradient(x, (a - x) * (1.0 / tau));
  EXPECT_TRUE(check.holds(1e-8)) << check.orthogonality_residual << " " << check.w_spectral_norm << " "
                                 << check.alignment_residual;
}

TEST(Tsvt, ProxCharacterization) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> unif(0.05, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    const Shape3 s = random_small_shape(gen);
    const DenseTensor a = random_tensor(s, 10000 + trial);
    const double tau = unif(gen);
    const DenseTensor x = tsvt(a, tau);
    const DenseTensor r = a - x;
    EXPECT_LE(spectral_norm(r), tau + 1e-8);
    EXPECT_NEAR(inner_product(r, x), tau * tnn(x), 1e-6);
  }
}

TEST(Tsvt, MinimizesProxObjectiveAgainstPerturbations) {
  const DenseTensor a = random_tensor(Shape3{3, 4, 3}, 24);
  const double tau = 0.7;
  const auto objective = [&](const DenseTensor& x) {
    const double f = frobenius_norm(x - a);
    return tau * tnn(x) + 0.5 * f * f;
  };
  const DenseTensor x = tsvt(a, tau);
  const double best = objective(x);
  for (int trial = 0; trial < 50; ++trial)
    EXPECT_LE(best, objective(x + random_tensor(a.shape(), 11000 + trial, 1e-2)) + 1e-12);
}

TEST(Subgradient, ZeroScaleAlignsWithTnn) {
  const DenseTensor a = random_tensor(Shape3{4, 3, 5}, 25);
  const Subgradient g = tnn_subgradient(a, 0.0);
  EXPECT_EQ(infinity_norm(g.W), 0.0);
  EXPECT_NEAR(inner_product(g.G, a), tnn(a), 1e-8);
  const TSvdFactors f = tsvd(a);
  EXPECT_LT(max_abs_diff(g.G, tprod(f.U, ttranspose(f.V))), 1e-10);
}

TEST(Subgradient, IdentityGivesIdentity) {
  EXPECT_LT(max_abs_diff(tnn_subgradient(identity_tensor(3, 4), 0.0).G, identity_tensor(3, 4)), 1e-12);
}

TEST(Subgradient, ScaledComplementStaysInBall) {
  const DenseTensor a = tprod(random_tensor(Shape3{5, 2, 4}, 26), random_tensor(Shape3{2, 6, 4}, 27));
  const Subgradient g = tnn_subgradient(a, 0.9, 5);
  EXPECT_LE(spectral_norm(g.G), 1.0 + 1e-8);
  EXPECT_NEAR(spectral_norm(g.W), 0.9, 1e-8);
  const TSvdFactors f = tsvd(a);
  EXPECT_LT(infinity_norm(tprod(ttranspose(f.U), g.W)), 1e-8);
  EXPECT_LT(infinity_norm(tprod(g.W, f.V)), 1e-8);
  EXPECT_NEAR(inner_product(g.G, a), tnn(a), 1e-8);
  EXPECT_TRUE(check_tnn_subgradient(a, g.G).holds(1e-8));
}

TEST(Subgradient, ZeroTensorReturnsComplementOnly) {
  const Subgradient g = tnn_subgradient(DenseTensor(Shape3{3, 3, 2}), 0.5, 1);
  EXPECT_LT(max_abs_diff(g.G, g.W), 1e-15);
  EXPECT_NEAR(spectral_norm(g.G), 0.5, 1e-10);
}

TEST(Subgradient, RejectsScaleOutsideUnitInterval) {
  EXPECT_THROW(tnn_subgradient(identity_tensor(2, 2), 1.5), InvalidArgument);
  EXPECT_THROW(tnn_subgradient(identity_tensor(2, 2), -0.1), InvalidArgument);
}

TEST(Subgradient, SubgradientInequality) {
  std::mt19937_64 gen(28);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape3 s = random_small_shape(gen);
    const DenseTensor a = tprod(random_tensor(Shape3{s.n1, 1, s.n3}, 12000 + trial),
                                random_tensor(Shape3{1, s.n2, s.n3}, 12500 + trial));
    const DenseTensor b = random_tensor(s, 13000 + trial);
    const Subgradient g = tnn_subgradient(a, unif(gen), trial);
    EXPECT_GE(tnn(b), tnn(a) + inner_product(g.G, b - a) - 1e-6);
  }
}

}  // namespace
}  // namespace trpca
