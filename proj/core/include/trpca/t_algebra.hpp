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

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trpca/tensor.hpp"

namespace trpca {

/// t-product: the n1 x n2 x n3 tensor whose block-circulant matrix is
/// bcirc(a) * bcirc(b). Computed slicewise in the Fourier domain.
DenseTensor tprod(const DenseTensor& a, const DenseTensor& b);

/// Tensor transpose: transposes every frontal slice and reverses the order of
/// slices 2..n3.
DenseTensor ttranspose(const DenseTensor& a);

/// n x n x n3 identity: first frontal slice I_n, the others zero.
DenseTensor identity_tensor(std::size_t n, std::size_t n3);

/// Column basis: n x 1 x n3 tensor with a single 1 at (i, 0, 0).
DenseTensor basis_e_ring(std::size_t i, std::size_t n, std::size_t n3);
/// Tube basis: 1 x 1 x n3 tensor with a single 1 at (0, 0, k).
DenseTensor basis_e_dot(std::size_t k, std::size_t n3);
/// Unit tensor e_ijk of the given shape.
DenseTensor basis_e(const Shape3& shape, std::size_t i, std::size_t j, std::size_t k);

enum class TsvdMode { kFull, kSkinny };

/// Factors of A = U * S * V^*. In skinny mode U is n1 x r x n3, S is
/// r x r x n3 and V is n2 x r x n3 with r the tubal rank; a zero tensor keeps
/// one zero column so the product still reconstructs it.
struct TSvdFactors {
  DenseTensor U;
  DenseTensor S;
  DenseTensor V;
  std::size_t tubal_rank = 0;
};

TSvdFactors tsvd(const DenseTensor& a, TsvdMode mode = TsvdMode::kSkinny);

/// Skinny t-SVD keeping exactly `rank` singular tubes, whether or not the
/// trailing ones vanish. Requires 1 <= rank <= min(n1, n2).
TSvdFactors tsvd_truncated(const DenseTensor& a, std::size_t rank);

/// Singular values of every Fourier slice, largest first. Slice k of the
/// result has min(n1, n2) entries.
std::vector<Eigen::VectorXd> fourier_singular_values(const DenseTensor& a);

/// Relative cut-off below which singular values count as zero:
/// 1e-10 * max(max(n1, n2), n3).
double rank_threshold(const Shape3& shape);

std::size_t tubal_rank(const DenseTensor& a);
/// (1/n3) * sum of Fourier-slice ranks, i.e. rank(bcirc(a)) / n3.
double average_rank(const DenseTensor& a);

/// Tensor nuclear norm: (1/n3) * sum of all Fourier-slice singular values.
double tnn(const DenseTensor& a);
/// Tensor spectral norm: largest singular value over all Fourier slices.
double spectral_norm(const DenseTensor& a);

/// Proximal operator of tau * tnn: every Fourier-slice singular value is
/// shrunk by tau.
DenseTensor tsvt(const DenseTensor& a, double tau);

/// An element G = U*V^* + W of the TNN subdifferential.
struct Subgradient {
  DenseTensor G;
  DenseTensor W;
};

/// Builds a subgradient of tnn at a. W is a random element of the
/// orthogonal complement of the active singular subspaces, scaled to
/// spectral norm w_scale (zero when that complement is trivial). For a
/// zero tensor the subdifferential is the unit spectral ball and G = W.
Subgradient tnn_subgradient(const DenseTensor& a, double w_scale, std::uint64_t seed = 0);

/// Numerical evidence that g lies in the subdifferential of tnn at a.
struct SubgradientCheck {
  /// max over slices of ||U_k^* W_k|| and ||W_k V_k|| (Frobenius).
  double orthogonality_residual = 0.0;
  /// Spectral norm of W = G - U*V^*.
  double w_spectral_norm = 0.0;
  /// |<G, A> - tnn(A)|.
  double alignment_residual = 0.0;

  bool holds(double tol) const {
    return orthogonality_residual <= tol && w_spectral_norm <= 1.0 + tol && alignment_residual <= tol;
  }
};

SubgradientCheck check_tnn_subgradient(const DenseTensor& a, const DenseTensor& g);

namespace detail {

/// Applies fn(k) to the independent slices and fills the rest by
/// conjugation.
template <typename Fn>
SpectralTensor map_independent_slices(Shape3 shape, Fn&& fn) {
  SpectralTensor out(shape);
  const std::size_t half = independent_slices(shape.n3);
  for (std::size_t k = 0; k < half; ++k) out.slice(k) = fn(k);
  for (std::size_t k = half; k < shape.n3; ++k) out.slice(k) = out.slice(shape.n3 - k).conjugate();
  return out;
}

/// True for the slices of a real tensor's spectrum that are themselves real.
inline bool is_self_conjugate_slice(std::size_t k, std::size_t n3) { return k == 0 || 2 * k == n3; }

/// Thin SVD of one Fourier slice with deterministic phases: the largest
/// magnitude entry of every left singular vector is real and positive.
/// Self-conjugate slices are decomposed in real arithmetic.
struct SliceSvd {
  Eigen::MatrixXcd U;
  Eigen::VectorXd sigma;
  Eigen::MatrixXcd V;
};

SliceSvd slice_svd(const Eigen::MatrixXcd& m, bool real_slice, bool full = false);

struct ShrinkResult {
  DenseTensor value;
  double nuclear_norm = 0.0;  // tnn(value)
};

/// tsvt that also reports the TNN of its output.
ShrinkResult tsvt_with_norm(const DenseTensor& a, double tau);

/// Slicewise product of two spectra (conjugate symmetric in, out).
SpectralTensor spectral_product(const SpectralTensor& a, const SpectralTensor& b);

}  // namespace detail

}  // namespace trpca
