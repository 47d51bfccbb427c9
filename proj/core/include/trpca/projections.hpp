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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "trpca/tensor.hpp"

namespace trpca {

using Index3 = std::array<std::size_t, 3>;

/// An index set Omega inside a tensor shape, stored as a dense membership
/// mask.
class SupportSet {
 public:
  SupportSet() : SupportSet(Shape3{}) {}
  /// The empty set.
  explicit SupportSet(Shape3 shape);

  static SupportSet empty(Shape3 shape) { return SupportSet(shape); }
  static SupportSet full(Shape3 shape);
  /// Nonzero mask entries are members; layout matches DenseTensor.
  static SupportSet from_mask(Shape3 shape, std::vector<std::uint8_t> mask);
  /// Throws ShapeError on out-of-range or duplicate triples.
  static SupportSet from_indices(Shape3 shape, std::span<const Index3> indices);
  /// Entries with |t(i,j,k)| > threshold.
  static SupportSet support_of(const DenseTensor& t, double threshold = 0.0);

  const Shape3& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return count_; }
  bool is_empty() const noexcept { return count_ == 0; }
  double density() const noexcept { return static_cast<double>(count_) / static_cast<double>(shape_.size()); }

  bool contains(std::size_t i, std::size_t j, std::size_t k) const;
  bool contains_offset(std::size_t offset) const noexcept { return mask_[offset] != 0; }
  std::span<const std::uint8_t> mask() const noexcept { return mask_; }

  /// Members in storage order.
  std::vector<Index3> indices() const;

  SupportSet complement() const;
  SupportSet unite(const SupportSet& other) const;
  SupportSet intersect(const SupportSet& other) const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  Shape3 shape_;
  std::vector<std::uint8_t> mask_;
  std::size_t count_ = 0;
};

/// P_Omega: keeps the entries inside omega.
DenseTensor project_omega(const DenseTensor& z, const SupportSet& omega);
/// P_Omega-perp: keeps the entries outside omega.
DenseTensor project_omega_complement(const DenseTensor& z, const SupportSet& omega);

/// The tangent space T = { U*Y^* + W*V^* } of a low-tubal-rank tensor with
/// t-orthonormal factors U (n1 x r x n3) and V (n2 x r x n3). Rank zero is
/// legal and means T = {0}.
class TangentSpace {
 public:
  /// Throws InvalidArgument when U^* * U or V^* * V deviates from the
  /// identity by more than tol (entrywise).
  TangentSpace(DenseTensor u, DenseTensor v, double tol = 1e-8);

  /// T = {0} inside tensors of the given shape.
  static TangentSpace empty(Shape3 ambient);

  const Shape3& ambient() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return rank_; }
  /// Factor tensors; meaningless (a single zero column) when rank() == 0.
  const DenseTensor& U() const noexcept { return u_; }
  const DenseTensor& V() const noexcept { return v_; }

  /// U * V^*.
  DenseTensor uv_star() const;

  /// P_T and P_T-perp evaluated slicewise in the Fourier domain.
  DenseTensor project(const DenseTensor& z) const;
  DenseTensor project_complement(const DenseTensor& z) const;

 private:
  TangentSpace(Shape3 ambient);

  Shape3 ambient_;
  std::size_t rank_ = 0;
  DenseTensor u_;
  DenseTensor v_;
  // Fourier slices 0..n3/2 of U and V.
  std::vector<Eigen::MatrixXcd> u_bar_;
  std::vector<Eigen::MatrixXcd> v_bar_;
};

/// P_T(z) = U*U^* *z + z*V*V^* - U*U^* *z*V*V^*.
inline DenseTensor project_T(const DenseTensor& z, const TangentSpace& t) { return t.project(z); }
/// P_T-perp(z) = (I - U*U^*) * z * (I - V*V^*).
inline DenseTensor project_T_complement(const DenseTensor& z, const TangentSpace& t) {
  return t.project_complement(z);
}

/// ||P_T(e_ijk)||_F^2 from the factor identity
/// ||U^* e_i||^2 + ||V^* e_j||^2 - ||U^* e_i * e_k * e_j^* V||^2.
double pt_basis_norm_sq(const TangentSpace& t, std::size_t i, std::size_t j, std::size_t k);

/// Coherence of the factors of a tangent space.
struct IncoherenceReport {
  double mu_u = 0.0;   // (n1 n3 / r) max_i ||U^* e_i||_F^2
  double mu_v = 0.0;   // (n2 n3 / r) max_j ||V^* e_j||_F^2
  double mu_uv = 0.0;  // (n1 n2 n3^2 / r) ||U*V^*||_inf^2
  double mu = 0.0;     // max of the three
  std::size_t r = 0;
};

/// Throws InvalidArgument for an empty tangent space.
IncoherenceReport incoherence_mu(const TangentSpace& t);

/// A linear map on tensors of a fixed shape. Must be re-entrant.
using LinearOperator = std::function<DenseTensor(const DenseTensor&)>;

struct PowerIterationOptions {
  double tol = 1e-10;
  std::size_t max_iter = 5000;
  std::uint64_t seed = 0x5eed;
};

struct OperatorNormEstimate {
  double norm = 0.0;        // sqrt of the largest eigenvalue
  double eigenvalue = 0.0;  // largest eigenvalue (Rayleigh quotient)
  std::size_t iterations = 0;
  bool converged = false;
};

/// Power iteration for a self-adjoint positive semidefinite operator. Stops
/// when consecutive Rayleigh quotients satisfy |l_t - l_{t-1}| <= tol * l_t.
/// Returns sqrt(l_max); on hitting max_iter the best estimate is returned
/// with converged = false.
OperatorNormEstimate operator_norm(const LinearOperator& op, const Shape3& shape,
                                   const PowerIterationOptions& options = {});

}  // namespace trpca
