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

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace trpca {

using Complex = std::complex<double>;

/// Dimensions n1 x n2 x n3 of a third-order tensor. Frontal slices are
/// n1 x n2; tubes run along the third mode.
struct Shape3 {
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  std::size_t n3 = 1;

  std::size_t size() const noexcept { return n1 * n2 * n3; }
  /// max(n1, n2)
  std::size_t larger() const noexcept { return n1 > n2 ? n1 : n2; }
  /// min(n1, n2)
  std::size_t smaller() const noexcept { return n1 < n2 ? n1 : n2; }

  friend bool operator==(const Shape3&, const Shape3&) = default;
};

std::string to_string(const Shape3& shape);

/// Throws ShapeError if any dimension is zero.
void validate(const Shape3& shape);

/// Dense real tensor. Storage is tube-contiguous: element (i, j, k) lives at
/// offset (i * n2 + j) * n3 + k, so every tube is a stride-1 run.
class DenseTensor {
 public:
  /// A 1x1x1 zero tensor.
  DenseTensor();
  /// Zero tensor of the given shape.
  explicit DenseTensor(Shape3 shape);
  DenseTensor(Shape3 shape, std::vector<double> values);

  static DenseTensor zeros(Shape3 shape) { return DenseTensor(shape); }

  const Shape3& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return (i * shape_.n2 + j) * shape_.n3 + k;
  }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data_[offset(i, j, k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[offset(i, j, k)];
  }
  /// Bounds-checked element access.
  double at(std::size_t i, std::size_t j, std::size_t k) const;

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  /// Frontal slice k as an n1 x n2 matrix (copy).
  Eigen::MatrixXd frontal_slice(std::size_t k) const;
  void set_frontal_slice(std::size_t k, const Eigen::MatrixXd& slice);

  bool all_finite() const noexcept;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(double scale) noexcept;

  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(DenseTensor a, double s) { return a *= s; }
  friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }
  friend DenseTensor operator-(DenseTensor a) { return a *= -1.0; }

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Shape3 shape_;
  std::vector<double> data_;
};

/// A tensor in the mode-3 Fourier domain, stored as n3 complex n1 x n2
/// slices. The transform of a real tensor satisfies
/// slice(k) == conj(slice((n3 - k) mod n3)).
class SpectralTensor {
 public:
  SpectralTensor() : SpectralTensor(Shape3{}) {}
  explicit SpectralTensor(Shape3 shape);
  SpectralTensor(Shape3 shape, std::vector<Eigen::MatrixXcd> slices);

  const Shape3& shape() const noexcept { return shape_; }

  Eigen::MatrixXcd& slice(std::size_t k) { return slices_[k]; }
  const Eigen::MatrixXcd& slice(std::size_t k) const { return slices_[k]; }
  std::span<const Eigen::MatrixXcd> slices() const noexcept { return slices_; }

  double frobenius_norm() const;

  /// Largest |slice(k) - conj(slice(n3 - k))| entry over all slice pairs.
  double conjugate_symmetry_residual() const;

 private:
  Shape3 shape_;
  std::vector<Eigen::MatrixXcd> slices_;
};

/// Number of Fourier slices that determine a conjugate-symmetric spectrum.
inline std::size_t independent_slices(std::size_t n3) noexcept { return n3 / 2 + 1; }

/// Unnormalized DFT of every tube.
SpectralTensor dft_mode3(const DenseTensor& t);

/// Default relative tolerance for the imaginary residual in idft_mode3.
inline constexpr double kDefaultSymmetryTolerance = 1e-8;

/// Inverse DFT of every tube (carries the 1/n3 factor). Throws
/// NumericalError, quoting the largest imaginary residual, when that
/// residual exceeds rel_tol * ||t||_F.
DenseTensor idft_mode3(const SpectralTensor& t, double rel_tol = kDefaultSymmetryTolerance);

/// Largest |imag| of the inverse transform, without discarding anything.
double idft_imaginary_residual(const SpectralTensor& t);

/// Block-circulant matrix of size (n1 n3) x (n2 n3); block (p, q) holds
/// frontal slice (p - q) mod n3. Reference oracle only.
Eigen::MatrixXd bcirc(const DenseTensor& t);

/// Stacks the Fourier slices on the diagonal of an (n1 n3) x (n2 n3) matrix.
Eigen::MatrixXcd bdiag_unfold(const SpectralTensor& t);

/// Left inverse of bdiag_unfold. Throws NumericalError when the mass outside
/// the diagonal blocks exceeds rel_tol * ||m||_F.
SpectralTensor bdiag_fold(const Eigen::MatrixXcd& m, Shape3 shape, double rel_tol = 1e-12);

double inner_product(const DenseTensor& a, const DenseTensor& b);
/// Sum over all slices of conj(a) .* b.
Complex inner_product(const SpectralTensor& a, const SpectralTensor& b);

double frobenius_norm(const DenseTensor& t);
/// Largest absolute entry.
double infinity_norm(const DenseTensor& t);
/// Sum of absolute entries.
double l1_norm(const DenseTensor& t);

/// Largest absolute entrywise difference; shapes must agree.
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);

namespace detail {

void require_same_shape(const Shape3& a, const Shape3& b, const char* what);

/// Forward transform computing only the independent slices 0..n3/2; the rest
/// are filled by conjugation.
SpectralTensor dft_real(const DenseTensor& t);

/// Inverse transform of a spectrum known to be conjugate symmetric. Reads
/// only slices 0..n3/2 and skips the residual check.
DenseTensor idft_real(const SpectralTensor& t);

}  // namespace detail

}  // namespace trpca
