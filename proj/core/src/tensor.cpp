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

#include "trpca/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "trpca/error.hpp"

namespace trpca {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstTubeMap = Eigen::Map<const RowMajorMatrix>;
using TubeMap = Eigen::Map<RowMajorMatrix>;

// Twiddle factors are evaluated at (k * l) mod n so the argument of cos/sin
// never grows beyond 2*pi.
double twiddle_angle(std::size_t k, std::size_t l, std::size_t n) {
  return 2.0 * std::numbers::pi * static_cast<double>((k * l) % n) / static_cast<double>(n);
}

}  // namespace

std::string to_string(const Shape3& shape) {
  std::ostringstream os;
  os << shape.n1 << "x" << shape.n2 << "x" << shape.n3;
  return os.str();
}

void validate(const Shape3& shape) {
  if (shape.n1 == 0 || shape.n2 == 0 || shape.n3 == 0) {
    throw ShapeError("tensor dimensions must be positive, got " + to_string(shape));
  }
}

// ---------------------------------------------------------------------------
// DenseTensor

DenseTensor::DenseTensor() : DenseTensor(Shape3{}) {}

DenseTensor::DenseTensor(Shape3 shape) : shape_(shape) {
  validate(shape_);
  data_.assign(shape_.size(), 0.0);
}

DenseTensor::DenseTensor(Shape3 shape, std::vector<double> values)
    : shape_(shape), data_(std::move(values)) {
  validate(shape_);
  if (data_.size() != shape_.size()) {
    throw ShapeError("tensor of shape " + to_string(shape_) + " needs " +
                     std::to_string(shape_.size()) + " values, got " +
                     std::to_string(data_.size()));
  }
}

double DenseTensor::at(std::size_t i, std::size_t j, std::size_t k) const {
  if (i >= shape_.n1 || j >= shape_.n2 || k >= shape_.n3) {
    throw ShapeError("index out of range for tensor of shape " + to_string(shape_));
  }
  return (*this)(i, j, k);
}

Eigen::MatrixXd DenseTensor::frontal_slice(std::size_t k) const {
  Eigen::MatrixXd out(shape_.n1, shape_.n2);
  for (std::size_t i = 0; i < shape_.n1; ++i)
    for (std::size_t j = 0; j < shape_.n2; ++j) out(i, j) = (*this)(i, j, k);
  return out;
}

void DenseTensor::set_frontal_slice(std::size_t k, const Eigen::MatrixXd& slice) {
  if (static_cast<std::size_t>(slice.rows()) != shape_.n1 ||
      static_cast<std::size_t>(slice.cols()) != shape_.n2 || k >= shape_.n3) {
    throw ShapeError("frontal slice does not fit tensor of shape " + to_string(shape_));
  }
  for (std::size_t i = 0; i < shape_.n1; ++i)
    for (std::size_t j = 0; j < shape_.n2; ++j) (*this)(i, j, k) = slice(i, j);
}

bool DenseTensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  detail::require_same_shape(shape_, other.shape_, "tensor addition");
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += other.data_[n];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  detail::require_same_shape(shape_, other.shape_, "tensor subtraction");
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= other.data_[n];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double scale) noexcept {
  for (double& v : data_) v *= scale;
  return *this;
}

// ---------------------------------------------------------------------------
// SpectralTensor

SpectralTensor::SpectralTensor(Shape3 shape) : shape_(shape) {
  validate(shape_);
  slices_.assign(shape_.n3, Eigen::MatrixXcd::Zero(shape_.n1, shape_.n2));
}

SpectralTensor::SpectralTensor(Shape3 shape, std::vector<Eigen::MatrixXcd> slices)
    : shape_(shape), slices_(std::move(slices)) {
  validate(shape_);
  if (slices_.size() != shape_.n3) throw ShapeError("spectral tensor needs n3 slices");
  for (const auto& s : slices_) {
    if (static_cast<std::size_t>(s.rows()) != shape_.n1 ||
        static_cast<std::size_t>(s.cols()) != shape_.n2) {
      throw ShapeError("spectral slice does not match shape " + to_string(shape_));
    }
  }
}

double SpectralTensor::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& s : slices_) sum += s.squaredNorm();
  return std::sqrt(sum);
}

double SpectralTensor::conjugate_symmetry_residual() const {
  double worst = 0.0;
  const std::size_t n3 = shape_.n3;
  for (std::size_t k = 0; k < n3; ++k) {
    const std::size_t mirror = (n3 - k) % n3;
    worst = std::max(worst, (slices_[k] - slices_[mirror].conjugate()).cwiseAbs().maxCoeff());
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Mode-3 transforms

namespace detail {

void require_same_shape(const Shape3& a, const Shape3& b, const char* what) {
  if (!(a == b)) {
    throw ShapeError(std::string(what) + ": shape mismatch " + to_string(a) + " vs " +
                     to_string(b));
  }
}

SpectralTensor dft_real(const DenseTensor& t) {
  const Shape3& s = t.shape();
  const std::size_t tubes = s.n1 * s.n2;
  const std::size_t half = independent_slices(s.n3);

  Eigen::MatrixXd cos_table(s.n3, half), sin_table(s.n3, half);
  for (std::size_t l = 0; l < s.n3; ++l) {
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = twiddle_angle(k, l, s.n3);
      cos_table(l, k) = std::cos(angle);
      sin_table(l, k) = std::sin(angle);
    }
  }

  ConstTubeMap tube_rows(t.values().data(), tubes, s.n3);
  const Eigen::MatrixXd re = tube_rows * cos_table;
  const Eigen::MatrixXd im = -(tube_rows * sin_table);

  SpectralTensor out(s);
  for (std::size_t k = 0; k < half; ++k) {
    Eigen::MatrixXcd& slice = out.slice(k);
    for (std::size_t i = 0; i < s.n1; ++i)
      for (std::size_t j = 0; j < s.n2; ++j) {
        const std::size_t row = i * s.n2 + j;
        slice(i, j) = Complex(re(row, k), im(row, k));
      }
  }
  for (std::size_t k = half; k < s.n3; ++k) out.slice(k) = out.slice(s.n3 - k).conjugate();
  return out;
}

DenseTensor idft_real(const SpectralTensor& t) {
  const Shape3& s = t.shape();
  const std::size_t tubes = s.n1 * s.n2;
  const std::size_t half = independent_slices(s.n3);

  // Real part of sum_k X_k e^{+i theta} folds the mirrored slices into a
  // weight of 2; slice 0 and (for even n3) slice n3/2 are counted once.
  Eigen::MatrixXd cos_table(half, s.n3), sin_table(half, s.n3);
  const double inv_n3 = 1.0 / static_cast<double>(s.n3);
  for (std::size_t k = 0; k < half; ++k) {
    const bool self_mirror = (k == 0) || (2 * k == s.n3);
    const double weight = (self_mirror ? 1.0 : 2.0) * inv_n3;
    for (std::size_t l = 0; l < s.n3; ++l) {
      const double angle = twiddle_angle(k, l, s.n3);
      cos_table(k, l) = weight * std::cos(angle);
      sin_table(k, l) = weight * std::sin(angle);
    }
  }

  Eigen::MatrixXd re(tubes, half), im(tubes, half);
  for (std::size_t k = 0; k < half; ++k) {
    const Eigen::MatrixXcd& slice = t.slice(k);
    for (std::size_t i = 0; i < s.n1; ++i)
      for (std::size_t j = 0; j < s.n2; ++j) {
        const std::size_t row = i * s.n2 + j;
        re(row, k) = slice(i, j).real();
        im(row, k) = slice(i, j).imag();
      }
  }

  DenseTensor out(s);
  TubeMap tube_rows(out.values().data(), tubes, s.n3);
  tube_rows.noalias() = re * cos_table;
  tube_rows.noalias() -= im * sin_table;
  return out;
}

}  // namespace detail

SpectralTensor dft_mode3(const DenseTensor& t) { return detail::dft_real(t); }

namespace {

// Full complex inverse; the imaginary part is returned separately so the
// caller can judge conjugate symmetry.
std::pair<DenseTensor, DenseTensor> idft_complex(const SpectralTensor& t) {
  const Shape3& s = t.shape();
  const std::size_t tubes = s.n1 * s.n2;

  Eigen::MatrixXcd table(s.n3, s.n3);
  const double inv_n3 = 1.0 / static_cast<double>(s.n3);
  for (std::size_t k = 0; k < s.n3; ++k)
    for (std::size_t l = 0; l < s.n3; ++l) table(k, l) = std::polar(inv_n3, twiddle_angle(k, l, s.n3));

  Eigen::MatrixXcd spectra(tubes, s.n3);
  for (std::size_t k = 0; k < s.n3; ++k) {
    const Eigen::MatrixXcd& slice = t.slice(k);
    for (std::size_t i = 0; i < s.n1; ++i)
      for (std::size_t j = 0; j < s.n2; ++j) spectra(i * s.n2 + j, k) = slice(i, j);
  }
  const Eigen::MatrixXcd tubes_out = spectra * table;

  DenseTensor re(s), im(s);
  TubeMap(re.values().data(), tubes, s.n3) = tubes_out.real();
  TubeMap(im.values().data(), tubes, s.n3) = tubes_out.imag();
  return {std::move(re), std::move(im)};
}

}  // namespace

double idft_imaginary_residual(const SpectralTensor& t) {
  return infinity_norm(idft_complex(t).second);
}

DenseTensor idft_mode3(const SpectralTensor& t, double rel_tol) {
  auto [re, im] = idft_complex(t);
  const double residual = infinity_norm(im);
  const double limit = rel_tol * t.frobenius_norm();
  if (residual > limit) {
    std::ostringstream os;
    os << "inverse DFT left an imaginary residual of " << residual << " (limit " << limit
       << "); the spectrum is not conjugate symmetric";
    throw NumericalError(os.str());
  }
  return std::move(re);
}

// ---------------------------------------------------------------------------
// Reference block matrices

Eigen::MatrixXd bcirc(const DenseTensor& t) {
  const Shape3& s = t.shape();
  Eigen::MatrixXd out(s.n1 * s.n3, s.n2 * s.n3);
  for (std::size_t p = 0; p < s.n3; ++p) {
    for (std::size_t q = 0; q < s.n3; ++q) {
      const std::size_t k = (p + s.n3 - q) % s.n3;
      out.block(p * s.n1, q * s.n2, s.n1, s.n2) = t.frontal_slice(k);
    }
  }
  return out;
}

Eigen::MatrixXcd bdiag_unfold(const SpectralTensor& t) {
  const Shape3& s = t.shape();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(s.n1 * s.n3, s.n2 * s.n3);
  for (std::size_t k = 0; k < s.n3; ++k) out.block(k * s.n1, k * s.n2, s.n1, s.n2) = t.slice(k);
  return out;
}

SpectralTensor bdiag_fold(const Eigen::MatrixXcd& m, Shape3 shape, double rel_tol) {
  validate(shape);
  if (static_cast<std::size_t>(m.rows()) != shape.n1 * shape.n3 ||
      static_cast<std::size_t>(m.cols()) != shape.n2 * shape.n3) {
    throw ShapeError("block-diagonal matrix does not match shape " + to_string(shape));
  }
  SpectralTensor out(shape);
  double diagonal_mass = 0.0;
  for (std::size_t k = 0; k < shape.n3; ++k) {
    out.slice(k) = m.block(k * shape.n1, k * shape.n2, shape.n1, shape.n2);
    diagonal_mass += out.slice(k).squaredNorm();
  }
  const double total = m.squaredNorm();
  const double off = std::sqrt(std::max(0.0, total - diagonal_mass));
  if (off > rel_tol * std::sqrt(total)) {
    std::ostringstream os;
    os << "matrix is not block diagonal: off-block Frobenius mass " << off;
    throw NumericalError(os.str());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inner products and norms

double inner_product(const DenseTensor& a, const DenseTensor& b) {
  detail::require_same_shape(a.shape(), b.shape(), "inner_product");
  const auto x = a.values();
  const auto y = b.values();
  double sum = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) sum += x[n] * y[n];
  return sum;
}

Complex inner_product(const SpectralTensor& a, const SpectralTensor& b) {
  detail::require_same_shape(a.shape(), b.shape(), "inner_product");
  Complex sum = 0.0;
  for (std::size_t k = 0; k < a.shape().n3; ++k) sum += a.slice(k).cwiseProduct(b.slice(k).conjugate()).sum();
  return std::conj(sum);
}

double frobenius_norm(const DenseTensor& t) {
  double sum = 0.0;
  for (double v : t.values()) sum += v * v;
  return std::sqrt(sum);
}

double infinity_norm(const DenseTensor& t) {
  double worst = 0.0;
  for (double v : t.values()) worst = std::max(worst, std::abs(v));
  return worst;
}

double l1_norm(const DenseTensor& t) {
  double sum = 0.0;
  for (double v : t.values()) sum += std::abs(v);
  return sum;
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  detail::require_same_shape(a.shape(), b.shape(), "max_abs_diff");
  const auto x = a.values();
  const auto y = b.values();
  double worst = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) worst = std::max(worst, std::abs(x[n] - y[n]));
  return worst;
}

}  // namespace trpca
