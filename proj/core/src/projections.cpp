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

#include "trpca/projections.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trpca/error.hpp"
#include "trpca/rng.hpp"
#include "trpca/t_algebra.hpp"

namespace trpca {

// ---------------------------------------------------------------------------
// SupportSet

SupportSet::SupportSet(Shape3 shape) : shape_(shape) {
  validate(shape_);
  mask_.assign(shape_.size(), 0);
}

SupportSet SupportSet::full(Shape3 shape) {
  SupportSet s(shape);
  std::fill(s.mask_.begin(), s.mask_.end(), std::uint8_t{1});
  s.count_ = s.mask_.size();
  return s;
}

SupportSet SupportSet::from_mask(Shape3 shape, std::vector<std::uint8_t> mask) {
  SupportSet s(shape);
  if (mask.size() != shape.size()) throw ShapeError("support mask does not match shape " + to_string(shape));
  for (auto& m : mask) m = m ? 1 : 0;
  s.mask_ = std::move(mask);
  s.count_ = static_cast<std::size_t>(std::count(s.mask_.begin(), s.mask_.end(), std::uint8_t{1}));
  return s;
}

SupportSet SupportSet::from_indices(Shape3 shape, std::span<const Index3> indices) {
  SupportSet s(shape);
  for (const auto& [i, j, k] : indices) {
    if (i >= shape.n1 || j >= shape.n2 || k >= shape.n3) {
      throw ShapeError("support index out of range for shape " + to_string(shape));
    }
    auto& slot = s.mask_[(i * shape.n2 + j) * shape.n3 + k];
    if (slot) throw ShapeError("duplicate support index");
    slot = 1;
    ++s.count_;
  }
  return s;
}

SupportSet SupportSet::support_of(const DenseTensor& t, double threshold) {
  std::vector<std::uint8_t> mask(t.size());
  const auto values = t.values();
  for (std::size_t n = 0; n < values.size(); ++n) mask[n] = std::abs(values[n]) > threshold;
  return from_mask(t.shape(), std::move(mask));
}

bool SupportSet::contains(std::size_t i, std::size_t j, std::size_t k) const {
  if (i >= shape_.n1 || j >= shape_.n2 || k >= shape_.n3) throw ShapeError("support query out of range");
  return mask_[(i * shape_.n2 + j) * shape_.n3 + k] != 0;
}

std::vector<Index3> SupportSet::indices() const {
  std::vector<Index3> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < shape_.n1; ++i)
    for (std::size_t j = 0; j < shape_.n2; ++j)
      for (std::size_t k = 0; k < shape_.n3; ++k)
        if (mask_[(i * shape_.n2 + j) * shape_.n3 + k]) out.push_back({i, j, k});
  return out;
}

SupportSet SupportSet::complement() const {
  SupportSet s(shape_);
  for (std::size_t n = 0; n < mask_.size(); ++n) s.mask_[n] = mask_[n] ? 0 : 1;
  s.count_ = mask_.size() - count_;
  return s;
}

SupportSet SupportSet::unite(const SupportSet& other) const {
  detail::require_same_shape(shape_, other.shape_, "SupportSet::unite");
  std::vector<std::uint8_t> mask(mask_.size());
  for (std::size_t n = 0; n < mask_.size(); ++n) mask[n] = mask_[n] | other.mask_[n];
  return from_mask(shape_, std::move(mask));
}

SupportSet SupportSet::intersect(const SupportSet& other) const {
  detail::require_same_shape(shape_, other.shape_, "SupportSet::intersect");
  std::vector<std::uint8_t> mask(mask_.size());
  for (std::size_t n = 0; n < mask_.size(); ++n) mask[n] = mask_[n] & other.mask_[n];
  return from_mask(shape_, std::move(mask));
}

DenseTensor project_omega(const DenseTensor& z, const SupportSet& omega) {
  detail::require_same_shape(z.shape(), omega.shape(), "project_omega");
  DenseTensor out = z;
  auto values = out.values();
  const auto mask = omega.mask();
  for (std::size_t n = 0; n < values.size(); ++n)
    if (!mask[n]) values[n] = 0.0;
  return out;
}

DenseTensor project_omega_complement(const DenseTensor& z, const SupportSet& omega) {
  detail::require_same_shape(z.shape(), omega.shape(), "project_omega_complement");
  DenseTensor out = z;
  auto values = out.values();
  const auto mask = omega.mask();
  for (std::size_t n = 0; n < values.size(); ++n)
    if (mask[n]) values[n] = 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// TangentSpace

namespace {

std::vector<Eigen::MatrixXcd> independent_spectrum(const DenseTensor& t) {
  const SpectralTensor spec = detail::dft_real(t);
  std::vector<Eigen::MatrixXcd> out;
  for (std::size_t k = 0; k < independent_slices(t.shape().n3); ++k) out.push_back(spec.slice(k));
  return out;
}

double orthonormality_defect(const std::vector<Eigen::MatrixXcd>& slices) {
  double worst = 0.0;
  for (const auto& s : slices) {
    const Eigen::MatrixXcd gram = s.adjoint() * s;
    worst = std::max(worst, (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TangentSpace::TangentSpace(Shape3 ambient)
    : ambient_(ambient), u_(Shape3{ambient.n1, 1, ambient.n3}), v_(Shape3{ambient.n2, 1, ambient.n3}) {}

TangentSpace TangentSpace::empty(Shape3 ambient) {
  validate(ambient);
  return TangentSpace(ambient);
}

TangentSpace::TangentSpace(DenseTensor u, DenseTensor v, double tol)
    : ambient_{u.shape().n1, v.shape().n1, u.shape().n3}, rank_(u.shape().n2), u_(std::move(u)), v_(std::move(v)) {
  if (u_.shape().n2 != v_.shape().n2 || u_.shape().n3 != v_.shape().n3) {
    throw ShapeError("tangent factors disagree: " + to_string(u_.shape()) + " vs " + to_string(v_.shape()));
  }
  if (rank_ > ambient_.smaller()) throw ShapeError("tangent rank exceeds min(n1, n2)");
  u_bar_ = independent_spectrum(u_);
  v_bar_ = independent_spectrum(v_);
  // The Fourier slices of U^* * U are the Gram matrices of the slices of U,
  // and U^* * U = I_r exactly when every Gram matrix is the identity.
  const double defect = std::max(orthonormality_defect(u_bar_), orthonormality_defect(v_bar_));
  if (!(defect <= tol)) {
    throw InvalidArgument("tangent factors are not t-orthonormal (defect " + std::to_string(defect) + ")");
  }
}

DenseTensor TangentSpace::uv_star() const {
  if (rank_ == 0) return DenseTensor(ambient_);
  return tprod(u_, ttranspose(v_));
}

DenseTensor TangentSpace::project(const DenseTensor& z) const {
  detail::require_same_shape(z.shape(), ambient_, "project_T");
  if (rank_ == 0) return DenseTensor(ambient_);
  const SpectralTensor z_bar = detail::dft_real(z);
  auto p = detail::map_independent_slices(ambient_, [&](std::size_t k) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd& u = u_bar_[k];
    const Eigen::MatrixXcd& v = v_bar_[k];
    const Eigen::MatrixXcd& zk = z_bar.slice(k);
    const Eigen::MatrixXcd utz = u.adjoint() * zk;    // r x n2
    const Eigen::MatrixXcd zv = zk * v;               // n1 x r
    const Eigen::MatrixXcd utzv = utz * v;            // r x r
    return u * utz + (zv - u * utzv) * v.adjoint();
  });
  return detail::idft_real(p);
}

DenseTensor TangentSpace::project_complement(const DenseTensor& z) const { return z - project(z); }

// ---------------------------------------------------------------------------
// Basis norms and coherence

double pt_basis_norm_sq(const TangentSpace& t, std::size_t i, std::size_t j, std::size_t k) {
  const Shape3& s = t.ambient();
  if (i >= s.n1 || j >= s.n2 || k >= s.n3) throw ShapeError("pt_basis_norm_sq: index out of range");
  if (t.rank() == 0) return 0.0;

  const DenseTensor ut_ei = tprod(ttranspose(t.U()), basis_e_ring(i, s.n1, s.n3));  // r x 1 x n3
  const DenseTensor vt_ej = tprod(ttranspose(t.V()), basis_e_ring(j, s.n2, s.n3));  // r x 1 x n3
  // e_k * e_j^* * V  ==  e_k * (V^* e_j)^*
  const DenseTensor tail = tprod(basis_e_dot(k, s.n3), ttranspose(vt_ej));          // 1 x r x n3
  const DenseTensor cross = tprod(ut_ei, tail);                                     // r x r x n3

  const double a = frobenius_norm(ut_ei);
  const double b = frobenius_norm(vt_ej);
  const double c = frobenius_norm(cross);
  return a * a + b * b - c * c;
}

IncoherenceReport incoherence_mu(const TangentSpace& t) {
  if (t.rank() == 0) throw InvalidArgument("incoherence_mu: tangent space has rank 0");
  const Shape3& s = t.ambient();
  const double r = static_cast<double>(t.rank());

  auto max_row_energy = [](const DenseTensor& f) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.shape().n1; ++i) {
      double energy = 0.0;
      for (std::size_t c = 0; c < f.shape().n2; ++c)
        for (std::size_t k = 0; k < f.shape().n3; ++k) energy += f(i, c, k) * f(i, c, k);
      worst = std::max(worst, energy);
    }
    return worst;
  };

  IncoherenceReport rep;
  rep.r = t.rank();
  const double n1 = static_cast<double>(s.n1), n2 = static_cast<double>(s.n2), n3 = static_cast<double>(s.n3);
  rep.mu_u = n1 * n3 / r * max_row_energy(t.U());
  rep.mu_v = n2 * n3 / r * max_row_energy(t.V());
  const double uv_inf = infinity_norm(t.uv_star());
  rep.mu_uv = n1 * n2 * n3 * n3 / r * uv_inf * uv_inf;
  rep.mu = std::max({rep.mu_u, rep.mu_v, rep.mu_uv});
  return rep;
}

// ---------------------------------------------------------------------------
// Power iteration

OperatorNormEstimate operator_norm(const LinearOperator& op, const Shape3& shape,
                                   const PowerIterationOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("operator_norm: tol must be positive");
  Philox4x32 rng(options.seed);
  DenseTensor x(shape);
  for (double& v : x.values()) v = rng.normal();
  x *= 1.0 / frobenius_norm(x);

  OperatorNormEstimate est;
  double previous = 0.0;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    DenseTensor y = op(x);
    detail::require_same_shape(y.shape(), shape, "operator_norm");
    const double lambda = inner_product(x, y);
    const double y_norm = frobenius_norm(y);
    est.iterations = it;
    est.eigenvalue = std::max(lambda, 0.0);
    if (y_norm == 0.0) {
      est.converged = true;
      break;
    }
    if (it > 1 && std::abs(lambda - previous) <= options.tol * std::abs(lambda)) {
      est.converged = true;
      break;
    }
    previous = lambda;
    x = std::move(y);
    x *= 1.0 / y_norm;
  }
  est.norm = std::sqrt(est.eigenvalue);
  return est;
}

}  // namespace trpca
