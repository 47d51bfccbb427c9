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
#include <string>

#include <Eigen/SVD>

#include "trpca/error.hpp"
#include "trpca/rng.hpp"

namespace trpca {

namespace detail {

namespace {

// Rotates each singular pair so the largest-magnitude entry of u is real
// and positive. Extra columns of a full U or V are rotated on their own.
void canonicalize_phases(Eigen::MatrixXcd& u, Eigen::MatrixXcd& v) {
  const Eigen::Index paired = std::min(u.cols(), v.cols());
  auto phase_of = [](const auto& column) {
    Eigen::Index p = 0;
    column.cwiseAbs().maxCoeff(&p);
    const Complex pivot = column(p);
    const double mag = std::abs(pivot);
    return mag > 0.0 ? std::conj(pivot / mag) : Complex(1.0, 0.0);
  };
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    const Complex rot = phase_of(u.col(c));
    u.col(c) *= rot;
    if (c < paired) v.col(c) *= rot;
  }
  for (Eigen::Index c = paired; c < v.cols(); ++c) v.col(c) *= phase_of(v.col(c));
}

}  // namespace

SliceSvd slice_svd(const Eigen::MatrixXcd& m, bool real_slice, bool full) {
  const unsigned options =
      full ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  SliceSvd out;
  if (real_slice) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.real(), options);
    out.U = svd.matrixU().cast<Complex>();
    out.V = svd.matrixV().cast<Complex>();
    out.sigma = svd.singularValues();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, options);
    out.U = svd.matrixU();
    out.V = svd.matrixV();
    out.sigma = svd.singularValues();
  }
  if (!out.sigma.allFinite() || !out.U.allFinite() || !out.V.allFinite()) {
    throw NumericalError("SVD of a Fourier slice produced non-finite values");
  }
  canonicalize_phases(out.U, out.V);
  return out;
}

SpectralTensor spectral_product(const SpectralTensor& a, const SpectralTensor& b) {
  const Shape3 shape{a.shape().n1, b.shape().n2, a.shape().n3};
  return map_independent_slices(shape, [&](std::size_t k) -> Eigen::MatrixXcd { return a.slice(k) * b.slice(k); });
}

}  // namespace detail

namespace {

double largest_singular_value(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

// Singular values of the independent slices, wrapped with the slice index so
// that errors can name the failing slice.
std::vector<detail::SliceSvd> independent_svds(const SpectralTensor& spec, bool full) {
  const std::size_t n3 = spec.shape().n3;
  std::vector<detail::SliceSvd> out;
  out.reserve(independent_slices(n3));
  for (std::size_t k = 0; k < independent_slices(n3); ++k) {
    try {
      out.push_back(detail::slice_svd(spec.slice(k), detail::is_self_conjugate_slice(k, n3), full));
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (Fourier slice " + std::to_string(k) + ")");
    }
  }
  return out;
}

double global_sigma_max(const std::vector<detail::SliceSvd>& svds) {
  double m = 0.0;
  for (const auto& s : svds)
    if (s.sigma.size() > 0) m = std::max(m, s.sigma(0));
  return m;
}

std::size_t count_above(const Eigen::VectorXd& sigma, double cut) {
  std::size_t n = 0;
  for (Eigen::Index t = 0; t < sigma.size(); ++t)
    if (sigma(t) > cut) ++n;
  return n;
}

// Slices n3/2+1.. mirror earlier ones, so they carry weight 2 in sums over
// all slices; the self-conjugate slices carry weight 1.
double mirror_weight(std::size_t k, std::size_t n3) { return detail::is_self_conjugate_slice(k, n3) ? 1.0 : 2.0; }

TSvdFactors assemble_tsvd(const DenseTensor& a, const std::vector<detail::SliceSvd>& svds, std::size_t width,
                          std::size_t tubal, bool full) {
  const Shape3& s = a.shape();
  const std::size_t u_cols = full ? s.n1 : width;
  const std::size_t v_cols = full ? s.n2 : width;
  const Shape3 u_shape{s.n1, u_cols, s.n3};
  const Shape3 v_shape{s.n2, v_cols, s.n3};
  const Shape3 s_shape{u_cols, v_cols, s.n3};

  auto u_bar = detail::map_independent_slices(u_shape, [&](std::size_t k) -> Eigen::MatrixXcd {
    return svds[k].U.leftCols(u_cols);
  });
  auto v_bar = detail::map_independent_slices(v_shape, [&](std::size_t k) -> Eigen::MatrixXcd {
    return svds[k].V.leftCols(v_cols);
  });
  auto s_bar = detail::map_independent_slices(s_shape, [&](std::size_t k) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(u_cols, v_cols);
    const Eigen::Index keep = std::min<Eigen::Index>(svds[k].sigma.size(), std::min(u_cols, v_cols));
    for (Eigen::Index t = 0; t < keep; ++t) d(t, t) = svds[k].sigma(t);
    return d;
  });
  return {detail::idft_real(u_bar), detail::idft_real(s_bar), detail::idft_real(v_bar), tubal};
}

}  // namespace

DenseTensor tprod(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape().n2 != b.shape().n1 || a.shape().n3 != b.shape().n3) {
    throw ShapeError("tprod: cannot multiply " + to_string(a.shape()) + " by " + to_string(b.shape()));
  }
  return detail::idft_real(detail::spectral_product(detail::dft_real(a), detail::dft_real(b)));
}

DenseTensor ttranspose(const DenseTensor& a) {
  const Shape3& s = a.shape();
  DenseTensor out(Shape3{s.n2, s.n1, s.n3});
  for (std::size_t i = 0; i < s.n1; ++i)
    for (std::size_t j = 0; j < s.n2; ++j)
      for (std::size_t k = 0; k < s.n3; ++k) out(j, i, (s.n3 - k) % s.n3) = a(i, j, k);
  return out;
}

DenseTensor identity_tensor(std::size_t n, std::size_t n3) {
  DenseTensor out(Shape3{n, n, n3});
  for (std::size_t i = 0; i < n; ++i) out(i, i, 0) = 1.0;
  return out;
}

DenseTensor basis_e_ring(std::size_t i, std::size_t n, std::size_t n3) {
  if (i >= n) throw ShapeError("basis_e_ring: index " + std::to_string(i) + " out of range");
  DenseTensor out(Shape3{n, 1, n3});
  out(i, 0, 0) = 1.0;
  return out;
}

DenseTensor basis_e_dot(std::size_t k, std::size_t n3) {
  if (k >= n3) throw ShapeError("basis_e_dot: index " + std::to_string(k) + " out of range");
  DenseTensor out(Shape3{1, 1, n3});
  out(0, 0, k) = 1.0;
  return out;
}

DenseTensor basis_e(const Shape3& shape, std::size_t i, std::size_t j, std::size_t k) {
  if (i >= shape.n1 || j >= shape.n2 || k >= shape.n3) {
    throw ShapeError("basis_e: index out of range for shape " + to_string(shape));
  }
  DenseTensor out(shape);
  out(i, j, k) = 1.0;
  return out;
}

double rank_threshold(const Shape3& shape) {
  return 1e-10 * static_cast<double>(std::max(shape.larger(), shape.n3));
}

TSvdFactors tsvd(const DenseTensor& a, TsvdMode mode) {
  const bool full = mode == TsvdMode::kFull;
  const auto svds = independent_svds(detail::dft_real(a), full);
  const double cut = rank_threshold(a.shape()) * global_sigma_max(svds);
  std::size_t tubal = 0;
  for (const auto& s : svds) tubal = std::max(tubal, count_above(s.sigma, cut));
  return assemble_tsvd(a, svds, std::max<std::size_t>(tubal, 1), tubal, full);
}

TSvdFactors tsvd_truncated(const DenseTensor& a, std::size_t rank) {
  if (rank == 0 || rank > a.shape().smaller()) {
    throw InvalidArgument("tsvd_truncated: rank " + std::to_string(rank) + " outside [1, " +
                          std::to_string(a.shape().smaller()) + "]");
  }
  const auto svds = independent_svds(detail::dft_real(a), false);
  return assemble_tsvd(a, svds, rank, rank, false);
}

std::vector<Eigen::VectorXd> fourier_singular_values(const DenseTensor& a) {
  const auto svds = independent_svds(detail::dft_real(a), false);
  const std::size_t n3 = a.shape().n3;
  std::vector<Eigen::VectorXd> out(n3);
  for (std::size_t k = 0; k < n3; ++k) {
    const std::size_t source = k < svds.size() ? k : n3 - k;
    out[k] = svds[source].sigma;
  }
  return out;
}

std::size_t tubal_rank(const DenseTensor& a) {
  const auto svds = independent_svds(detail::dft_real(a), false);
  const double cut = rank_threshold(a.shape()) * global_sigma_max(svds);
  std::size_t r = 0;
  for (const auto& s : svds) r = std::max(r, count_above(s.sigma, cut));
  return r;
}

double average_rank(const DenseTensor& a) {
  const auto svds = independent_svds(detail::dft_real(a), false);
  const double cut = rank_threshold(a.shape()) * global_sigma_max(svds);
  const std::size_t n3 = a.shape().n3;
  double total = 0.0;
  for (std::size_t k = 0; k < svds.size(); ++k)
    total += mirror_weight(k, n3) * static_cast<double>(count_above(svds[k].sigma, cut));
  return total / static_cast<double>(n3);
}

double tnn(const DenseTensor& a) {
  const auto svds = independent_svds(detail::dft_real(a), false);
  const std::size_t n3 = a.shape().n3;
  double total = 0.0;
  for (std::size_t k = 0; k < svds.size(); ++k) total += mirror_weight(k, n3) * svds[k].sigma.sum();
  return total / static_cast<double>(n3);
}

double spectral_norm(const DenseTensor& a) {
  const SpectralTensor spec = detail::dft_real(a);
  double m = 0.0;
  for (std::size_t k = 0; k < independent_slices(a.shape().n3); ++k)
    m = std::max(m, largest_singular_value(spec.slice(k)));
  return m;
}

namespace detail {

ShrinkResult tsvt_with_norm(const DenseTensor& a, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("tsvt: threshold must be nonnegative");
  const SpectralTensor spec = dft_real(a);
  const std::size_t n3 = a.shape().n3;
  double nuclear = 0.0;
  auto shrunk = map_independent_slices(a.shape(), [&](std::size_t k) -> Eigen::MatrixXcd {
    const auto svd = slice_svd(spec.slice(k), is_self_conjugate_slice(k, n3));
    Eigen::Index keep = 0;
    while (keep < svd.sigma.size() && svd.sigma(keep) > tau) ++keep;
    if (keep == 0) return Eigen::MatrixXcd::Zero(a.shape().n1, a.shape().n2);
    const Eigen::VectorXd shrunk_sigma = svd.sigma.head(keep).array() - tau;
    nuclear += mirror_weight(k, n3) * shrunk_sigma.sum();
    return svd.U.leftCols(keep) * shrunk_sigma.asDiagonal() * svd.V.leftCols(keep).adjoint();
  });
  return {idft_real(shrunk), nuclear / static_cast<double>(n3)};
}

}  // namespace detail

DenseTensor tsvt(const DenseTensor& a, double tau) {
  if (tau == 0.0) return a;
  return detail::tsvt_with_norm(a, tau).value;
}

namespace {

struct ActiveSubspaces {
  std::vector<Eigen::MatrixXcd> U;  // independent slices only
  std::vector<Eigen::MatrixXcd> V;
};

ActiveSubspaces active_subspaces(const SpectralTensor& spec) {
  const auto svds = independent_svds(spec, false);
  const double cut = rank_threshold(spec.shape()) * global_sigma_max(svds);
  ActiveSubspaces out;
  for (const auto& s : svds) {
    const auto r = static_cast<Eigen::Index>(count_above(s.sigma, cut));
    out.U.push_back(s.U.leftCols(r));
    out.V.push_back(s.V.leftCols(r));
  }
  return out;
}

Eigen::MatrixXcd project_complement(const Eigen::MatrixXcd& z, const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
  const Eigen::MatrixXcd left = z - u * (u.adjoint() * z);
  return left - (left * v) * v.adjoint();
}

}  // namespace

Subgradient tnn_subgradient(const DenseTensor& a, double w_scale, std::uint64_t seed) {
  if (!(w_scale >= 0.0 && w_scale <= 1.0)) throw InvalidArgument("tnn_subgradient: w_scale must lie in [0, 1]");
  const Shape3& s = a.shape();
  const SpectralTensor spec = detail::dft_real(a);
  const ActiveSubspaces active = active_subspaces(spec);

  SpectralTensor w_bar(s);
  if (w_scale > 0.0) {
    Philox4x32 rng(seed);
    DenseTensor z(s);
    for (double& v : z.values()) v = rng.normal();
    const SpectralTensor z_bar = detail::dft_real(z);
    w_bar = detail::map_independent_slices(s, [&](std::size_t k) -> Eigen::MatrixXcd {
      return project_complement(z_bar.slice(k), active.U[k], active.V[k]);
    });
    double norm = 0.0;
    for (std::size_t k = 0; k < independent_slices(s.n3); ++k)
      norm = std::max(norm, largest_singular_value(w_bar.slice(k)));
    // A trivial complement (full-rank slices everywhere) leaves W = 0.
    const double scale = norm > 1e-12 ? w_scale / norm : 0.0;
    for (std::size_t k = 0; k < s.n3; ++k) w_bar.slice(k) *= scale;
  }

  auto g_bar = detail::map_independent_slices(s, [&](std::size_t k) -> Eigen::MatrixXcd {
    return active.U[k] * active.V[k].adjoint() + w_bar.slice(k);
  });
  return {detail::idft_real(g_bar), detail::idft_real(w_bar)};
}

SubgradientCheck check_tnn_subgradient(const DenseTensor& a, const DenseTensor& g) {
  detail::require_same_shape(a.shape(), g.shape(), "check_tnn_subgradient");
  const SpectralTensor a_bar = detail::dft_real(a);
  const SpectralTensor g_bar = detail::dft_real(g);
  const ActiveSubspaces active = active_subspaces(a_bar);

  SubgradientCheck check;
  for (std::size_t k = 0; k < independent_slices(a.shape().n3); ++k) {
    const Eigen::MatrixXcd w = g_bar.slice(k) - active.U[k] * active.V[k].adjoint();
    check.orthogonality_residual =
        std::max({check.orthogonality_residual, (active.U[k].adjoint() * w).norm(), (w * active.V[k]).norm()});
    check.w_spectral_norm = std::max(check.w_spectral_norm, largest_singular_value(w));
  }
  check.alignment_residual = std::abs(inner_product(g, a) - tnn(a));
  return check;
}

}  // namespace trpca
