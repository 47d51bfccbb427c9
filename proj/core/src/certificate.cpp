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

#include "trpca/certificate.hpp"

#include <cmath>
#include <string>

#include "trpca/error.hpp"
#include "trpca/t_algebra.hpp"

namespace trpca {

double default_lambda(const Shape3& shape) {
  validate(shape);
  return 1.0 / std::sqrt(static_cast<double>(shape.larger() * shape.n3));
}

GolfingResult golfing_wl(const TangentSpace& t, std::span<const SupportSet> partition, double q) {
  if (partition.empty()) throw InvalidArgument("golfing_wl: the partition is empty");
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("golfing_wl: q must lie in (0, 1]");

  GolfingResult out;
  DenseTensor z = t.uv_star();
  DenseTensor y(t.ambient());
  out.residuals.push_back({frobenius_norm(z), infinity_norm(z)});
  for (const SupportSet& round : partition) {
    // P_T(U*V^* - Y_{j-1}) is Z_{j-1}, so only the sampled increment needs
    // projecting back onto T.
    DenseTensor step = project_omega(z, round);
    step *= 1.0 / q;
    y += step;
    z -= t.project(step);
    out.residuals.push_back({frobenius_norm(z), infinity_norm(z)});
  }
  out.W_L = t.project_complement(y);
  return out;
}

NeumannResult neumann_apply(const SupportSet& omega, const TangentSpace& t, const DenseTensor& rhs,
                            const NeumannOptions& options) {
  detail::require_same_shape(omega.shape(), rhs.shape(), "neumann_apply");
  NeumannResult out;
  DenseTensor term = project_omega(rhs, omega);
  const double base = frobenius_norm(term);
  out.X = term;
  if (base == 0.0) {
    out.converged = true;
    return out;
  }
  out.terms = 1;
  out.last_term_norm = base;

  double previous = base;
  int stalled = 0;
  while (out.terms < options.max_terms) {
    term = project_omega(t.project(term), omega);
    const double norm = frobenius_norm(term);
    out.last_term_norm = norm;
    if (norm == 0.0) {
      out.converged = true;
      break;
    }
    out.X += term;
    ++out.terms;
    if (norm <= options.tol * base) {
      out.converged = true;
      break;
    }
    stalled = norm >= previous * (1.0 - 1e-12) ? stalled + 1 : 0;
    if (stalled >= 5) {
      throw NumericalError("Neumann series diverges: term norms stopped decreasing (||P_Omega P_T|| >= 1)");
    }
    previous = norm;
  }
  return out;
}

namespace {

NeumannResult sign_series(const SupportSet& omega, const TangentSpace& t, const DenseTensor& sign_tensor,
                          const NeumannOptions& options) {
  if (infinity_norm(project_omega_complement(sign_tensor, omega)) != 0.0) {
    throw InvalidArgument("build_ws: sign tensor is not supported on omega");
  }
  NeumannResult series = neumann_apply(omega, t, sign_tensor, options);
  if (!series.converged) {
    throw NumericalError("Neumann series did not reach tolerance within " + std::to_string(options.max_terms) +
                         " terms");
  }
  return series;
}

}  // namespace

DenseTensor build_ws(const SupportSet& omega, const TangentSpace& t, const DenseTensor& sign_tensor, double lambda,
                     const NeumannOptions& options) {
  DenseTensor ws = t.project_complement(sign_series(omega, t, sign_tensor, options).X);
  ws *= lambda;
  return ws;
}

namespace {

DualCertificate assemble(const TangentSpace& t, const SupportSet& omega, const DenseTensor& sign_tensor,
                         double lambda, const GolfingConfig& config, std::uint64_t seed,
                         const NeumannOptions& options) {
  DualCertificate cert;
  cert.config = config;
  if (omega.size() == omega.shape().size()) {
    // Omega^c is empty: no round can sample anything and Y_j0 = 0.
    const DenseTensor z = t.uv_star();
    cert.W_L = DenseTensor(omega.shape());
    cert.golfing_residuals.push_back({frobenius_norm(z), infinity_norm(z)});
  } else {
    const auto partition = partition_complement(omega, config, seed);
    GolfingResult g = golfing_wl(t, partition, config.q);
    cert.W_L = std::move(g.W_L);
    cert.golfing_residuals = std::move(g.residuals);
  }
  const NeumannResult series = sign_series(omega, t, sign_tensor, options);
  cert.neumann_terms = series.terms;
  cert.W_S = t.project_complement(series.X);
  cert.W_S *= lambda;
  return cert;
}

}  // namespace

DualCertificate construct_certificate(const TangentSpace& t, const SupportSet& omega,
                                      const DenseTensor& sign_tensor, double lambda, const GolfingConfig& config,
                                      std::uint64_t seed, const NeumannOptions& options) {
  return assemble(t, omega, sign_tensor, lambda, config, seed, options);
}

DualCertificate construct_certificate(const TangentSpace& t, const SupportSet& omega,
                                      const DenseTensor& sign_tensor, double lambda, std::uint64_t seed,
                                      const NeumannOptions& options) {
  GolfingConfig config;
  if (omega.size() < omega.shape().size()) {
    config = GolfingConfig::for_shape(omega.shape(), omega.density());
  } else {
    config.rho = 1.0;
    config.q = 0.0;
  }
  return assemble(t, omega, sign_tensor, lambda, config, seed, options);
}

CertificateReport verify_certificate(const DenseTensor& W_L, const DenseTensor& W_S, const TangentSpace& t,
                                     const SupportSet& omega, const DenseTensor& sign_tensor, double lambda) {
  detail::require_same_shape(W_L.shape(), t.ambient(), "verify_certificate");
  detail::require_same_shape(W_S.shape(), t.ambient(), "verify_certificate");
  detail::require_same_shape(sign_tensor.shape(), t.ambient(), "verify_certificate");
  detail::require_same_shape(omega.shape(), t.ambient(), "verify_certificate");

  CertificateReport rep;
  rep.lambda = lambda;
  const DenseTensor w = W_L + W_S;
  const DenseTensor uv = t.uv_star();

  rep.tangent_residual = frobenius_norm(t.project(w));
  rep.spectral_WL = spectral_norm(W_L);
  rep.spectral_WS = spectral_norm(W_S);
  rep.spectral_sum = spectral_norm(w);
  rep.omega_residual_F = frobenius_norm(project_omega(uv + w - lambda * sign_tensor, omega));
  rep.omega_comp_infty = infinity_norm(project_omega_complement(uv + w, omega));
  rep.low_rank_omega_F = frobenius_norm(project_omega(uv + W_L, omega));
  rep.low_rank_comp_infty = infinity_norm(project_omega_complement(uv + W_L, omega));
  rep.sparse_comp_infty = infinity_norm(project_omega_complement(W_S, omega));

  rep.in_T_perp = rep.tangent_residual <= 1e-6 * std::max(1.0, frobenius_norm(w));
  rep.spectral_ok = rep.spectral_sum < 0.5;
  rep.omega_ok = rep.omega_residual_F <= lambda / 4.0;
  rep.complement_ok = rep.omega_comp_infty < lambda / 2.0;
  rep.lemma32[0] = rep.spectral_WL < 0.25;
  rep.lemma32[1] = rep.low_rank_omega_F < lambda / 4.0;
  rep.lemma32[2] = rep.low_rank_comp_infty < lambda / 4.0;
  rep.lemma33[0] = rep.spectral_WS < 0.25;
  rep.lemma33[1] = rep.sparse_comp_infty < lambda / 4.0;
  rep.passed = rep.in_T_perp && rep.spectral_ok && rep.omega_ok && rep.complement_ok;
  return rep;
}

namespace {

DenseTensor sign_of(const DenseTensor& s, const SupportSet& omega) {
  DenseTensor out(s.shape());
  const auto in = s.values();
  auto dst = out.values();
  for (std::size_t n = 0; n < in.size(); ++n)
    if (omega.contains_offset(n)) dst[n] = static_cast<double>((in[n] > 0.0) - (in[n] < 0.0));
  return out;
}

}  // namespace

OptimalityReport check_optimality(const DenseTensor& x, const DenseTensor& l_hat, const DenseTensor& s_hat,
                                  const TangentSpace& t, const SupportSet& omega, double lambda,
                                  const OptimalityOptions& options) {
  detail::require_same_shape(x.shape(), l_hat.shape(), "check_optimality");
  detail::require_same_shape(x.shape(), s_hat.shape(), "check_optimality");
  if (!(lambda > 0.0)) throw InvalidArgument("check_optimality: lambda must be positive");
  const double gap = frobenius_norm(x - l_hat - s_hat);
  if (gap > options.feasibility_tol * std::max(1.0, frobenius_norm(x))) {
    throw InvalidArgument("check_optimality: infeasible pair, ||X - L - S||_F = " + std::to_string(gap));
  }

  OptimalityReport rep;
  const DenseTensor sign = sign_of(s_hat, omega);
  DenseTensor w(x.shape());
  try {
    const DualCertificate cert = construct_certificate(t, omega, sign, lambda, options.seed, options.neumann);
    w = cert.W_L + cert.W_S;
  } catch (const NumericalError& e) {
    rep.construction_failed = true;
    rep.failure = e.what();
    return rep;
  }

  const DenseTensor g = t.uv_star() + w;
  rep.tangent_residual = frobenius_norm(t.project(w));
  rep.w_spectral = spectral_norm(w);
  rep.f_infinity = infinity_norm(project_omega_complement(g, omega)) / lambda;
  rep.d_frobenius = frobenius_norm(project_omega((1.0 / lambda) * g - sign, omega));
  rep.w_ok = rep.w_spectral <= 0.5;
  rep.f_ok = rep.f_infinity <= 0.5;
  rep.d_ok = rep.d_frobenius <= 0.25;
  rep.holds = rep.w_ok && rep.f_ok && rep.d_ok;
  return rep;
}

OptimalityReport check_optimality(const DenseTensor& x, const DenseTensor& l_hat, const DenseTensor& s_hat,
                                  double lambda, const OptimalityOptions& options) {
  const double s_max = infinity_norm(s_hat);
  const SupportSet omega =
      s_max > 0.0 ? SupportSet::support_of(s_hat, 1e-6 * s_max) : SupportSet::empty(s_hat.shape());
  TSvdFactors f = tsvd(l_hat, TsvdMode::kSkinny);
  const TangentSpace t =
      f.tubal_rank == 0 ? TangentSpace::empty(l_hat.shape()) : TangentSpace(std::move(f.U), std::move(f.V));
  return check_optimality(x, l_hat, s_hat, t, omega, lambda, options);
}

}  // namespace trpca
