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

#include "trpca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trpca/certificate.hpp"
#include "trpca/error.hpp"
#include "trpca/projections.hpp"
#include "trpca/t_algebra.hpp"

namespace trpca {

SolverConfig SolverConfig::defaults_for(const Shape3& shape) {
  SolverConfig cfg;
  cfg.lambda = default_lambda(shape);
  return cfg;
}

void SolverConfig::validate() const {
  if (!(lambda > 0.0)) throw InvalidArgument("solver: lambda must be positive");
  if (!(mu0 > 0.0)) throw InvalidArgument("solver: mu0 must be positive");
  if (!(mu0 <= mu_max)) throw InvalidArgument("solver: mu0 must not exceed mu_max");
  if (!(rho_mu >= 1.0)) throw InvalidArgument("solver: rho_mu must be at least 1");
  if (!(tol > 0.0)) throw InvalidArgument("solver: tol must be positive");
  if (max_iter == 0) throw InvalidArgument("solver: max_iter must be positive");
}

DenseTensor soft_threshold(const DenseTensor& t, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("soft_threshold: tau must be nonnegative");
  DenseTensor out = t;
  for (double& v : out.values()) {
    const double mag = std::abs(v) - tau;
    v = mag > 0.0 ? std::copysign(mag, v) : 0.0;
  }
  return out;
}

TrpcaSolution solve(const DenseTensor& x, const SolverConfig& cfg) {
  cfg.validate();
  if (!x.all_finite()) throw InvalidArgument("solve: input tensor has non-finite entries");

  const Shape3& shape = x.shape();
  const double scale = std::max(1.0, frobenius_norm(x));
  DenseTensor l(shape), s(shape), y(shape);
  double mu = cfg.mu0;

  TrpcaSolution sol;
  DenseTensor best_l = l, best_s = s;
  double best_primal = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    const double inv_mu = 1.0 / mu;
    DenseTensor y_scaled = y * inv_mu;

    detail::ShrinkResult low_rank = detail::tsvt_with_norm(x - s + y_scaled, inv_mu);
    DenseTensor s_next = soft_threshold(x - low_rank.value + y_scaled, cfg.lambda * inv_mu);
    DenseTensor residual = x - low_rank.value - s_next;

    const double change = std::max(frobenius_norm(low_rank.value - l), frobenius_norm(s_next - s)) / scale;
    const double primal = frobenius_norm(residual) / scale;
    sol.dual_residuals.push_back(mu * frobenius_norm(s_next - s));

    l = std::move(low_rank.value);
    s = std::move(s_next);
    residual *= mu;
    y += residual;
    mu = std::min(cfg.rho_mu * mu, cfg.mu_max);

    sol.iterations = it;
    sol.primal_residuals.push_back(primal);
    sol.objective_trace.push_back(low_rank.nuclear_norm + cfg.lambda * l1_norm(s));

    if (primal <= cfg.tol && change <= cfg.tol) {
      sol.converged = true;
      break;
    }
    if (primal < best_primal) {
      best_primal = primal;
      best_l = l;
      best_s = s;
    }
  }

  if (sol.converged) {
    sol.L = std::move(l);
    sol.S = std::move(s);
  } else {
    sol.L = std::move(best_l);
    sol.S = std::move(best_s);
  }
  return sol;
}

namespace {

double relative_error(const DenseTensor& est, const DenseTensor& truth) {
  const double err = frobenius_norm(est - truth);
  const double base = frobenius_norm(truth);
  return base > 0.0 ? err / base : err;
}

}  // namespace

RecoveryReport recovery_report(const TrpcaSolution& sol, const DenseTensor& l0, const DenseTensor& s0) {
  detail::require_same_shape(sol.L.shape(), l0.shape(), "recovery_report");
  detail::require_same_shape(sol.S.shape(), s0.shape(), "recovery_report");

  RecoveryReport rep;
  rep.rel_error_L = relative_error(sol.L, l0);
  rep.rel_error_S = relative_error(sol.S, s0);
  rep.tubal_rank_L = tubal_rank(sol.L);

  const SupportSet estimated = SupportSet::support_of(sol.S, 1e-6 * infinity_norm(sol.S));
  const SupportSet truth = SupportSet::support_of(s0, 1e-6 * infinity_norm(s0));
  const double hits = static_cast<double>(estimated.intersect(truth).size());
  rep.support_precision = estimated.is_empty() ? 1.0 : hits / static_cast<double>(estimated.size());
  rep.support_recall = truth.is_empty() ? 1.0 : hits / static_cast<double>(truth.size());
  return rep;
}

}  // namespace trpca
