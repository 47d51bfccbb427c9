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
#include <vector>

#include "trpca/tensor.hpp"

namespace trpca {

/// ADMM parameters for min ||L||_* + lambda ||S||_1 s.t. L + S = X.
struct SolverConfig {
  double lambda = 0.0;
  double mu0 = 1e-3;
  double mu_max = 1e10;
  double rho_mu = 1.1;
  double tol = 1e-8;
  std::size_t max_iter = 1000;

  /// Default schedule with lambda = default_lambda(shape).
  static SolverConfig defaults_for(const Shape3& shape);

  /// Throws InvalidArgument on lambda <= 0, mu0 <= 0, mu0 > mu_max,
  /// rho_mu < 1, tol <= 0 or max_iter == 0.
  void validate() const;
};

struct TrpcaSolution {
  DenseTensor L;
  DenseTensor S;
  std::size_t iterations = 0;
  /// ||X - L - S||_F / max(1, ||X||_F) after every iteration.
  std::vector<double> primal_residuals;
  /// ||L||_* + lambda ||S||_1 after every iteration.
  std::vector<double> objective_trace;
  /// mu ||S_k - S_{k-1}||_F, logged only.
  std::vector<double> dual_residuals;
  bool converged = false;
};

/// Entrywise sgn(x) * max(|x| - tau, 0).
DenseTensor soft_threshold(const DenseTensor& t, double tau);

/// Inexact augmented Lagrangian iteration:
///   L <- tsvt(X - S + Y/mu, 1/mu)
///   S <- soft_threshold(X - L + Y/mu, lambda/mu)
///   Y <- Y + mu (X - L - S),  mu <- min(rho_mu mu, mu_max)
/// until both the primal residual and the relative change of (L, S) are
/// below tol. Without convergence the iterate with the smallest primal
/// residual is returned and converged is false.
TrpcaSolution solve(const DenseTensor& x, const SolverConfig& cfg);

struct RecoveryReport {
  double rel_error_L = 0.0;
  double rel_error_S = 0.0;
  double support_precision = 1.0;
  double support_recall = 1.0;
  std::size_t tubal_rank_L = 0;
};

/// Relative errors are ||est - truth||_F / ||truth||_F, or the absolute
/// error when the truth is zero. Supports count entries above
/// 1e-6 * ||.||_inf of the respective tensor.
RecoveryReport recovery_report(const TrpcaSolution& sol, const DenseTensor& l0, const DenseTensor& s0);

}  // namespace trpca
