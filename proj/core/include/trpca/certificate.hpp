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
#include <span>
#include <string>
#include <vector>

#include "trpca/projections.hpp"
#include "trpca/random_models.hpp"
#include "trpca/tensor.hpp"

namespace trpca {

/// lambda = 1 / sqrt(max(n1, n2) * n3).
double default_lambda(const Shape3& shape);

struct ResidualNorms {
  double frobenius = 0.0;
  double infinity = 0.0;
};

struct GolfingResult {
  DenseTensor W_L;
  /// Norms of Z_j = U*V^* - P_T(Y_j) for j = 0..j0.
  std::vector<ResidualNorms> residuals;
};

/// Golfing scheme: Y_0 = 0, Y_j = Y_{j-1} + q^{-1} P_{Omega_j} P_T(U*V^* - Y_{j-1}),
/// W_L = P_T-perp(Y_j0). Y_j0 is supported on the union of the rounds.
GolfingResult golfing_wl(const TangentSpace& t, std::span<const SupportSet> partition, double q);

struct NeumannOptions {
  /// Stop once a term's Frobenius norm is <= tol * ||P_Omega rhs||_F.
  double tol = 1e-10;
  std::size_t max_terms = 200;
};

struct NeumannResult {
  DenseTensor X;
  std::size_t terms = 0;
  double last_term_norm = 0.0;
  bool converged = false;
};

/// Sum over k >= 0 of (P_Omega P_T P_Omega)^k P_Omega(rhs), i.e. the inverse of
/// P_Omega - P_Omega P_T P_Omega on Omega. Throws NumericalError when term
/// norms fail to decrease over 5 consecutive terms, which signals
/// ||P_Omega P_T|| >= 1.
NeumannResult neumann_apply(const SupportSet& omega, const TangentSpace& t, const DenseTensor& rhs,
                            const NeumannOptions& options = {});

/// W_S = lambda P_T-perp (P_Omega - P_Omega P_T P_Omega)^{-1} sgn(S0).
/// sign_tensor must vanish outside omega. Throws NumericalError if the
/// series diverges or does not reach tolerance within max_terms.
DenseTensor build_ws(const SupportSet& omega, const TangentSpace& t, const DenseTensor& sign_tensor, double lambda,
                     const NeumannOptions& options = {});

struct DualCertificate {
  DenseTensor W_L;
  DenseTensor W_S;
  std::vector<ResidualNorms> golfing_residuals;
  std::size_t neumann_terms = 0;
  GolfingConfig config;
};

/// Full construction: partition of Omega^c, golfing scheme for W_L and least
/// squares for W_S. The golfing rate follows the density of omega unless a
/// config is supplied.
DualCertificate construct_certificate(const TangentSpace& t, const SupportSet& omega,
                                      const DenseTensor& sign_tensor, double lambda, std::uint64_t seed,
                                      const NeumannOptions& options = {});
DualCertificate construct_certificate(const TangentSpace& t, const SupportSet& omega,
                                      const DenseTensor& sign_tensor, double lambda, const GolfingConfig& config,
                                      std::uint64_t seed, const NeumannOptions& options = {});

struct CertificateReport {
  double tangent_residual = 0.0;    // ||P_T(W)||_F
  double spectral_WL = 0.0;         // ||W_L||
  double spectral_WS = 0.0;         // ||W_S||
  double spectral_sum = 0.0;        // ||W_L + W_S||
  double omega_residual_F = 0.0;    // ||P_Omega(U*V^* + W - lambda sgn(S0))||_F
  double omega_comp_infty = 0.0;    // ||P_Omega-perp(U*V^* + W)||_inf
  double low_rank_omega_F = 0.0;    // ||P_Omega(U*V^* + W_L)||_F
  double low_rank_comp_infty = 0.0; // ||P_Omega-perp(U*V^* + W_L)||_inf
  double sparse_comp_infty = 0.0;   // ||P_Omega-perp W_S||_inf
  double lambda = 0.0;

  bool in_T_perp = false;
  bool spectral_ok = false;    // ||W|| < 1/2
  bool omega_ok = false;       // <= lambda / 4
  bool complement_ok = false;  // < lambda / 2
  /// Conditions (a), (b), (c) on W_L: ||W_L|| < 1/4, low_rank_omega_F < lambda/4,
  /// low_rank_comp_infty < lambda/4.
  bool lemma32[3] = {false, false, false};
  /// Conditions (a), (b) on W_S: ||W_S|| < 1/4, sparse_comp_infty < lambda/4.
  bool lemma33[2] = {false, false};
  bool passed = false;
};

/// Evaluates every certificate condition. Never throws on a failed
/// condition; inconsistent shapes still raise ShapeError.
CertificateReport verify_certificate(const DenseTensor& W_L, const DenseTensor& W_S, const TangentSpace& t,
                                     const SupportSet& omega, const DenseTensor& sign_tensor, double lambda);

struct OptimalityOptions {
  std::uint64_t seed = 0;
  /// ||X - L - S||_F must not exceed this times max(1, ||X||_F).
  double feasibility_tol = 1e-6;
  NeumannOptions neumann;
};

/// Residuals of U*V^* + W = lambda (sgn(S) + F + P_Omega D) for a candidate
/// pair, with G = U*V^* + W built by the certificate construction.
struct OptimalityReport {
  double w_spectral = 0.0;    // ||W||, needs <= 1/2
  double f_infinity = 0.0;    // ||F||_inf, needs <= 1/2
  double d_frobenius = 0.0;   // ||P_Omega D||_F, needs <= 1/4
  double tangent_residual = 0.0;
  bool w_ok = false;
  bool f_ok = false;
  bool d_ok = false;
  bool construction_failed = false;
  std::string failure;
  bool holds = false;
};

/// Throws InvalidArgument when L + S differs from X.
OptimalityReport check_optimality(const DenseTensor& x, const DenseTensor& l_hat, const DenseTensor& s_hat,
                                  const TangentSpace& t, const SupportSet& omega, double lambda,
                                  const OptimalityOptions& options = {});

/// Derives T from the skinny t-SVD of l_hat and Omega from the support of
/// s_hat (entries above 1e-6 * ||s_hat||_inf).
OptimalityReport check_optimality(const DenseTensor& x, const DenseTensor& l_hat, const DenseTensor& s_hat,
                                  double lambda, const OptimalityOptions& options = {});

}  // namespace trpca
