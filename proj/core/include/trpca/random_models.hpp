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

#include "trpca/projections.hpp"
#include "trpca/tensor.hpp"

namespace trpca {

/// Omega ~ Ber(rho): every index is included independently with
/// probability rho.
SupportSet sample_bernoulli_support(const Shape3& shape, double rho, std::uint64_t seed);

/// Entries are +1 w.p. rho/2, 0 w.p. 1 - rho and -1 w.p. rho/2; support and
/// signs are drawn from independent streams.
DenseTensor sample_sign_tensor(const Shape3& shape, double rho, std::uint64_t seed);

/// Symmetric +-1 signs on the members of omega, zero elsewhere.
DenseTensor sample_signs_on(const SupportSet& omega, std::uint64_t seed);

/// A random low-tubal-rank tensor L = P * Q^* with i.i.d. standard normal P
/// (n1 x r x n3) and Q (n2 x r x n3), together with the tangent space
/// spanned by its leading r singular tubes.
struct LowRankSample {
  DenseTensor L;
  TangentSpace tangent;
};

/// Requires r <= min(n1, n2). r = 0 yields the zero tensor and T = {0}.
LowRankSample sample_low_tubal_rank(const Shape3& shape, std::size_t r, std::uint64_t seed);

/// Parameters of the golfing-scheme partition of Omega^c into j0 Bernoulli
/// rounds with rate q, linked by (1 - q)^j0 = rho.
struct GolfingConfig {
  std::size_t j0 = 1;
  double q = 1.0;
  double rho = 0.0;

  /// j0 = 2 * ceil(ln(max(n1, n2) * n3)), at least 1; q = 1 - rho^(1/j0).
  static GolfingConfig for_shape(const Shape3& shape, double rho);
  static GolfingConfig with_rounds(std::size_t j0, double rho);

  /// Throws InvalidArgument unless j0 >= 1, 0 < q <= 1, 0 <= rho < 1 and
  /// |(1 - q)^j0 - rho| <= 1e-12.
  void validate() const;
};

/// Splits Omega^c into j0 sets. Each index of Omega^c draws its pattern of
/// memberships over the j0 rounds from independent Ber(q) trials
/// conditioned on at least one success; indices of Omega join no round. The
/// union is therefore exactly Omega^c, and when Omega ~ Ber(rho) every
/// round is marginally Ber(q).
std::vector<SupportSet> partition_complement(const SupportSet& omega, const GolfingConfig& config,
                                             std::uint64_t seed);

}  // namespace trpca
