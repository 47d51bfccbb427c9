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

#include "trpca/random_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trpca/error.hpp"
#include "trpca/rng.hpp"
#include "trpca/t_algebra.hpp"

namespace trpca {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(what) + ": probability must lie in [0, 1]");
}

DenseTensor gaussian_tensor(const Shape3& shape, Philox4x32& rng) {
  DenseTensor t(shape);
  for (double& v : t.values()) v = rng.normal();
  return t;
}

}  // namespace

SupportSet sample_bernoulli_support(const Shape3& shape, double rho, std::uint64_t seed) {
  require_probability(rho, "sample_bernoulli_support");
  validate(shape);
  Philox4x32 rng(derive_seed(seed, 0, "support"));
  std::vector<std::uint8_t> mask(shape.size());
  for (auto& m : mask) m = rng.bernoulli(rho) ? 1 : 0;
  return SupportSet::from_mask(shape, std::move(mask));
}

DenseTensor sample_signs_on(const SupportSet& omega, std::uint64_t seed) {
  Philox4x32 rng(derive_seed(seed, 0, "signs"));
  DenseTensor out(omega.shape());
  auto values = out.values();
  // One draw per index keeps the sign stream independent of the support.
  for (std::size_t n = 0; n < values.size(); ++n) {
    const double sign = (rng() & 1u) ? 1.0 : -1.0;
    if (omega.contains_offset(n)) values[n] = sign;
  }
  return out;
}

DenseTensor sample_sign_tensor(const Shape3& shape, double rho, std::uint64_t seed) {
  require_probability(rho, "sample_sign_tensor");
  return sample_signs_on(sample_bernoulli_support(shape, rho, seed), seed);
}

LowRankSample sample_low_tubal_rank(const Shape3& shape, std::size_t r, std::uint64_t seed) {
  validate(shape);
  if (r > shape.smaller()) {
    throw InvalidArgument("sample_low_tubal_rank: r = " + std::to_string(r) + " exceeds min(n1, n2) = " +
                          std::to_string(shape.smaller()));
  }
  if (r == 0) return {DenseTensor(shape), TangentSpace::empty(shape)};
  Philox4x32 rng(derive_seed(seed, 0, "low-rank"));
  const DenseTensor p = gaussian_tensor(Shape3{shape.n1, r, shape.n3}, rng);
  const DenseTensor q = gaussian_tensor(Shape3{shape.n2, r, shape.n3}, rng);
  DenseTensor l = tprod(p, ttranspose(q));
  TSvdFactors f = tsvd_truncated(l, r);
  return {std::move(l), TangentSpace(std::move(f.U), std::move(f.V))};
}

GolfingConfig GolfingConfig::for_shape(const Shape3& shape, double rho) {
  trpca::validate(shape);
  const double scale = static_cast<double>(shape.larger() * shape.n3);
  const auto j0 = static_cast<std::size_t>(2.0 * std::ceil(std::log(scale)));
  return with_rounds(std::max<std::size_t>(j0, 1), rho);
}

GolfingConfig GolfingConfig::with_rounds(std::size_t j0, double rho) {
  if (j0 == 0) throw InvalidArgument("golfing scheme needs at least one round");
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("golfing scheme needs 0 <= rho < 1");
  GolfingConfig c;
  c.j0 = j0;
  c.rho = rho;
  c.q = 1.0 - std::pow(rho, 1.0 / static_cast<double>(j0));
  c.validate();
  return c;
}

void GolfingConfig::validate() const {
  if (j0 == 0) throw InvalidArgument("golfing config: j0 must be at least 1");
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("golfing config: q must lie in (0, 1]");
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("golfing config: rho must lie in [0, 1)");
  if (std::abs(std::pow(1.0 - q, static_cast<double>(j0)) - rho) > 1e-12) {
    throw InvalidArgument("golfing config: (1 - q)^j0 does not match rho");
  }
}

std::vector<SupportSet> partition_complement(const SupportSet& omega, const GolfingConfig& config,
                                             std::uint64_t seed) {
  config.validate();
  const std::size_t j0 = config.j0;
  const double q = config.q;
  const std::size_t count = omega.shape().size();
  std::vector<std::vector<std::uint8_t>> masks(j0, std::vector<std::uint8_t>(count, 0));

  Philox4x32 rng(derive_seed(seed, 0, "golfing-partition"));
  const double miss_all = std::pow(1.0 - q, static_cast<double>(j0));
  const double log_miss = std::log1p(-q);
  for (std::size_t n = 0; n < count; ++n) {
    const double u = rng.uniform_open();
    if (omega.contains_offset(n)) continue;
    // First round of membership, J, is a geometric variable truncated to
    // {1..j0}: P(J <= j) = (1 - (1-q)^j) / (1 - (1-q)^j0). Rounds after J are
    // independent Ber(q).
    std::size_t first = 0;
    if (q < 1.0) {
      const double target = std::log1p(-u * (1.0 - miss_all)) / log_miss;
      first = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(target)), j0);
      first = std::max<std::size_t>(first, 1) - 1;
    }
    masks[first][n] = 1;
    for (std::size_t j = first + 1; j < j0; ++j) masks[j][n] = rng.bernoulli(q) ? 1 : 0;
  }

  std::vector<SupportSet> rounds;
  rounds.reserve(j0);
  for (auto& m : masks) rounds.push_back(SupportSet::from_mask(omega.shape(), std::move(m)));
  return rounds;
}

}  // namespace trpca
