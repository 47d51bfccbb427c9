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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trpca/projections.hpp"
#include "trpca/tensor.hpp"

namespace trpca::lab {

enum class ExperimentKind {
  kSignSpectral,
  kPtConcentration,
  kPtOmegaNorm,
  kInftyContraction,
  kSpectralDeviation,
  kCertificate,
  kPhaseGrid,
};

/// Short identifier used in CSV rows and on the command line
/// ("sign", "pt", "ptomega", "infty", "dev", "certificate", "phase").
std::string_view kind_name(ExperimentKind kind);
/// Inverse of kind_name; throws InvalidArgument on unknown names.
ExperimentKind parse_kind(std::string_view name);

/// Parses "a:b:s" (inclusive arithmetic range), a comma list, or a single
/// value. Throws InvalidArgument on malformed or empty grids.
std::vector<double> parse_grid(std::string_view text);
std::vector<std::size_t> parse_index_grid(std::string_view text);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCertificate;
  /// Frontal slices are n x n.
  std::vector<std::size_t> n_grid{20};
  std::size_t n3 = 4;
  std::vector<std::size_t> r_grid{1};
  std::vector<double> rho_grid{0.05};
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 1;
  /// Power-iteration tolerance and cap for operator-norm measurements.
  double power_tol = 1e-8;
  std::size_t power_max_iter = 5000;
  /// Phase grid: a trial succeeds when ||L - L0||_F / ||L0||_F < success_tol.
  double success_tol = 1e-5;

  /// Throws InvalidArgument on empty grids, trials == 0, rho outside
  /// [0, 1], or parameters beyond the desk-scale caps (n <= 64,
  /// n3 <= 16, trials <= 500).
  void validate() const;
  /// Flat key=value text accepted by the command-line config loader.
  std::string to_config_text() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// One parameter point of a sweep.
struct ParameterPoint {
  std::size_t n = 0;
  std::size_t n3 = 0;
  std::size_t r = 0;
  double rho = 0.0;
};

/// Points in deterministic order: n outermost, then r, then rho.
std::vector<ParameterPoint> expand(const ExperimentConfig& config);

struct TrialRecord {
  std::size_t point = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  ParameterPoint params;
  /// Measurements in the order of the experiment's schema.
  std::vector<double> values;
};

/// Measurement column names per experiment kind.
std::span<const std::string_view> measure_names(ExperimentKind kind);

struct RecordTable {
  ExperimentKind kind = ExperimentKind::kCertificate;
  std::vector<TrialRecord> rows;

  std::vector<std::string> header() const;
  /// Index of a measurement column; throws InvalidArgument if absent.
  std::size_t column(std::string_view measure) const;
  /// Values of one measurement at one point, in trial order.
  std::vector<double> values_at(std::size_t point, std::string_view measure) const;
};

/// Runs every (point, trial) work unit on a bounded worker pool and merges
/// the records in (point, trial) order.
RecordTable run_experiment(const ExperimentConfig& config);

/// Seed of one trial, derived from the base seed, the point and the trial
/// index; independent of scheduling.
std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t point, std::size_t trial);

/// Runs one work unit; exposed for tests.
TrialRecord run_trial(const ExperimentConfig& config, const ParameterPoint& point, std::size_t point_index,
                      std::size_t trial);

// ---------------------------------------------------------------------------
// Single-trial measurements.

/// ||P_T - rho^-1 P_T P_Omega P_T|| by power iteration on its square.
OperatorNormEstimate pt_deviation(const TangentSpace& t, const SupportSet& omega, double rho,
                                  const PowerIterationOptions& options);
/// ||P_Omega P_T||^2 = ||P_T P_Omega P_T||.
OperatorNormEstimate pt_omega_norm_sq(const TangentSpace& t, const SupportSet& omega,
                                      const PowerIterationOptions& options);
/// ||Z - rho^-1 P_T P_Omega Z||_inf / ||Z||_inf for z in T.
double infty_contraction(const DenseTensor& z, const TangentSpace& t, const SupportSet& omega, double rho);
/// ||(I - rho^-1 P_Omega) Z||.
double spectral_deviation(const DenseTensor& z, const SupportSet& omega, double rho);

// ---------------------------------------------------------------------------
// Output.

/// CSV with the fixed header and 17 significant digits. When append is set
/// and the file already holds rows, the header must match and only rows are
/// added.
void write_csv(const RecordTable& table, std::ostream& out, bool with_header = true);
void write_csv(const RecordTable& table, const std::filesystem::path& path, bool append = true);

/// Full configuration, schema, per-point summaries and wall-clock data.
void write_sidecar(const ExperimentConfig& config, const RecordTable& table, double runtime_seconds,
                   const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Statistics.

double mean(std::span<const double> x);
/// Linear-interpolation quantile, p in [0, 1].
double quantile(std::vector<double> x, double p);
inline double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

/// One-sided sign test for paired samples: the p-value of observing at
/// least as many pairs with after > before as seen, under
/// P(after > before) = 1/2. Ties are dropped.
double sign_test_greater(std::span<const double> before, std::span<const double> after);

struct PointSummary {
  ParameterPoint params;
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
};

std::vector<PointSummary> summarize(const RecordTable& table, std::string_view measure);

}  // namespace trpca::lab
