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

#include "trpca/lab.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "trpca/certificate.hpp"
#include "trpca/error.hpp"
#include "trpca/random_models.hpp"
#include "trpca/rng.hpp"
#include "trpca/solver.hpp"
#include "trpca/t_algebra.hpp"

namespace trpca::lab {
namespace {

constexpr std::size_t kMaxN = 64;
constexpr std::size_t kMaxN3 = 16;
constexpr std::size_t kMaxTrials = 500;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::string_view, 2> kSignMeasures{"spectral_norm", "ratio"};
constexpr std::array<std::string_view, 3> kPtMeasures{"deviation", "iterations", "converged"};
constexpr std::array<std::string_view, 4> kPtOmegaMeasures{"norm_sq", "excess", "iterations", "converged"};
constexpr std::array<std::string_view, 2> kInftyMeasures{"ratio", "z_infty"};
constexpr std::array<std::string_view, 2> kDevMeasures{"deviation", "c0_sqrt"};
constexpr std::array<std::string_view, 16> kCertificateMeasures{
    "lambda",          "spectral_WL",      "spectral_WS",      "spectral_sum",  "tangent_residual", "omega_residual_F",
    "omega_comp_infty", "lemma32_a",       "lemma32_b",        "lemma32_c",     "lemma33_a",        "lemma33_b",
    "support_residual", "neumann_terms",   "neumann_failed",   "passed"};
constexpr std::array<std::string_view, 7> kPhaseMeasures{"lambda",     "rel_error_L", "rel_error_S", "tubal_rank_L",
                                                         "iterations", "converged",   "success"};

bool uses_rank(ExperimentKind kind) {
  return kind != ExperimentKind::kSignSpectral && kind != ExperimentKind::kSpectralDeviation;
}

bool needs_positive_rho(ExperimentKind kind) {
  return kind == ExperimentKind::kPtConcentration || kind == ExperimentKind::kInftyContraction ||
         kind == ExperimentKind::kSpectralDeviation;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double flag(bool b) { return b ? 1.0 : 0.0; }

DenseTensor gaussian(const Shape3& s, std::uint64_t seed) {
  Philox4x32 rng(seed);
  DenseTensor t(s);
  for (double& v : t.values()) v = rng.normal();
  return t;
}

PowerIterationOptions power_options(const ExperimentConfig& c, std::uint64_t seed) {
  PowerIterationOptions o;
  o.tol = c.power_tol;
  o.max_iter = c.power_max_iter;
  o.seed = seed;
  return o;
}

std::vector<double> trial_sign(const ParameterPoint& p, std::uint64_t seed) {
  const Shape3 s{p.n, p.n, p.n3};
  const double norm = spectral_norm(sample_sign_tensor(s, p.rho, derive_seed(seed, 0, "sign")));
  return {norm, norm / std::sqrt(static_cast<double>(p.n * p.n3))};
}

std::vector<double> trial_pt(const ExperimentConfig& c, const ParameterPoint& p, std::uint64_t seed) {
  const Shape3 s{p.n, p.n, p.n3};
  const LowRankSample low = sample_low_tubal_rank(s, p.r, derive_seed(seed, 0, "low-rank"));
  const SupportSet omega = sample_bernoulli_support(s, p.rho, derive_seed(seed, 1, "omega"));
  const OperatorNormEstimate e = pt_deviation(low.tangent, omega, p.rho, power_options(c, derive_seed(seed, 2, "power")));
  return {e.norm, static_cast<double>(e.iterations), flag(e.converged)};
}

std::vector<double> trial_pt_omega(const ExperimentConfig& c, const ParameterPoint& p, std::uint64_t seed) {
  const Shape3 s{p.n, p.n, p.n3};
  const LowRankSample low = sample_low_tubal_rank(s, p.r, derive_seed(seed, 0, "low-rank"));
  const SupportSet omega = sample_bernoulli_support(s, p.rho, derive_seed(seed, 1, "omega"));
  const OperatorNormEstimate e = pt_omega_norm_sq(low.tangent, omega, power_options(c, derive_seed(seed, 2, "power")));
  const double norm_sq = low.tangent.rank() == 0 ? 0.0 : e.eigenvalue;
  return {norm_sq, norm_sq - p.rho, static_cast<double>(e.iterations), flag(e.converged)};
}

std::vector<double> trial_infty(const ParameterPoint& p, std::uint64_t seed) {
  const Shape3 s{p.n, p.n, p.n3};
  const LowRankSample low = sample_low_tubal_rank(s, p.r, derive_seed(seed, 0, "low-rank"));
  const SupportSet omega = sample_bernoulli_support(s, p.rho, derive_seed(seed, 1, "omega"));
  if (low.tangent.rank() == 0) return {kNaN, 0.0};  // Z = 0 is excluded.
  const DenseTensor y = gaussian(Shape3{p.n, p.r, p.n3}, derive_seed(seed, 2, "z-left"));
  const DenseTensor w = gaussian(Shape3{p.n, p.r, p.n3}, derive_seed(seed, 3, "z-right"));
  const DenseTensor z = tprod(low.tangent.U(), ttranspose(y)) + tprod(w, ttranspose(low.tangent.V()));
  return {infty_contraction(z, low.tangent, omega, p.rho), infinity_norm(z)};
}

std::vector<double> trial_dev(const ExperimentConfig& c, const ParameterPoint& p, std::size_t point,
                              std::uint64_t seed) {
  const Shape3 s{p.n, p.n, p.n3};
  // Z is fixed per parameter point; only Omega varies across trials.
  DenseTensor z = gaussian(s, derive_seed(c.seed, point, "dev-z"));
  z *= 1.0 / infinity_norm(z);
  const SupportSet omega = sample_bernoulli_support(s, p.rho, derive_seed(seed, 1, "omega"));
  const double dev = spectral_deviation(z, omega, p.rho);
  const double nn3 = static_cast<double>(p.n * p.n3);
  return {dev, dev / std::sqrt(nn3 * std::log(nn3) / p.rho)};
}

std::vector<double> trial_certificate(const ParameterPoint& p, std::uint64_t seed) {
  const Shape3 s{p.n, p.n, p.n3};
  const double lambda = default_lambda(s);
  const LowRankSample low = sample_low_tubal_rank(s, p.r, derive_seed(seed, 0, "low-rank"));
  const SupportSet omega = sample_bernoulli_support(s, p.rho, derive_seed(seed, 1, "omega"));
  const DenseTensor sign = sample_signs_on(omega, derive_seed(seed, 2, "signs"));
  DualCertificate cert;
  try {
    cert = construct_certificate(low.tangent, omega, sign, lambda, derive_seed(seed, 3, "partition"));
  } catch (const NumericalError&) {
    std::vector<double> v(kCertificateMeasures.size(), kNaN);
    v[0] = lambda;
    v[14] = 1.0;  // neumann_failed
    v[15] = 0.0;  // passed
    return v;
  }
  const CertificateReport r = verify_certificate(cert.W_L, cert.W_S, low.tangent, omega, sign, lambda);
  const double sgn = frobenius_norm(sign);
  const double support =
      sgn == 0.0 ? 0.0 : frobenius_norm(project_omega(cert.W_S, omega) - lambda * sign) / (lambda * sgn);
  return {lambda,
          r.spectral_WL,
          r.spectral_WS,
          r.spectral_sum,
          r.tangent_residual,
          r.omega_residual_F,
          r.omega_comp_infty,
          flag(r.lemma32[0]),
          flag(r.lemma32[1]),
          flag(r.lemma32[2]),
          flag(r.lemma33[0]),
          flag(r.lemma33[1]),
          support,
          static_cast<double>(cert.neumann_terms),
          0.0,
          flag(r.passed)};
}

std::vector<double> trial_phase(const ExperimentConfig& c, const ParameterPoint& p, std::uint64_t seed) {
  const Shape3 s{p.n, p.n, p.n3};
  const LowRankSample low = sample_low_tubal_rank(s, p.r, derive_seed(seed, 0, "low-rank"));
  const DenseTensor s0 = sample_sign_tensor(s, p.rho, derive_seed(seed, 1, "sparse"));
  const SolverConfig cfg = SolverConfig::defaults_for(s);
  TrpcaSolution sol;
  try {
    sol = solve(low.L + s0, cfg);
  } catch (const NumericalError&) {
    return {cfg.lambda, kNaN, kNaN, kNaN, kNaN, 0.0, 0.0};
  }
  const RecoveryReport rep = recovery_report(sol, low.L, s0);
  const bool success = sol.converged && rep.rel_error_L < c.success_tol;
  return {cfg.lambda,
          rep.rel_error_L,
          rep.rel_error_S,
          static_cast<double>(rep.tubal_rank_L),
          static_cast<double>(sol.iterations),
          flag(sol.converged),
          flag(success)};
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSignSpectral: return "sign";
    case ExperimentKind::kPtConcentration: return "pt";
    case ExperimentKind::kPtOmegaNorm: return "ptomega";
    case ExperimentKind::kInftyContraction: return "infty";
    case ExperimentKind::kSpectralDeviation: return "dev";
    case ExperimentKind::kCertificate: return "certificate";
    case ExperimentKind::kPhaseGrid: return "phase";
  }
  return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
  for (ExperimentKind k : {ExperimentKind::kSignSpectral, ExperimentKind::kPtConcentration, ExperimentKind::kPtOmegaNorm,
                           ExperimentKind::kInftyContraction, ExperimentKind::kSpectralDeviation,
                           ExperimentKind::kCertificate, ExperimentKind::kPhaseGrid}) {
    if (kind_name(k) == name) return k;
  }
  throw InvalidArgument("unknown experiment '" + std::string(name) + "'");
}

std::vector<double> parse_grid(std::string_view text) {
  const auto number = [&](std::string_view tok) {
    std::string s(tok);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      throw InvalidArgument("malformed grid value '" + s + "' in '" + std::string(text) + "'");
    }
    return v;
  };
  std::vector<double> out;
  if (text.empty()) throw InvalidArgument("empty grid");
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
      throw InvalidArgument("range grid must be a:b:s, got '" + std::string(text) + "'");
    }
    const double a = number(text.substr(0, c1));
    const double b = number(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = number(text.substr(c2 + 1));
    if (!(step > 0.0) || b < a) throw InvalidArgument("range grid needs a <= b and s > 0: '" + std::string(text) + "'");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 10000) throw InvalidArgument("range grid too large: '" + std::string(text) + "'");
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(number(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> parse_index_grid(std::string_view text) {
  std::vector<std::size_t> out;
  for (double v : parse_grid(text)) {
    const double r = std::round(v);
    if (v < 0.0 || std::abs(v - r) > 1e-9) {
      throw InvalidArgument("grid '" + std::string(text) + "' must hold non-negative integers");
    }
    out.push_back(static_cast<std::size_t>(r));
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty() || rho_grid.empty() || (uses_rank(kind) && r_grid.empty())) {
    throw InvalidArgument("experiment grids must be non-empty");
  }
  if (trials == 0) throw InvalidArgument("trials must be at least 1");
  if (trials > kMaxTrials) throw InvalidArgument("trials exceeds the cap of " + std::to_string(kMaxTrials));
  if (n3 == 0 || n3 > kMaxN3) throw InvalidArgument("n3 must lie in [1, " + std::to_string(kMaxN3) + "]");
  for (std::size_t n : n_grid) {
    if (n == 0 || n > kMaxN) throw InvalidArgument("n must lie in [1, " + std::to_string(kMaxN) + "]");
    if (uses_rank(kind)) {
      for (std::size_t r : r_grid)
        if (r > n) throw InvalidArgument("rank " + std::to_string(r) + " exceeds n = " + std::to_string(n));
    }
  }
  for (double rho : rho_grid) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
    if (needs_positive_rho(kind) && rho == 0.0) {
      throw InvalidArgument(std::string(kind_name(kind)) + " experiment needs rho > 0");
    }
    if (kind == ExperimentKind::kCertificate && rho == 1.0) {
      throw InvalidArgument("certificate experiment needs rho < 1 (Omega^c must be non-empty)");
    }
  }
  if (!(power_tol > 0.0) || power_max_iter == 0) throw InvalidArgument("power iteration settings must be positive");
  if (!(success_tol > 0.0)) throw InvalidArgument("success-tol must be positive");
}

std::string ExperimentConfig::to_config_text() const {
  std::ostringstream os;
  if (kind != ExperimentKind::kCertificate && kind != ExperimentKind::kPhaseGrid) {
    os << "lemma=" << kind_name(kind) << '\n';
  }
  os << "n=" << join(n_grid) << '\n';
  os << "n3=" << n3 << '\n';
  if (uses_rank(kind)) os << "r=" << join(r_grid) << '\n';
  os << "rho=" << join(rho_grid) << '\n';
  os << "trials=" << trials << '\n';
  os << "seed=" << seed << '\n';
  os << "threads=" << threads << '\n';
  os << "power-tol=" << format_double(power_tol) << '\n';
  os << "power-max-iter=" << power_max_iter << '\n';
  os << "success-tol=" << format_double(success_tol) << '\n';
  return os.str();
}

std::vector<ParameterPoint> expand(const ExperimentConfig& config) {
  const std::vector<std::size_t> ranks = uses_rank(config.kind) ? config.r_grid : std::vector<std::size_t>{0};
  std::vector<ParameterPoint> out;
  for (std::size_t n : config.n_grid)
    for (std::size_t r : ranks)
      for (double rho : config.rho_grid) out.push_back({n, config.n3, r, rho});
  return out;
}

std::span<const std::string_view> measure_names(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSignSpectral: return kSignMeasures;
    case ExperimentKind::kPtConcentration: return kPtMeasures;
    case ExperimentKind::kPtOmegaNorm: return kPtOmegaMeasures;
    case ExperimentKind::kInftyContraction: return kInftyMeasures;
    case ExperimentKind::kSpectralDeviation: return kDevMeasures;
    case ExperimentKind::kCertificate: return kCertificateMeasures;
    case ExperimentKind::kPhaseGrid: return kPhaseMeasures;
  }
  return {};
}

std::vector<std::string> RecordTable::header() const {
  std::vector<std::string> h{"experiment", "point", "trial", "seed", "n", "n3", "r", "rho"};
  for (std::string_view m : measure_names(kind)) h.emplace_back(m);
  return h;
}

std::size_t RecordTable::column(std::string_view measure) const {
  const auto names = measure_names(kind);
  const auto it = std::find(names.begin(), names.end(), measure);
  if (it == names.end()) {
    throw InvalidArgument("experiment '" + std::string(kind_name(kind)) + "' has no column '" +
                          std::string(measure) + "'");
  }
  return static_cast<std::size_t>(it - names.begin());
}

std::vector<double> RecordTable::values_at(std::size_t point, std::string_view measure) const {
  const std::size_t c = column(measure);
  std::vector<double> out;
  for (const TrialRecord& r : rows)
    if (r.point == point) out.push_back(r.values[c]);
  return out;
}

std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t point, std::size_t trial) {
  return derive_seed(derive_seed(config.seed, point, kind_name(config.kind)), trial, "trial");
}

TrialRecord run_trial(const ExperimentConfig& config, const ParameterPoint& point, std::size_t point_index,
                      std::size_t trial) {
  TrialRecord rec;
  rec.point = point_index;
  rec.trial = trial;
  rec.seed = trial_seed(config, point_index, trial);
  rec.params = point;
  switch (config.kind) {
    case ExperimentKind::kSignSpectral: rec.values = trial_sign(point, rec.seed); break;
    case ExperimentKind::kPtConcentration: rec.values = trial_pt(config, point, rec.seed); break;
    case ExperimentKind::kPtOmegaNorm: rec.values = trial_pt_omega(config, point, rec.seed); break;
    case ExperimentKind::kInftyContraction: rec.values = trial_infty(point, rec.seed); break;
    case ExperimentKind::kSpectralDeviation: rec.values = trial_dev(config, point, point_index, rec.seed); break;
    case ExperimentKind::kCertificate: rec.values = trial_certificate(point, rec.seed); break;
    case ExperimentKind::kPhaseGrid: rec.values = trial_phase(config, point, rec.seed); break;
  }
  return rec;
}

RecordTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::vector<ParameterPoint> points = expand(config);
  const std::size_t units = points.size() * config.trials;

  RecordTable table;
  table.kind = config.kind;
  table.rows.resize(units);

  std::size_t workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  workers = std::min(workers, units);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (std::size_t u = next++; u < units; u = next++) {
      try {
        const std::size_t p = u / config.trials;
        table.rows[u] = run_trial(config, points[p], p, u % config.trials);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = units;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

OperatorNormEstimate pt_deviation(const TangentSpace& t, const SupportSet& omega, double rho,
                                  const PowerIterationOptions& options) {
  if (!(rho > 0.0)) throw InvalidArgument("pt_deviation: rho must be positive");
  if (t.rank() == 0) return {0.0, 0.0, 0, true};
  const auto d = [&](const DenseTensor& z) {
    const DenseTensor pz = t.project(z);
    return pz - (1.0 / rho) * t.project(project_omega(pz, omega));
  };
  return operator_norm([&](const DenseTensor& z) { return d(d(z)); }, t.ambient(), options);
}

OperatorNormEstimate pt_omega_norm_sq(const TangentSpace& t, const SupportSet& omega,
                                      const PowerIterationOptions& options) {
  if (t.rank() == 0) return {0.0, 0.0, 0, true};
  return operator_norm([&](const DenseTensor& z) { return t.project(project_omega(t.project(z), omega)); },
                       t.ambient(), options);
}

double infty_contraction(const DenseTensor& z, const TangentSpace& t, const SupportSet& omega, double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("infty_contraction: rho must be positive");
  const double zi = infinity_norm(z);
  if (zi == 0.0) throw InvalidArgument("infty_contraction: Z must be nonzero");
  return infinity_norm(z - (1.0 / rho) * t.project(project_omega(z, omega))) / zi;
}

double spectral_deviation(const DenseTensor& z, const SupportSet& omega, double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("spectral_deviation: rho must be positive");
  return spectral_norm(z - (1.0 / rho) * project_omega(z, omega));
}

void write_csv(const RecordTable& table, std::ostream& out, bool with_header) {
  const std::string name(kind_name(table.kind));
  if (with_header) {
    const auto h = table.header();
    for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
    out << '\n';
  }
  for (const TrialRecord& r : table.rows) {
    out << name << ',' << r.point << ',' << r.trial << ',' << r.seed << ',' << r.params.n << ',' << r.params.n3
        << ',' << r.params.r << ',' << format_double(r.params.rho);
    for (double v : r.values) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_csv(const RecordTable& table, const std::filesystem::path& path, bool append) {
  bool with_header = true;
  if (append && std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    std::string expected;
    for (const std::string& h : table.header()) expected += (expected.empty() ? "" : ",") + h;
    if (first != expected) {
      throw IoError(IoError::Kind::kWriteFailed,
                    "cannot append to " + path.string() + ": existing header differs from the " +
                        std::string(kind_name(table.kind)) + " schema");
    }
    with_header = false;
  }
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw IoError(IoError::Kind::kOpenFailed, "cannot open " + path.string() + " for writing");
  write_csv(table, out, with_header);
  out.flush();
  if (!out) throw IoError(IoError::Kind::kWriteFailed, "failed writing " + path.string());
}

void write_sidecar(const ExperimentConfig& config, const RecordTable& table, double runtime_seconds,
                   const std::filesystem::path& path) {
  using nlohmann::json;
  json j;
  j["experiment"] = kind_name(config.kind);
  j["config"] = {{"n", config.n_grid},
                 {"n3", config.n3},
                 {"r", config.r_grid},
                 {"rho", config.rho_grid},
                 {"trials", config.trials},
                 {"seed", config.seed},
                 {"threads", config.threads},
                 {"power_tol", config.power_tol},
                 {"power_max_iter", config.power_max_iter},
                 {"success_tol", config.success_tol}};
  j["columns"] = table.header();
  j["rows"] = table.rows.size();
  j["timestamp_utc"] = utc_timestamp();
  j["runtime_seconds"] = runtime_seconds;
  json summaries = json::object();
  for (std::string_view m : measure_names(config.kind)) {
    json points = json::array();
    for (const PointSummary& s : summarize(table, m)) {
      points.push_back({{"n", s.params.n},
                        {"n3", s.params.n3},
                        {"r", s.params.r},
                        {"rho", s.params.rho},
                        {"count", s.count},
                        {"mean", s.mean},
                        {"median", s.median},
                        {"p95", s.p95}});
    }
    summaries[std::string(m)] = points;
  }
  j["summaries"] = summaries;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(IoError::Kind::kOpenFailed, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError(IoError::Kind::kWriteFailed, "failed writing " + path.string());
}

double mean(std::span<const double> x) {
  if (x.empty()) return kNaN;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double quantile(std::vector<double> x, double p) {
  if (x.empty()) return kNaN;
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile: p must lie in [0, 1]");
  std::sort(x.begin(), x.end());
  const double pos = p * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

double sign_test_greater(std::span<const double> before, std::span<const double> after) {
  if (before.size() != after.size()) throw InvalidArgument("sign_test_greater: samples must be paired");
  std::size_t up = 0, m = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (after[i] == before[i] || std::isnan(after[i]) || std::isnan(before[i])) continue;
    ++m;
    up += after[i] > before[i];
  }
  if (m == 0) return 1.0;
  // P(Bin(m, 1/2) >= up), summed in log space.
  const double md = static_cast<double>(m);
  double p = 0.0;
  for (std::size_t k = up; k <= m; ++k) {
    const double kd = static_cast<double>(k);
    p += std::exp(std::lgamma(md + 1) - std::lgamma(kd + 1) - std::lgamma(md - kd + 1) - md * std::log(2.0));
  }
  return std::min(1.0, p);
}

std::vector<PointSummary> summarize(const RecordTable& table, std::string_view measure) {
  const std::size_t c = table.column(measure);
  std::map<std::size_t, std::pair<ParameterPoint, std::vector<double>>> groups;
  for (const TrialRecord& r : table.rows) {
    auto& g = groups[r.point];
    g.first = r.params;
    if (!std::isnan(r.values[c])) g.second.push_back(r.values[c]);
  }
  std::vector<PointSummary> out;
  for (auto& [point, g] : groups) {
    PointSummary s;
    s.params = g.first;
    s.count = g.second.size();
    s.mean = mean(g.second);
    s.median = quantile(g.second, 0.5);
    s.p95 = quantile(g.second, 0.95);
    out.push_back(s);
  }
  return out;
}

}  // namespace trpca::lab
