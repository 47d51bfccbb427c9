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

#include "trpca/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string_view>

#include <CLI11.hpp>

#include "trpca/certificate.hpp"
#include "trpca/error.hpp"
#include "trpca/io.hpp"
#include "trpca/lab.hpp"
#include "trpca/solver.hpp"

namespace trpca::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Raw grid strings; parsed after CLI11 so errors carry the option name.
struct ExperimentFlags {
  std::string n = "20";
  std::size_t n3 = 4;
  std::string r = "1";
  std::string rho = "0.05";
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  double power_tol = 1e-8;
  std::size_t power_max_iter = 5000;
  double success_tol = 1e-5;
  std::string out;
  std::string config;
};

void add_experiment_options(CLI::App* app, ExperimentFlags& f) {
  app->add_option("--n", f.n, "Frontal slice size n (n x n); value, list a,b,c or range a:b:s")->capture_default_str();
  app->add_option("--n3", f.n3, "Number of frontal slices")->capture_default_str();
  app->add_option("--r,--r-grid", f.r, "Tubal rank grid")->capture_default_str();
  app->add_option("--rho,--rho-grid", f.rho, "Bernoulli density grid")->capture_default_str();
  app->add_option("--trials", f.trials, "Trials per parameter point")->capture_default_str();
  app->add_option("--seed", f.seed, "Base seed")->capture_default_str();
  app->add_option("--threads", f.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  app->add_option("--power-tol", f.power_tol, "Power-iteration relative tolerance")->capture_default_str();
  app->add_option("--power-max-iter", f.power_max_iter, "Power-iteration cap")->capture_default_str();
  app->add_option("--success-tol", f.success_tol, "Phase grid success threshold on the relative L error")
      ->capture_default_str();
  app->add_option("--out", f.out, "CSV output (appended); a JSON sidecar is written to <out>.json")->required();
  app->add_option("--config", f.config, "Flat key=value file; flags override it");
}

lab::ExperimentConfig to_config(lab::ExperimentKind kind, const ExperimentFlags& f) {
  lab::ExperimentConfig c;
  c.kind = kind;
  c.n_grid = lab::parse_index_grid(f.n);
  c.n3 = f.n3;
  c.r_grid = lab::parse_index_grid(f.r);
  c.rho_grid = lab::parse_grid(f.rho);
  c.trials = f.trials;
  c.seed = f.seed;
  c.threads = f.threads;
  c.power_tol = f.power_tol;
  c.power_max_iter = f.power_max_iter;
  c.success_tol = f.success_tol;
  c.validate();
  return c;
}

std::string_view headline_measure(lab::ExperimentKind kind) {
  switch (kind) {
    case lab::ExperimentKind::kSignSpectral: return "ratio";
    case lab::ExperimentKind::kPtConcentration: return "deviation";
    case lab::ExperimentKind::kPtOmegaNorm: return "excess";
    case lab::ExperimentKind::kInftyContraction: return "ratio";
    case lab::ExperimentKind::kSpectralDeviation: return "c0_sqrt";
    case lab::ExperimentKind::kCertificate: return "passed";
    case lab::ExperimentKind::kPhaseGrid: return "success";
  }
  return "";
}

int run_experiment_command(const lab::ExperimentConfig& config, const std::string& out_path, std::ostream& out) {
  const lab::ExperimentKind kind = config.kind;
  const auto start = std::chrono::steady_clock::now();
  const lab::RecordTable table = lab::run_experiment(config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  lab::write_csv(table, std::filesystem::path(out_path), true);
  lab::write_sidecar(config, table, seconds, std::filesystem::path(out_path + ".json"));

  const std::string_view measure = headline_measure(kind);
  out << lab::kind_name(kind) << ": " << table.rows.size() << " trials in " << fmt(seconds) << " s\n";
  for (const lab::PointSummary& s : lab::summarize(table, measure)) {
    out << "  n=" << s.params.n << " n3=" << s.params.n3 << " r=" << s.params.r << " rho=" << fmt(s.params.rho)
        << "  " << measure << ": mean " << fmt(s.mean) << " median " << fmt(s.median) << " p95 " << fmt(s.p95)
        << " (" << s.count << ")\n";
  }
  return kOk;
}

struct SolveFlags {
  std::string input;
  std::string lambda = "auto";
  double tol = 1e-8;
  std::size_t max_iter = 1000;
  double mu0 = 1e-3;
  double rho_mu = 1.1;
  std::vector<std::string> out;
  std::string config;
};

int run_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  if (f.out.size() != 2) throw InvalidArgument("--out needs two paths: L and S");
  const DenseTensor x = read_tensor(std::filesystem::path(f.input));
  SolverConfig cfg = SolverConfig::defaults_for(x.shape());
  if (f.lambda != "auto") {
    std::size_t used = 0;
    try {
      cfg.lambda = std::stod(f.lambda, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != f.lambda.size()) throw InvalidArgument("--lambda must be a number or 'auto'");
  }
  cfg.tol = f.tol;
  cfg.max_iter = f.max_iter;
  cfg.mu0 = f.mu0;
  cfg.rho_mu = f.rho_mu;
  cfg.validate();

  const TrpcaSolution sol = solve(x, cfg);
  write_tensor(sol.L, std::filesystem::path(f.out[0]));
  write_tensor(sol.S, std::filesystem::path(f.out[1]));

  const double residual = sol.primal_residuals.empty() ? 0.0 : sol.primal_residuals.back();
  out << "shape " << to_string(x.shape()) << "  lambda " << fmt(cfg.lambda) << "\n"
      << "iterations " << sol.iterations << "  converged " << (sol.converged ? "yes" : "no") << "  residual "
      << fmt(residual) << "\n";
  if (!sol.converged) {
    err << "trpca solve: no convergence within " << cfg.max_iter
        << " iterations; wrote the iterate with the smallest primal residual\n";
    return kNumerical;
  }
  return kOk;
}

std::optional<std::string> parse_config_flag(const std::string& arg, const std::vector<std::string>& args,
                                             std::size_t& i) {
  if (arg == "--config") {
    if (i + 1 >= args.size()) throw InvalidArgument("--config needs a file name");
    return args[++i];
  }
  if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  return std::nullopt;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (auto p = parse_config_flag(args[i], args, i)) {
      path = std::move(p);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;

  std::ifstream in(*path);
  if (!in) throw IoError(IoError::Kind::kOpenFailed, "cannot open config file " + *path);
  std::vector<std::string> from_file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(*path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key.empty()) throw InvalidArgument(*path + ":" + std::to_string(line_no) + ": empty key");
    from_file.push_back("--" + key + "=" + value);
  }

  // The subcommand stays first; file values precede command-line flags.
  std::vector<std::string> merged;
  std::size_t first_flag = 0;
  if (!rest.empty() && rest[0].rfind("-", 0) != 0) {
    merged.push_back(rest[0]);
    first_flag = 1;
  }
  merged.insert(merged.end(), from_file.begin(), from_file.end());
  merged.insert(merged.end(), rest.begin() + static_cast<std::ptrdiff_t>(first_flag), rest.end());
  return merged;
}

namespace {

class Parser {
 public:
  Parser() : app_("Tensor robust PCA: solver and Monte-Carlo experiment harness", "trpca") {
    app_.require_subcommand(1);
    app_.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    solve_ = app_.add_subcommand("solve", "Decompose a TNS3 tensor X into low-rank L and sparse S");
    solve_->add_option("--input", solve_flags_.input, "Input tensor (TNS3)")->required();
    solve_->add_option("--lambda", solve_flags_.lambda, "Sparsity weight, or 'auto' for 1/sqrt(max(n1,n2) n3)")
        ->capture_default_str();
    solve_->add_option("--tol", solve_flags_.tol, "Stopping tolerance")->capture_default_str();
    solve_->add_option("--max-iter", solve_flags_.max_iter, "Iteration cap")->capture_default_str();
    solve_->add_option("--mu0", solve_flags_.mu0, "Initial penalty")->capture_default_str();
    solve_->add_option("--rho-mu", solve_flags_.rho_mu, "Penalty growth factor")->capture_default_str();
    solve_->add_option("--out", solve_flags_.out, "Output paths for L and S")
        ->required()
        ->expected(2)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    solve_->add_option("--config", solve_flags_.config, "Flat key=value file; flags override it");

    certify_ = app_.add_subcommand("certify", "Dual-certificate construction success rates");
    add_experiment_options(certify_, certify_flags_);

    concentrate_ = app_.add_subcommand("concentrate", "Monte-Carlo checks of the concentration bounds");
    concentrate_->add_option("--lemma", lemma_, "Experiment")
        ->required()
        ->check(CLI::IsMember({"sign", "pt", "ptomega", "infty", "dev"}));
    add_experiment_options(concentrate_, concentrate_flags_);

    phase_flags_.n = "40";
    phase_flags_.n3 = 10;
    phase_flags_.r = "1:5:1";
    phase_flags_.rho = "0.05:0.3:0.05";
    phase_ = app_.add_subcommand("phase", "Exact-recovery success over a rank x density grid");
    add_experiment_options(phase_, phase_flags_);
  }

  // Throws CLI::ParseError.
  void parse(const std::vector<std::string>& args) {
    std::vector<std::string> argv = expand_config(args);
    std::reverse(argv.begin(), argv.end());  // CLI11 consumes from the back.
    app_.parse(argv);
  }

  int exit(const CLI::ParseError& e, std::ostream& out, std::ostream& err) { return app_.exit(e, out, err); }

  bool is_solve() const { return solve_->parsed(); }
  const SolveFlags& solve_flags() const { return solve_flags_; }

  lab::ExperimentConfig experiment() const {
    if (certify_->parsed()) return to_config(lab::ExperimentKind::kCertificate, certify_flags_);
    if (concentrate_->parsed()) return to_config(lab::parse_kind(lemma_), concentrate_flags_);
    if (phase_->parsed()) return to_config(lab::ExperimentKind::kPhaseGrid, phase_flags_);
    throw InvalidArgument("not an experiment subcommand");
  }

  const std::string& experiment_out() const {
    if (certify_->parsed()) return certify_flags_.out;
    if (concentrate_->parsed()) return concentrate_flags_.out;
    return phase_flags_.out;
  }

 private:
  CLI::App app_;
  CLI::App* solve_ = nullptr;
  CLI::App* certify_ = nullptr;
  CLI::App* concentrate_ = nullptr;
  CLI::App* phase_ = nullptr;
  SolveFlags solve_flags_;
  ExperimentFlags certify_flags_;
  ExperimentFlags concentrate_flags_;
  ExperimentFlags phase_flags_;
  std::string lemma_;
};

}  // namespace

lab::ExperimentConfig parse_experiment(const std::vector<std::string>& args) {
  Parser parser;
  try {
    parser.parse(args);
  } catch (const CLI::ParseError& e) {
    throw InvalidArgument(e.what());
  }
  return parser.experiment();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    Parser parser;
    try {
      parser.parse(args);
    } catch (const CLI::ParseError& e) {
      return parser.exit(e, out, err) == 0 ? kOk : kUsage;
    }
    if (parser.is_solve()) return run_solve(parser.solve_flags(), out, err);
    return run_experiment_command(parser.experiment(), parser.experiment_out(), out);
  } catch (const IoError& e) {
    err << "trpca: " << e.what() << "\n";
    return kIo;
  } catch (const NumericalError& e) {
    err << "trpca: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    err << "trpca: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace trpca::cli
