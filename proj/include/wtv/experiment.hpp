#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wtv/afb.hpp"
#include "wtv/operators.hpp"
#include "wtv/testdata.hpp"

namespace wtv {

enum class Problem { Deblur, CsMri };

std::string to_string(Problem p);
Problem parse_problem(std::string_view name);

/// One comparison run: a test problem plus the solver settings shared by
/// every inner solver in `solvers`.
struct ExperimentConfig {
  Problem problem = Problem::Deblur;
  std::size_t n = 256;
  double blur_sigma = 1.5;
  std::size_t blur_size = 9;
  std::size_t mask_lines = 10;
  double noise_variance = 0.0;
  std::uint64_t seed = 1;
  SolverConfig solver;
  std::vector<InnerSolver> solvers{InnerSolver::Fwsb, InnerSolver::GaussSeidel};
  std::filesystem::path output_dir = "out";
  /// Run the solvers concurrently; timings are then flagged as not comparable.
  bool parallel = false;

  void validate() const;
};

/// Flat `key = value` text, one entry per line, `#` starts a comment.
/// Unknown keys and malformed values throw ConfigError.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Every key, including defaults; optional keys only when set. Lossless:
/// parse_config(write_config(c)) reproduces c.
std::string write_config(const ExperimentConfig& cfg);

/// Environment variable that, when set, prefixes relative output directories.
inline constexpr const char* kOutputRootEnv = "WTV_OUTPUT_ROOT";
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

struct TestProblem {
  Image truth;
  std::unique_ptr<ForwardModel> model;
  Data z;
  /// Blurred-noisy image (deblur) or zero-filled reconstruction (cs_mri).
  Image observation;
  /// Sampling percentage of the k-space mask; NaN for deblurring.
  double sampling_percentage;
};

TestProblem build_problem(const ExperimentConfig& cfg);

struct SolverOutcome {
  InnerSolver solver;
  std::optional<AfbResult> result;
  std::string error;  ///< set when the run diverged
};

struct ExperimentSummary {
  std::vector<SolverOutcome> outcomes;
  double observation_psnr = 0.0;
  double sampling_percentage = 0.0;
  bool timings_comparable = true;

  bool all_failed() const;
};

/// Builds the problem once and runs afb_solve per listed inner solver on the
/// identical data. When `write_outputs` is set, writes trace_<solver>.csv,
/// summary.csv, images (PGM and WTVGRID1) and config_resolved.txt into
/// resolve_output_dir(cfg).
ExperimentSummary run_experiment(const ExperimentConfig& cfg, bool write_outputs = true);

/// Columns: n,psnr,objective,rel_change,cum_seconds,inner_iters
std::string trace_csv(const RunTrace& trace);
std::string summary_csv(const ExperimentSummary& summary);

struct SweepPoint {
  double lambda;
  double psnr;
  int fb_iterations;
  bool converged;
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> curve;
  double best_lambda;
  double best_psnr;
};

/// Runs the first listed solver once per lambda and reports the PSNR-optimal
/// value. Writes lambda_curve.csv when `write_outputs` is set.
SweepResult sweep_lambda(const ExperimentConfig& cfg, const std::vector<double>& lambdas,
                         bool write_outputs = true);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace wtv
