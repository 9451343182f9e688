#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "avglqr/metrics.hpp"

// Experiment harness: configuration ingestion, the convergence-table
// reproduction pipeline, sweeps over N, and CSV/JSON artifact export.

namespace avglqr {

inline constexpr const char* kToolVersion = "0.1.0";

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Measure family: either the perturbation generator (A_hat plus +-radius
/// times every canonical basis matrix; weight 1 - 2^-N on A_hat, the rest
/// split evenly) or an explicit per-N weight table over fixed supports.
struct MeasureFamily {
  enum class Kind { Perturbation, Explicit };
  Kind kind = Kind::Perturbation;
  double radius = 0.5;                          // Perturbation
  std::vector<Mat> supports;                    // Explicit
  std::vector<std::vector<double>> weights_per_n;  // Explicit, indexed by N

  DiscreteMatrixMeasure measure_at(std::size_t N, const Mat& a_hat) const;
  std::size_t support_count(std::size_t n) const;
};

struct ExperimentConfig {
  Mat A_hat, B, Q, R, Q_f;
  double T = 5.0;
  MeasureFamily family;
  Vec x0;
  double s = 0.0;
  Box k_box;
  std::size_t steps = 2000;
  std::size_t space_grid_per_axis = 41;
  std::size_t n_lo = 0, n_hi = 9;  // inclusive N range
  std::size_t solve_n = 0;         // family level used by the solve command
  std::string output_dir = "out";

  LqrProblem problem_a() const { return {A_hat, B, Q, R, Q_f, T}; }
  AveragedLqrProblem problem_b(std::size_t N) const;

  /// Validates every module invariant; throws ConfigError with a field path.
  void validate() const;
};

/// The built-in harmonic-oscillator configuration (2x2 rotation A_hat,
/// B = (0,1)', Q = I, R = 0.1, Q_f = 0, T = 5, radius-0.5 perturbation
/// family, K = [-2,2]^2). x0 defaults to (0,1) for the convergence table
/// and (1,0) for single solves; see the README.
ExperimentConfig default_table_config();
ExperimentConfig default_solve_config();

ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& config);

struct DiscretizationRow {
  std::size_t N = 0;
  double value_error_fine = 0.0;    // recomputed at 2x steps
  double control_error_fine = 0.0;
  double value_rel_diff = 0.0;
  double control_rel_diff = 0.0;
};

struct ExperimentReport {
  std::vector<ConvergenceRow> rows;
  BoundConstants bounds;
  std::vector<double> pmp_residuals;     // per N
  std::vector<double> block_deviations;  // per N
  std::vector<double> control_l2_norms;  // per N, quadrature of the solved u
  std::vector<double> trajectory_sups;   // per N, max_i max_t |x_i(t)|
  std::vector<double> value_errors_at_start;  // s = t_start slice, per N
  std::vector<DiscretizationRow> discretization;  // sweep only
  std::string config_hash;
  std::size_t steps = 0;
  std::size_t space_grid_per_axis = 0;
  std::string tool_version = kToolVersion;
};

/// Solves Problem A once and Problem B for every N in the configured range;
/// fills the full report.
ExperimentReport run_table1(const ExperimentConfig& config);

/// run_table1 plus a steps-doubling self-convergence study.
ExperimentReport run_sweep(const ExperimentConfig& config);

enum class SolveMode { A, B };

/// Mode A writes one (t, x..., u...) CSV; mode B writes one trajectory CSV
/// per support plus the shared control. Returns the written paths.
std::vector<std::filesystem::path> run_solve(const ExperimentConfig& config,
                                             SolveMode mode);

/// Writes the table CSV and the JSON mirror into config.output_dir.
std::vector<std::filesystem::path> write_report(
    const ExperimentConfig& config, const ExperimentReport& report);

std::string report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

/// Acceptance-style gates for a finished run: stationarity, a-priori bounds,
/// the Lipschitz inequality, block-limit decrease, and (when the config is
/// the built-in table configuration) the frozen reference columns. Returns
/// human-readable failure lines, empty when everything passes.
std::vector<std::string> check_report(const ExperimentConfig& config,
                                      const ExperimentReport& report);

}  // namespace avglqr
