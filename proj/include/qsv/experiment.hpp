#pragma once

// End-to-end experiment orchestration: seeded multi-trial simulation,
// per-prefix confidence/infidelity curves, scaling fits and the file-based
// pipeline behind the CLI subcommands.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsv/device.hpp"
#include "qsv/io.hpp"
#include "qsv/mub.hpp"
#include "qsv/stats.hpp"

namespace qsv {

struct ExperimentConfig {
    std::size_t d = 3;
    std::vector<cxd> coefficients;  // empty means balanced
    NoiseChannel noise = NoiseChannel::white(0.9352);
    std::int64_t n_copies = 5000;
    std::int64_t n_trials = 1;
    std::uint64_t seed = 1;
    double epsilon = 0.08;
    double delta = 0.05;
    std::optional<std::pair<std::int64_t, std::int64_t>> fit_window;
    std::filesystem::path output_dir = "out";
};

// Flat key=value file ('#' starts a comment). Unknown keys or malformed
// values raise ConfigError naming the offending field.
ExperimentConfig load_config(const std::filesystem::path& path);
void validate_config(const ExperimentConfig& config);

// Every prefix up to 2000 copies, then a geometric grid of ratio 1.05;
// always ends at n_copies.
std::vector<std::int64_t> analysis_grid(std::int64_t n_copies);

// delta(n) at fixed epsilon and epsilon(n) at fixed delta for every grid
// prefix of one ledger. epsilon is NaN where no infidelity bound is
// achievable (m = 0 or the confidence is out of reach).
std::vector<CurvePoint> analyze_ledger(const RunLedger& ledger, double epsilon, double delta,
                                       double lambda2);

// Window selection for the power-law regime of an epsilon(n) curve:
// drop head points with epsilon > 1 (no meaningful infidelity bound yet) and
// drop the plateau-bent tail, i.e. points with epsilon below
// kFitPlateauFactor times the asymptotic epsilon implied by the trial's
// final pass rate (at factor 4 the plateau contributes at most a quarter of
// the value at every kept point). The returned window is what a fit
// actually uses; an explicit user window bypasses this rule.
inline constexpr double kFitHeadEpsilonCap = 1.0;
inline constexpr double kFitPlateauFactor = 4.0;
std::pair<std::int64_t, std::int64_t> default_fit_window(const std::vector<CurvePoint>& curve,
                                                         double lambda2);

// Geometric subsample (ratio 1.05) of the in-window points, so that a
// log-log fit weights every decade of n evenly instead of following the
// dense linear part of the analysis grid. First and last usable points are
// always kept.
std::vector<std::pair<std::int64_t, double>> log_spaced_fit_points(
    const std::vector<CurvePoint>& curve, std::pair<std::int64_t, std::int64_t> window);

struct FitSummary {
    double slope = 0.0;          // mean of per-trial slopes
    double slope_stderr = 0.0;   // stddev across trials (single-fit stderr if one trial)
    double intercept = 0.0;      // mean of per-trial intercepts
    std::int64_t window_low = 0;
    std::int64_t window_high = 0;
    double sigma_excess = 0.0;   // standard deviations below the -0.5 bound
    std::size_t trials = 0;
    bool plateau_warning = false;  // window appears to exclude the linear regime
    ScalingFit aggregate_fit;      // single fit of the mean epsilon curve
};

FitSummary fit_trials(const std::vector<std::vector<CurvePoint>>& curves, double lambda2,
                      std::optional<std::pair<std::int64_t, std::int64_t>> window);

struct ExperimentReport {
    ExperimentConfig config;
    double lambda2 = 0.0;
    double analytic_pass_probability = 0.0;
    std::vector<std::filesystem::path> ledger_files;  // relative to output_dir
    std::filesystem::path pass_rate_file;
    double duration_seconds = 0.0;  // not serialized: reports stay byte-reproducible
    std::vector<RunLedger> ledgers;  // kept in memory for pipeline reuse
};

// Runs n_trials independent ledgers with per-trial derived streams, writes
// ledgers/trial_*.csv, pass_rate_aggregate.csv and report.json under
// config.output_dir.
ExperimentReport run_simulation(const ExperimentConfig& config);

struct AnalysisResult {
    std::vector<std::vector<CurvePoint>> curves;
    std::vector<std::filesystem::path> curve_files;
    double lambda2 = 0.0;
};

// In-memory analysis of a set of ledgers (all sharing one copy grid).
std::vector<std::vector<CurvePoint>> analyze_ledgers(const std::vector<RunLedger>& ledgers,
                                                     double epsilon, double delta,
                                                     double lambda2);

// File-based analysis: reads report.json and ledgers/ under dir, writes
// curves/trial_*.csv and curves_aggregate.csv.
AnalysisResult run_analysis(const std::filesystem::path& dir, double epsilon, double delta);

// File-based fit: reads report.json and curves/ under dir, writes fit.json.
FitSummary run_fit(const std::filesystem::path& dir,
                   std::optional<std::pair<std::int64_t, std::int64_t>> window);

// Strategy document for one dimension: bases, lambda2, Delta_eps coefficient
// and a min-copies table over delta x epsilon.
std::string strategy_report_json(std::size_t d);

std::string fit_summary_json(const FitSummary& summary);

}  // namespace qsv
