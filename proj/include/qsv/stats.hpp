#pragma once

// Statistical post-processing for verification runs: Kullback-Leibler
// divergence, the Chernoff-bound confidence delta(N, m, eps), the inverse
// infidelity solver eps(N, m, delta), log-log scaling fits and multi-trial
// aggregation. All logarithms are natural.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qsv/errors.hpp"

namespace qsv {

// D(x || y) = x ln(x/y) + (1-x) ln((1-x)/(1-y)), in nats.
// Conventions: 0*ln(0/y) = 0; x*ln(x/0+) = +inf (same on the (1-x) side).
// Throws DomainError for x outside [0,1] or y outside [0,1].
double kl_divergence(double x, double y);

// Chernoff-bound confidence parameter. Returns 1 when the observed pass rate
// does not exceed the threshold 1 - Delta_eps, otherwise
// exp(-n * D(rate || 1 - Delta_eps)).
double confidence_delta_rate(std::int64_t n, double pass_rate, double epsilon, double lambda2);
double confidence_delta(std::int64_t n, std::int64_t m, double epsilon, double lambda2);

// Smallest eps with confidence_delta(n, m, eps, lambda2) <= delta, via
// monotone bisection on y = 1 - Delta_eps over (0, pass_rate). D(rate || y)
// is strictly decreasing in y on that interval, so the root is unique; it is
// resolved to ~15 significant digits (bisection cap: 200 iterations).
// Throws NotAchievable when no y can reach delta and DomainError on invalid
// arguments.
double solve_epsilon_rate(std::int64_t n, double pass_rate, double delta, double lambda2);
double solve_epsilon(std::int64_t n, std::int64_t m, double delta, double lambda2);

// (1 - pass_rate) / (1 - lambda2): the infidelity implied by an asymptotic
// passing probability.
double asymptotic_epsilon(double pass_rate, double lambda2);

struct ScalingFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    std::int64_t n_low = 0;   // smallest n actually used
    std::int64_t n_high = 0;  // largest n actually used
    std::size_t n_points = 0;
};

// Ordinary least squares of ln(eps) against ln(n) over the points whose n
// lies inside [window.first, window.second]. Points with non-finite or
// non-positive eps are skipped. Throws DegenerateFit with fewer than 3
// usable points or degenerate abscissae.
ScalingFit fit_scaling(const std::vector<std::pair<std::int64_t, double>>& points,
                       std::pair<std::int64_t, std::int64_t> window);

// |slope - bound| / stderr when slope is below bound, else 0.
double slope_sigma_excess(double slope, double stderr, double bound);

struct AggregatePoint {
    std::int64_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;        // sample standard deviation over finite values
    std::size_t count = 0;      // number of finite values aggregated
};

// Pointwise mean and sample standard deviation across trials. All curves
// must share the same n grid (GridMismatch otherwise). Non-finite values
// are excluded pointwise; `count` records how many trials contributed.
std::vector<AggregatePoint> aggregate_trials(
    const std::vector<std::vector<std::pair<std::int64_t, double>>>& curves);

// Mean and sample standard deviation of a flat sample, e.g. per-trial slopes.
std::pair<double, double> mean_stddev(const std::vector<double>& values);

}  // namespace qsv
