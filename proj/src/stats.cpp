#include "qsv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rate_args(std::int64_t n, double pass_rate, double epsilon, double lambda2) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (!(pass_rate >= 0.0 && pass_rate <= 1.0))
        throw DomainError("pass rate must lie in [0,1]");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    if (!(lambda2 >= 0.0 && lambda2 < 1.0)) throw DomainError("lambda2 must lie in [0,1)");
}

}  // namespace

double kl_divergence(double x, double y) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("kl_divergence: x must lie in [0,1]");
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("kl_divergence: y must lie in [0,1]");
    double acc = 0.0;
    if (x > 0.0) {
        if (y == 0.0) return kInf;
        acc += x * std::log(x / y);
    }
    if (x < 1.0) {
        if (y == 1.0) return kInf;
        acc += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
    }
    return std::max(acc, 0.0);
}

double confidence_delta_rate(std::int64_t n, double pass_rate, double epsilon, double lambda2) {
    check_rate_args(n, pass_rate, epsilon, lambda2);
    const double threshold = 1.0 - (1.0 - lambda2) * epsilon;
    if (pass_rate <= threshold) return 1.0;
    return std::exp(-static_cast<double>(n) * kl_divergence(pass_rate, threshold));
}

double confidence_delta(std::int64_t n, std::int64_t m, double epsilon, double lambda2) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (m < 0 || m > n) throw DomainError("m must lie in [0, n]");
    return confidence_delta_rate(n, static_cast<double>(m) / static_cast<double>(n), epsilon,
                                 lambda2);
}

double solve_epsilon_rate(std::int64_t n, double pass_rate, double delta, double lambda2) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (!(pass_rate >= 0.0 && pass_rate <= 1.0))
        throw DomainError("pass rate must lie in [0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
    if (!(lambda2 >= 0.0 && lambda2 < 1.0)) throw DomainError("lambda2 must lie in [0,1)");
    if (pass_rate <= 0.0)
        throw NotAchievable("no passing copies: no confidence at any epsilon");

    // Find y in (0, pass_rate) with n * D(rate || y) = ln(1/delta).
    // D is strictly decreasing in y on this interval, so bisection is exact.
    const double target = std::log(1.0 / delta) / static_cast<double>(n);
    const double y_floor = 1e-300;
    if (kl_divergence(pass_rate, y_floor) < target)
        throw NotAchievable("requested confidence is not reachable at this n and pass rate");

    // Resolved to ~15 significant digits in y, so the recovered delta is
    // accurate to far better than 1e-9 even for n in the millions. With
    // m >= 1 the root obeys y > pass_rate * delta, keeping the iteration
    // count well below the cap.
    double lo = y_floor;        // D(rate||lo) > target
    double hi = pass_rate;      // D(rate||hi) = 0 < target
    const int max_iter = 200;
    int iter = 0;
    while (hi - lo > 1e-15 * hi) {
        if (++iter > max_iter)
            throw NonConvergence("solve_epsilon: bisection exceeded the iteration cap");
        const double mid = 0.5 * (lo + hi);
        if (kl_divergence(pass_rate, mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    const double y = 0.5 * (lo + hi);
    return (1.0 - y) / (1.0 - lambda2);
}

double solve_epsilon(std::int64_t n, std::int64_t m, double delta, double lambda2) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (m < 1 || m > n) throw DomainError("m must lie in [1, n]");
    return solve_epsilon_rate(n, static_cast<double>(m) / static_cast<double>(n), delta, lambda2);
}

double asymptotic_epsilon(double pass_rate, double lambda2) {
    if (!(pass_rate >= 0.0 && pass_rate <= 1.0))
        throw DomainError("pass rate must lie in [0,1]");
    if (!(lambda2 >= 0.0 && lambda2 < 1.0)) throw DomainError("lambda2 must lie in [0,1)");
    return (1.0 - pass_rate) / (1.0 - lambda2);
}

ScalingFit fit_scaling(const std::vector<std::pair<std::int64_t, double>>& points,
                       std::pair<std::int64_t, std::int64_t> window) {
    std::vector<double> xs, ys;
    std::int64_t n_low = 0, n_high = 0;
    for (const auto& [n, eps] : points) {
        if (n < window.first || n > window.second) continue;
        if (!(eps > 0.0) || !std::isfinite(eps)) continue;
        if (xs.empty() || n < n_low) n_low = n;
        if (xs.empty() || n > n_high) n_high = n;
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(eps));
    }
    const std::size_t k = xs.size();
    if (k < 3) throw DegenerateFit("fit_scaling: fewer than 3 usable points in window");

    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(k);
    const double my = sy / static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0) throw DegenerateFit("fit_scaling: degenerate abscissae");

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ssr += r * r;
    }
    fit.slope_stderr =
        k > 2 ? std::sqrt(ssr / (static_cast<double>(k) - 2.0) / sxx) : 0.0;
    fit.n_low = n_low;
    fit.n_high = n_high;
    fit.n_points = k;
    return fit;
}

double slope_sigma_excess(double slope, double stderr, double bound) {
    if (!(stderr > 0.0)) throw DomainError("slope_sigma_excess: stderr must be positive");
    if (slope >= bound) return 0.0;
    return (bound - slope) / stderr;
}

std::vector<AggregatePoint> aggregate_trials(
    const std::vector<std::vector<std::pair<std::int64_t, double>>>& curves) {
    if (curves.empty()) return {};
    const std::size_t len = curves.front().size();
    for (const auto& c : curves)
        if (c.size() != len) throw GridMismatch("aggregate_trials: curves differ in length");
    for (std::size_t j = 0; j < len; ++j) {
        const std::int64_t n0 = curves.front()[j].first;
        for (const auto& c : curves)
            if (c[j].first != n0)
                throw GridMismatch("aggregate_trials: curves differ in their n grid");
    }

    std::vector<AggregatePoint> out(len);
    for (std::size_t j = 0; j < len; ++j) {
        AggregatePoint& p = out[j];
        p.n = curves.front()[j].first;
        double sum = 0.0;
        for (const auto& c : curves) {
            const double v = c[j].second;
            if (!std::isfinite(v)) continue;
            sum += v;
            ++p.count;
        }
        if (p.count == 0) {
            p.mean = std::numeric_limits<double>::quiet_NaN();
            p.stddev = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        p.mean = sum / static_cast<double>(p.count);
        if (p.count > 1) {
            double ss = 0.0;
            for (const auto& c : curves) {
                const double v = c[j].second;
                if (!std::isfinite(v)) continue;
                ss += (v - p.mean) * (v - p.mean);
            }
            p.stddev = std::sqrt(ss / (static_cast<double>(p.count) - 1.0));
        }
    }
    return out;
}

std::pair<double, double> mean_stddev(const std::vector<double>& values) {
    if (values.empty()) throw DomainError("mean_stddev: empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd =
        values.size() > 1 ? std::sqrt(ss / (static_cast<double>(values.size()) - 1.0)) : 0.0;
    return {mean, sd};
}

}  // namespace qsv
