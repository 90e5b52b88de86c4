#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qsv/stats.hpp"

using namespace qsv;

TEST_CASE("kl divergence basics and boundary conventions") {
    for (const double x : {1e-12, 0.1, 0.5, 0.9563, 1.0})
        CHECK(kl_divergence(x, x) <= 1e-15);

    // direct evaluation at the reference operating point
    CHECK(std::abs(kl_divergence(0.9563, 0.94) - 0.002588) <= 1e-6);

    for (const double y : {0.1, 0.5, 0.94})
        CHECK(kl_divergence(1.0, y) == doctest::Approx(std::log(1.0 / y)).epsilon(1e-14));
    for (const double y : {0.1, 0.5, 0.94})
        CHECK(kl_divergence(0.0, y) == doctest::Approx(-std::log(1.0 - y)).epsilon(1e-14));

    CHECK(kl_divergence(0.0, 0.0) == 0.0);
    CHECK(kl_divergence(1.0, 1.0) == 0.0);
    CHECK(std::isinf(kl_divergence(0.5, 0.0)));
    CHECK(std::isinf(kl_divergence(0.5, 1.0)));

    CHECK_THROWS_AS(kl_divergence(-0.1, 0.5), DomainError);
    CHECK_THROWS_AS(kl_divergence(1.1, 0.5), DomainError);
    CHECK_THROWS_AS(kl_divergence(0.5, -0.1), DomainError);
    CHECK_THROWS_AS(kl_divergence(0.5, 1.1), DomainError);
}

TEST_CASE("Gibbs inequality on random pairs") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 10000; ++rep) {
        const double x = unit(rng);
        const double y = 0.999998 * unit(rng) + 1e-6;
        const double d = kl_divergence(x, y);
        CHECK(d >= 0.0);
        if (std::abs(x - y) > 1e-6) CHECK(d > 0.0);
    }
}

TEST_CASE("kl divergence decreases as y approaches x from below") {
    for (const double x : {0.3, 0.9, 0.9563}) {
        double prev = kl_divergence(x, 0.01 * x);
        for (int k = 2; k <= 99; ++k) {
            const double y = 0.01 * static_cast<double>(k) * x;
            const double cur = kl_divergence(x, y);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("confidence at the reference operating point") {
    // n=1190, m/n=0.9563, eps=0.08, lambda2=0.25 -> delta ~ 0.046
    const double delta = confidence_delta_rate(1190, 0.9563, 0.08, 0.25);
    CHECK(delta >= 0.040);
    CHECK(delta <= 0.050);
    CHECK(std::abs(delta - 0.046) <= 0.001);

    // integer-count path: m = 1138 gives m/n ~ 0.95630
    const double delta_m = confidence_delta(1190, 1138, 0.08, 0.25);
    CHECK(std::abs(delta_m - 0.046) <= 0.001);
}

TEST_CASE("confidence clamps to 1 at or below the threshold") {
    // threshold 1 - 0.75*0.08 = 0.94
    CHECK(confidence_delta_rate(100, 0.94, 0.08, 0.25) == 1.0);
    CHECK(confidence_delta_rate(100, 0.5, 0.08, 0.25) == 1.0);
    CHECK(confidence_delta_rate(100, 0.9400001, 0.08, 0.25) < 1.0);
}

TEST_CASE("perfect record confidence is the worst-case pass power") {
    // m = n: delta = (1 - Delta_eps)^n
    const double delta = confidence_delta(100, 100, 0.08, 0.25);
    CHECK(delta == doctest::Approx(std::pow(0.94, 100)).epsilon(1e-12));
    CHECK(delta == doctest::Approx(2.05e-3).epsilon(0.005));
}

TEST_CASE("confidence is non-increasing in n at fixed rate above threshold") {
    double prev = 1.0;
    for (const std::int64_t n : {10, 20, 50, 100, 500, 1000, 5000}) {
        const double cur = confidence_delta_rate(n, 0.9563, 0.08, 0.25);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("solve_epsilon at the reference operating point") {
    const double eps = solve_epsilon_rate(1190, 0.9563, 0.05, 0.25);
    CHECK(eps >= 0.0785);
    CHECK(eps <= 0.0805);
}

TEST_CASE("solve_epsilon perfect-record closed form") {
    // m = n: eps = (1 - delta^(1/n)) / (1 - lambda2)
    const double eps = solve_epsilon(1000, 1000, 0.05, 0.25);
    const double expected = (1.0 - std::pow(0.05, 1.0 / 1000.0)) * 4.0 / 3.0;
    CHECK(eps == doctest::Approx(expected).epsilon(1e-8));
    CHECK(std::abs(eps - 0.003989) <= 1e-6);
}

TEST_CASE("solve_epsilon approaches the asymptotic infidelity at large n") {
    const double eps = solve_epsilon_rate(1000000000, 0.9568, 0.05, 0.25);
    CHECK(std::abs(eps - 0.0576) <= 1e-4);
}

TEST_CASE("solve_epsilon and confidence_delta are mutually inverse") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 2000; ++rep) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 100000);
        const std::int64_t m = 1 + static_cast<std::int64_t>(rng() % n);
        const double delta = 0.001 + 0.99 * unit(rng);
        const double lambda2 = 0.9 * unit(rng);
        double eps;
        try {
            eps = solve_epsilon(n, m, delta, lambda2);
        } catch (const NotAchievable&) {
            continue;
        }
        if (!(eps > 0.0 && eps < 1.0)) continue;  // outside confidence_delta's domain
        const double recovered = confidence_delta(n, m, eps, lambda2);
        CHECK(std::abs(recovered - delta) <= 1e-9);
    }
}

TEST_CASE("solve_epsilon is non-increasing in n at fixed rate") {
    double prev = std::numeric_limits<double>::infinity();
    for (const std::int64_t n : {50, 100, 500, 1000, 5000, 50000}) {
        const double cur = solve_epsilon_rate(n, 0.9568, 0.05, 0.25);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("solve_epsilon unreachable confidence") {
    CHECK_THROWS_AS(solve_epsilon_rate(1, 1e-5, 0.05, 0.25), NotAchievable);
    CHECK_THROWS_AS(solve_epsilon(10, 0, 0.05, 0.25), DomainError);
}

TEST_CASE("asymptotic epsilon") {
    CHECK(std::abs(asymptotic_epsilon(0.9568, 0.25) - 0.0576) <= 1e-12);
    CHECK(1.0 - asymptotic_epsilon(0.9568, 0.25) == doctest::Approx(0.9424).epsilon(1e-12));
    CHECK(asymptotic_epsilon(1.0, 0.25) == 0.0);
    CHECK(std::abs(asymptotic_epsilon(0.94, 0.25) - 0.08) <= 1e-12);
    CHECK_THROWS_AS(asymptotic_epsilon(1.5, 0.25), DomainError);
}

TEST_CASE("fit_scaling recovers exact power laws") {
    std::vector<std::pair<std::int64_t, double>> points;
    for (std::int64_t n = 10; n <= 10000; n = n * 3 / 2)
        points.emplace_back(n, 2.5 / static_cast<double>(n));
    const ScalingFit fit = fit_scaling(points, {1, 100000});
    CHECK(std::abs(fit.slope + 1.0) <= 1e-9);
    CHECK(fit.slope_stderr <= 1e-7);
    CHECK(std::abs(fit.intercept - std::log(2.5)) <= 1e-9);
    CHECK(fit.n_low == 10);
    CHECK(fit.n_points == points.size());
}

TEST_CASE("fit_scaling recovers a noiseless line exactly") {
    const double a = -1.7, b = -0.62;
    std::vector<std::pair<std::int64_t, double>> points;
    for (std::int64_t n = 5; n <= 2000; n += 37)
        points.emplace_back(n, std::exp(a + b * std::log(static_cast<double>(n))));
    const ScalingFit fit = fit_scaling(points, {1, 10000});
    CHECK(std::abs(fit.slope - b) <= 1e-9);
    CHECK(std::abs(fit.intercept - a) <= 1e-9);
}

TEST_CASE("fit_scaling on the perfect-record curve gives a Heisenberg-like slope") {
    std::vector<std::pair<std::int64_t, double>> points;
    for (double n = 100.0; n <= 10000.0; n *= 1.05) {
        const auto ni = static_cast<std::int64_t>(std::llround(n));
        points.emplace_back(ni, (4.0 / 3.0) * (1.0 - std::pow(0.05, 1.0 / ni)));
    }
    const ScalingFit fit = fit_scaling(points, {100, 10000});
    CHECK(fit.slope >= -1.0);
    CHECK(fit.slope <= -0.99);
}

TEST_CASE("fit_scaling on a plateau gives slope zero") {
    std::vector<std::pair<std::int64_t, double>> points;
    for (std::int64_t n = 100; n <= 200; n += 10) points.emplace_back(n, 0.0576);
    const ScalingFit fit = fit_scaling(points, {1, 1000});
    CHECK(std::abs(fit.slope) <= 1e-12);
}

TEST_CASE("fit_scaling degenerate inputs") {
    std::vector<std::pair<std::int64_t, double>> two = {{10, 0.1}, {20, 0.05}};
    CHECK_THROWS_AS(fit_scaling(two, {1, 100}), DegenerateFit);

    std::vector<std::pair<std::int64_t, double>> off_window = {{10, 0.1}, {20, 0.05}, {30, 0.03}};
    CHECK_THROWS_AS(fit_scaling(off_window, {100, 200}), DegenerateFit);

    std::vector<std::pair<std::int64_t, double>> bad_eps = {
        {10, 0.1}, {20, -0.05}, {30, std::numeric_limits<double>::quiet_NaN()}, {40, 0.01}};
    CHECK_THROWS_AS(fit_scaling(bad_eps, {1, 100}), DegenerateFit);
}

TEST_CASE("slope sigma excess") {
    CHECK(slope_sigma_excess(-0.5497, 0.0002, -0.5) == doctest::Approx(248.5).epsilon(1e-9));
    CHECK(slope_sigma_excess(-0.5, 0.01, -0.5) == 0.0);
    CHECK(slope_sigma_excess(-0.45, 0.01, -0.5) == 0.0);
    CHECK(slope_sigma_excess(-0.6, 0.01, -0.5) == doctest::Approx(10.0).epsilon(1e-9));
    CHECK_THROWS_AS(slope_sigma_excess(-0.6, 0.0, -0.5), DomainError);
}

TEST_CASE("aggregate_trials mean and stddev") {
    using Curve = std::vector<std::pair<std::int64_t, double>>;
    const Curve c1 = {{1, 0.5}, {2, 0.4}, {3, 0.3}};

    auto same = aggregate_trials({c1, c1, c1});
    for (const auto& p : same) {
        CHECK(p.stddev <= 1e-15);
        CHECK(p.count == 3);
    }

    const Curve c2 = {{1, 0.7}, {2, 0.2}, {3, 0.3}};
    auto two = aggregate_trials({c1, c2});
    CHECK(two[0].mean == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(two[0].stddev == doctest::Approx(std::abs(0.5 - 0.7) / std::sqrt(2.0)).epsilon(1e-12));

    const Curve with_nan = {{1, std::numeric_limits<double>::quiet_NaN()}, {2, 0.4}, {3, 0.3}};
    auto skipped = aggregate_trials({c1, with_nan});
    CHECK(skipped[0].count == 1);
    CHECK(skipped[0].mean == doctest::Approx(0.5));

    const Curve wrong_grid = {{1, 0.5}, {5, 0.4}, {3, 0.3}};
    CHECK_THROWS_AS(aggregate_trials({c1, wrong_grid}), GridMismatch);
    const Curve short_grid = {{1, 0.5}, {2, 0.4}};
    CHECK_THROWS_AS(aggregate_trials({c1, short_grid}), GridMismatch);
}

TEST_CASE("mean_stddev two-sample formula") {
    const auto [mean, sd] = mean_stddev({0.3, 0.7});
    CHECK(mean == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sd == doctest::Approx(0.4 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(mean_stddev({1.0}).second == 0.0);
}
