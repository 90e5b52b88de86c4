// qsv: build MUB verification strategies, simulate noisy sources and run the
// confidence/infidelity analysis from the command line.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsv/experiment.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;

std::optional<std::pair<std::int64_t, std::int64_t>> parse_window_flag(const std::string& raw) {
    if (raw.empty()) return std::nullopt;
    const std::size_t colon = raw.find(':');
    if (colon == std::string::npos)
        throw qsv::ConfigError("--window expects nlow:nhigh, got '" + raw + "'");
    try {
        const std::int64_t lo = std::stoll(raw.substr(0, colon));
        const std::int64_t hi = std::stoll(raw.substr(colon + 1));
        if (lo < 1 || hi < lo) throw std::invalid_argument("");
        return std::make_pair(lo, hi);
    } catch (const std::exception&) {
        throw qsv::ConfigError("--window expects nlow:nhigh with 1 <= nlow <= nhigh, got '" +
                               raw + "'");
    }
}

int run(int argc, char** argv) {
    CLI::App app{"optimal MUB verification of maximally entangled qudit states"};
    app.require_subcommand(1);

    auto* strategy_cmd =
        app.add_subcommand("strategy", "print the verification strategy document");
    std::size_t d = 3;
    strategy_cmd->add_option("--d", d, "qudit dimension (prime, 2..7)")->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "run seeded verification trials");
    std::string config_path;
    simulate_cmd->add_option("--config", config_path, "key=value config file")->required();
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::int64_t> trials_flag, copies_flag;
    std::optional<std::string> out_flag;
    simulate_cmd->add_option("--seed", seed_flag, "override the root seed");
    simulate_cmd->add_option("--trials", trials_flag, "override the trial count");
    simulate_cmd->add_option("--copies", copies_flag, "override the copies per trial");
    simulate_cmd->add_option("--out", out_flag, "override the output directory");

    auto* analyze_cmd =
        app.add_subcommand("analyze", "derive delta(N) and epsilon(N) curves from ledgers");
    std::string analyze_dir;
    double epsilon = 0.0, delta = 0.0;
    analyze_cmd->add_option("--in", analyze_dir, "simulation output directory")->required();
    analyze_cmd->add_option("--epsilon", epsilon, "infidelity threshold for delta(N)")
        ->required();
    analyze_cmd->add_option("--delta", delta, "confidence parameter for epsilon(N)")->required();

    auto* fit_cmd = app.add_subcommand("fit", "fit the epsilon(N) scaling exponent");
    std::string fit_dir;
    std::string window_raw;
    fit_cmd->add_option("--in", fit_dir, "analysis output directory")->required();
    fit_cmd->add_option("--window", window_raw, "fit window as nlow:nhigh");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    if (strategy_cmd->parsed()) {
        std::cout << qsv::strategy_report_json(d);
        return 0;
    }

    if (simulate_cmd->parsed()) {
        qsv::ExperimentConfig config = qsv::load_config(config_path);
        if (seed_flag) config.seed = *seed_flag;
        if (trials_flag) config.n_trials = *trials_flag;
        if (copies_flag) config.n_copies = *copies_flag;
        if (out_flag) config.output_dir = *out_flag;
        const qsv::ExperimentReport report = qsv::run_simulation(config);
        std::cout << "simulated " << config.n_trials << " trial(s) of " << config.n_copies
                  << " copies into " << config.output_dir.string() << "\n"
                  << "lambda2 " << report.lambda2 << ", analytic pass probability "
                  << report.analytic_pass_probability << "\n"
                  << "wall clock " << report.duration_seconds << " s\n";
        return 0;
    }

    if (analyze_cmd->parsed()) {
        const qsv::AnalysisResult result = qsv::run_analysis(analyze_dir, epsilon, delta);
        std::cout << "analyzed " << result.curves.size() << " ledger(s); curves and "
                  << "curves_aggregate.csv written under " << analyze_dir << "\n";
        return 0;
    }

    if (fit_cmd->parsed()) {
        const auto window = parse_window_flag(window_raw);
        const qsv::FitSummary summary = qsv::run_fit(fit_dir, window);
        if (summary.plateau_warning)
            std::cerr << "warning: window excludes the linear regime (slope "
                      << summary.slope << ")\n";
        std::cout << qsv::fit_summary_json(summary);
        return 0;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qsv::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qsv::UnsupportedDimension& e) {
        std::cerr << "error: unsupported dimension: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qsv::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qsv::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const qsv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
