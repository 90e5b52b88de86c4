#include "qsv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace qsv {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double config_double(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': bad real '" + value + "'");
    }
}

std::int64_t config_int(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': bad integer '" + value + "'");
    }
}

std::uint64_t config_uint(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': bad unsigned integer '" + value + "'");
    }
}

// "re,im; re,im; ..." -> complex amplitudes
std::vector<cxd> parse_coefficients(const std::string& value) {
    std::vector<cxd> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t end = value.find(';', start);
        if (end == std::string::npos) end = value.size();
        const std::string item = trim(value.substr(start, end - start));
        if (!item.empty()) {
            const std::size_t comma = item.find(',');
            if (comma == std::string::npos)
                throw ConfigError("config field 'coefficients': expected re,im pair, got '" +
                                  item + "'");
            out.emplace_back(config_double(trim(item.substr(0, comma)), "coefficients"),
                             config_double(trim(item.substr(comma + 1)), "coefficients"));
        }
        start = end + 1;
    }
    return out;
}

std::pair<std::int64_t, std::int64_t> parse_window(const std::string& value,
                                                   const std::string& key) {
    const std::size_t colon = value.find(':');
    if (colon == std::string::npos)
        throw ConfigError("config field '" + key + "': expected nlow:nhigh, got '" + value + "'");
    const std::int64_t lo = config_int(trim(value.substr(0, colon)), key);
    const std::int64_t hi = config_int(trim(value.substr(colon + 1)), key);
    if (lo < 1 || hi < lo)
        throw ConfigError("config field '" + key + "': window bounds out of order");
    return {lo, hi};
}

NoiseChannel::Kind parse_noise_kind(const std::string& value) {
    if (value == "none") return NoiseChannel::Kind::none;
    if (value == "white") return NoiseChannel::Kind::white;
    if (value == "dephase") return NoiseChannel::Kind::dephase;
    throw ConfigError("config field 'noise': unknown kind '" + value +
                      "' (expected none, white or dephase)");
}

std::string noise_kind_name(NoiseChannel::Kind kind) {
    switch (kind) {
        case NoiseChannel::Kind::none: return "none";
        case NoiseChannel::Kind::white: return "white";
        case NoiseChannel::Kind::dephase: return "dephase";
    }
    return "none";
}

std::string trial_file_name(std::size_t t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "trial_%05zu.csv", t);
    return buf;
}

// Deterministic worker pool over trial indices.
void parallel_for_trials(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(hw, n));
    if (workers <= 1) {
        for (std::size_t t = 0; t < n; ++t) body(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= n) return;
                try {
                    body(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

json config_json(const ExperimentConfig& c) {
    json j;
    j["d"] = c.d;
    json coeffs = json::array();
    for (const cxd& z : c.coefficients) coeffs.push_back({z.real(), z.imag()});
    j["coefficients"] = std::move(coeffs);
    j["noise"] = noise_kind_name(c.noise.kind);
    j["noise_param"] = c.noise.param;
    j["copies"] = c.n_copies;
    j["trials"] = c.n_trials;
    j["seed"] = c.seed;
    j["epsilon"] = c.epsilon;
    j["delta"] = c.delta;
    if (c.fit_window)
        j["fit_window"] = {c.fit_window->first, c.fit_window->second};
    else
        j["fit_window"] = nullptr;
    return j;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

DeviceModel device_from_config(const ExperimentConfig& c) {
    std::vector<cxd> coeffs = c.coefficients;
    if (coeffs.empty()) coeffs.assign(c.d, cxd(1.0, 0.0));
    return build_device(c.d, std::move(coeffs), c.noise);
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());

    ExperimentConfig c;
    std::string noise_kind = "white";
    double noise_param = 0.9352;
    bool saw_noise = false, saw_noise_param = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "d") {
            c.d = static_cast<std::size_t>(config_int(value, key));
        } else if (key == "coefficients") {
            c.coefficients = parse_coefficients(value);
        } else if (key == "noise") {
            noise_kind = value;
            saw_noise = true;
        } else if (key == "noise_param") {
            noise_param = config_double(value, key);
            saw_noise_param = true;
        } else if (key == "copies") {
            c.n_copies = config_int(value, key);
        } else if (key == "trials") {
            c.n_trials = config_int(value, key);
        } else if (key == "seed") {
            c.seed = config_uint(value, key);
        } else if (key == "epsilon") {
            c.epsilon = config_double(value, key);
        } else if (key == "delta") {
            c.delta = config_double(value, key);
        } else if (key == "fit_window") {
            c.fit_window = parse_window(value, key);
        } else if (key == "out") {
            c.output_dir = value;
        } else {
            throw ConfigError("config field '" + key + "' is not recognized");
        }
    }

    if (saw_noise || saw_noise_param) {
        const NoiseChannel::Kind kind = parse_noise_kind(noise_kind);
        try {
            switch (kind) {
                case NoiseChannel::Kind::none: c.noise = NoiseChannel::none(); break;
                case NoiseChannel::Kind::white: c.noise = NoiseChannel::white(noise_param); break;
                case NoiseChannel::Kind::dephase:
                    c.noise = NoiseChannel::dephase(noise_param);
                    break;
            }
        } catch (const DomainError& e) {
            throw ConfigError(std::string("config field 'noise_param': ") + e.what());
        }
    }
    return c;
}

void validate_config(const ExperimentConfig& c) {
    if (c.d != 2 && c.d != 3 && c.d != 5 && c.d != 7)
        throw ConfigError("config field 'd': unsupported dimension " + std::to_string(c.d));
    if (!c.coefficients.empty() && c.coefficients.size() != c.d)
        throw ConfigError("config field 'coefficients': expected " + std::to_string(c.d) +
                          " entries, found " + std::to_string(c.coefficients.size()));
    if (c.n_copies < 1) throw ConfigError("config field 'copies': must be >= 1");
    if (c.n_trials < 1) throw ConfigError("config field 'trials': must be >= 1");
    if (!(c.epsilon > 0.0 && c.epsilon < 1.0))
        throw ConfigError("config field 'epsilon': must lie in (0,1)");
    if (!(c.delta > 0.0 && c.delta < 1.0))
        throw ConfigError("config field 'delta': must lie in (0,1)");
}

std::vector<std::int64_t> analysis_grid(std::int64_t n_copies) {
    std::vector<std::int64_t> grid;
    const std::int64_t dense = std::min<std::int64_t>(n_copies, 2000);
    grid.reserve(static_cast<std::size_t>(dense) + 64);
    for (std::int64_t n = 1; n <= dense; ++n) grid.push_back(n);
    std::int64_t n = dense;
    while (n < n_copies) {
        n = std::max(n + 1, static_cast<std::int64_t>(std::llround(
                                static_cast<double>(n) * 1.05)));
        if (n > n_copies) n = n_copies;
        grid.push_back(n);
    }
    return grid;
}

std::vector<CurvePoint> analyze_ledger(const RunLedger& ledger, double epsilon, double delta,
                                       double lambda2) {
    const std::vector<std::int64_t> grid = analysis_grid(ledger.copies());
    std::vector<CurvePoint> curve;
    curve.reserve(grid.size());
    for (const std::int64_t n : grid) {
        CurvePoint p;
        p.n = n;
        p.m = ledger.passes_at(n);
        p.pass_rate = static_cast<double>(p.m) / static_cast<double>(n);
        p.delta = confidence_delta(n, p.m, epsilon, lambda2);
        p.log_delta = std::log(p.delta);
        if (p.m >= 1) {
            try {
                p.epsilon = solve_epsilon(n, p.m, delta, lambda2);
            } catch (const NotAchievable&) {
                p.epsilon = std::numeric_limits<double>::quiet_NaN();
            }
        } else {
            p.epsilon = std::numeric_limits<double>::quiet_NaN();
        }
        curve.push_back(p);
    }
    return curve;
}

std::pair<std::int64_t, std::int64_t> default_fit_window(const std::vector<CurvePoint>& curve,
                                                         double lambda2) {
    if (curve.empty()) throw DegenerateFit("default_fit_window: empty curve");
    const double final_rate = curve.back().pass_rate;
    const double eps_inf = asymptotic_epsilon(final_rate, lambda2);
    const double floor = kFitPlateauFactor * eps_inf;

    std::int64_t lo = -1, hi = -1;
    for (const CurvePoint& p : curve) {
        if (!std::isfinite(p.epsilon) || p.epsilon <= 0.0) continue;
        if (p.epsilon > kFitHeadEpsilonCap) continue;
        if (eps_inf > 0.0 && p.epsilon < floor) continue;
        if (lo < 0) lo = p.n;
        hi = p.n;
    }
    if (lo < 0 || hi <= lo)
        throw DegenerateFit("default_fit_window: no usable power-law region in curve");
    return {lo, hi};
}

std::vector<std::pair<std::int64_t, double>> log_spaced_fit_points(
    const std::vector<CurvePoint>& curve, std::pair<std::int64_t, std::int64_t> window) {
    std::vector<std::pair<std::int64_t, double>> usable;
    for (const CurvePoint& p : curve) {
        if (p.n < window.first || p.n > window.second) continue;
        if (!std::isfinite(p.epsilon) || p.epsilon <= 0.0) continue;
        usable.emplace_back(p.n, p.epsilon);
    }
    std::vector<std::pair<std::int64_t, double>> out;
    double threshold = 0.0;
    for (const auto& pt : usable) {
        if (out.empty() || static_cast<double>(pt.first) >= threshold) {
            out.push_back(pt);
            threshold = static_cast<double>(pt.first) * 1.05;
        }
    }
    if (!out.empty() && !usable.empty() && out.back().first != usable.back().first)
        out.push_back(usable.back());
    return out;
}

FitSummary fit_trials(const std::vector<std::vector<CurvePoint>>& curves, double lambda2,
                      std::optional<std::pair<std::int64_t, std::int64_t>> window) {
    if (curves.empty()) throw DegenerateFit("fit_trials: no curves");

    FitSummary summary;
    summary.trials = curves.size();
    std::vector<double> slopes, intercepts;
    std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = 0;
    for (const auto& curve : curves) {
        const auto w = window ? *window : default_fit_window(curve, lambda2);
        const auto points = log_spaced_fit_points(curve, w);
        const ScalingFit fit = fit_scaling(points, w);
        slopes.push_back(fit.slope);
        intercepts.push_back(fit.intercept);
        lo = std::min(lo, fit.n_low);
        hi = std::max(hi, fit.n_high);
    }
    const auto [slope_mean, slope_sd] = mean_stddev(slopes);
    const auto [icept_mean, icept_sd] = mean_stddev(intercepts);
    (void)icept_sd;
    summary.slope = slope_mean;
    summary.intercept = icept_mean;
    summary.window_low = lo;
    summary.window_high = hi;

    // Mean epsilon curve across trials, fitted once for reference.
    {
        std::vector<std::vector<std::pair<std::int64_t, double>>> eps_curves;
        eps_curves.reserve(curves.size());
        for (const auto& curve : curves) {
            std::vector<std::pair<std::int64_t, double>> c;
            c.reserve(curve.size());
            for (const CurvePoint& p : curve) c.emplace_back(p.n, p.epsilon);
            eps_curves.push_back(std::move(c));
        }
        const auto agg = aggregate_trials(eps_curves);
        std::vector<CurvePoint> mean_curve;
        mean_curve.reserve(agg.size());
        for (std::size_t i = 0; i < agg.size(); ++i) {
            CurvePoint p;
            p.n = agg[i].n;
            p.epsilon = agg[i].mean;
            p.pass_rate = curves.front()[i].pass_rate;
            mean_curve.push_back(p);
        }
        // Final pass rate of the mean curve: average over trials.
        double rate_sum = 0.0;
        for (const auto& curve : curves) rate_sum += curve.back().pass_rate;
        mean_curve.back().pass_rate = rate_sum / static_cast<double>(curves.size());
        const auto w = window ? *window : default_fit_window(mean_curve, lambda2);
        summary.aggregate_fit = fit_scaling(log_spaced_fit_points(mean_curve, w), w);
    }

    // Across-trial scatter is the primary slope error; a single trial falls
    // back to its regression stderr.
    summary.slope_stderr = summary.trials > 1 ? slope_sd : summary.aggregate_fit.slope_stderr;
    const double sd_for_excess =
        summary.slope_stderr > 0.0 ? summary.slope_stderr : summary.aggregate_fit.slope_stderr;
    if (summary.slope < -0.5) {
        summary.sigma_excess = sd_for_excess > 0.0
                                   ? slope_sigma_excess(summary.slope, sd_for_excess, -0.5)
                                   : std::numeric_limits<double>::infinity();
    } else {
        summary.sigma_excess = 0.0;
    }
    summary.plateau_warning = std::abs(summary.slope) < 0.1;
    return summary;
}

ExperimentReport run_simulation(const ExperimentConfig& config) {
    validate_config(config);
    const auto t0 = std::chrono::steady_clock::now();

    const VerificationStrategy strategy = build_strategy(build_mub(config.d));
    const DeviceModel device = device_from_config(config);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir / "ledgers", ec);
    if (ec)
        throw IoError("cannot create output directory: " +
                      (config.output_dir / "ledgers").string());

    ExperimentReport report;
    report.config = config;
    report.lambda2 = strategy.lambda2;
    report.analytic_pass_probability = pass_probability(device, strategy);

    const auto n_trials = static_cast<std::size_t>(config.n_trials);
    report.ledgers.resize(n_trials);
    parallel_for_trials(n_trials, [&](std::size_t t) {
        RandomStream stream(config.seed, t);
        report.ledgers[t] = run_copies(device, strategy, config.n_copies, stream);
    });

    std::vector<std::vector<std::pair<std::int64_t, double>>> rate_curves(n_trials);
    const std::vector<std::int64_t> grid = analysis_grid(config.n_copies);
    for (std::size_t t = 0; t < n_trials; ++t) {
        const std::filesystem::path rel = std::filesystem::path("ledgers") / trial_file_name(t);
        write_ledger_csv(config.output_dir / rel, report.ledgers[t]);
        report.ledger_files.push_back(rel);
        auto& curve = rate_curves[t];
        curve.reserve(grid.size());
        for (const std::int64_t n : grid)
            curve.emplace_back(n, static_cast<double>(report.ledgers[t].passes_at(n)) /
                                      static_cast<double>(n));
    }

    report.pass_rate_file = "pass_rate_aggregate.csv";
    write_pass_rate_csv(config.output_dir / report.pass_rate_file,
                        aggregate_trials(rate_curves));

    json doc;
    doc["config"] = config_json(config);
    doc["strategy"] = {{"d", config.d},
                       {"lambda2", strategy.lambda2},
                       {"delta_eps_coeff", strategy.delta_eps_coeff()}};
    doc["analytic_pass_probability"] = report.analytic_pass_probability;
    json files;
    files["pass_rate_aggregate"] = report.pass_rate_file.string();
    json ledger_names = json::array();
    for (const auto& rel : report.ledger_files) ledger_names.push_back(rel.generic_string());
    files["ledgers"] = std::move(ledger_names);
    doc["files"] = std::move(files);
    write_text_file(config.output_dir / "report.json", doc.dump(2) + "\n");

    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::vector<std::vector<CurvePoint>> analyze_ledgers(const std::vector<RunLedger>& ledgers,
                                                     double epsilon, double delta,
                                                     double lambda2) {
    if (ledgers.empty()) throw DataError("no ledgers to analyze");
    const std::int64_t copies = ledgers.front().copies();
    for (const RunLedger& l : ledgers)
        if (l.copies() != copies)
            throw GridMismatch("ledgers do not share the same copy grid");

    std::vector<std::vector<CurvePoint>> curves(ledgers.size());
    parallel_for_trials(ledgers.size(), [&](std::size_t t) {
        curves[t] = analyze_ledger(ledgers[t], epsilon, delta, lambda2);
    });
    return curves;
}

AnalysisResult run_analysis(const std::filesystem::path& dir, double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("epsilon must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");

    const json report = read_json_file(dir / "report.json");
    AnalysisResult result;
    std::vector<RunLedger> ledgers;
    try {
        result.lambda2 = report.at("strategy").at("lambda2").get<double>();
        for (const auto& rel : report.at("files").at("ledgers"))
            ledgers.push_back(read_ledger_csv(dir / rel.get<std::string>()));
    } catch (const json::exception& e) {
        throw DataError("report.json is missing required fields: " + std::string(e.what()));
    }

    result.curves = analyze_ledgers(ledgers, epsilon, delta, result.lambda2);

    std::error_code ec;
    std::filesystem::create_directories(dir / "curves", ec);
    if (ec) throw IoError("cannot create output directory: " + (dir / "curves").string());

    std::vector<std::vector<std::pair<std::int64_t, double>>> rate_c, delta_c, eps_c;
    for (std::size_t t = 0; t < result.curves.size(); ++t) {
        const std::filesystem::path rel = std::filesystem::path("curves") / trial_file_name(t);
        write_curve_csv(dir / rel, result.curves[t]);
        result.curve_files.push_back(rel);
        std::vector<std::pair<std::int64_t, double>> r, dl, ep;
        for (const CurvePoint& p : result.curves[t]) {
            r.emplace_back(p.n, p.pass_rate);
            dl.emplace_back(p.n, p.delta);
            ep.emplace_back(p.n, p.epsilon);
        }
        rate_c.push_back(std::move(r));
        delta_c.push_back(std::move(dl));
        eps_c.push_back(std::move(ep));
    }
    write_aggregate_csv(dir / "curves_aggregate.csv", aggregate_trials(rate_c),
                        aggregate_trials(delta_c), aggregate_trials(eps_c));
    return result;
}

FitSummary run_fit(const std::filesystem::path& dir,
                   std::optional<std::pair<std::int64_t, std::int64_t>> window) {
    const json report = read_json_file(dir / "report.json");
    double lambda2 = 0.0;
    try {
        lambda2 = report.at("strategy").at("lambda2").get<double>();
    } catch (const json::exception& e) {
        throw DataError("report.json is missing required fields: " + std::string(e.what()));
    }

    std::vector<std::filesystem::path> files;
    const std::filesystem::path curves_dir = dir / "curves";
    if (!std::filesystem::is_directory(curves_dir))
        throw IoError("no curves directory under " + dir.string() + "; run analyze first");
    for (const auto& entry : std::filesystem::directory_iterator(curves_dir))
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.size() < 3)
        throw DegenerateFit("fit requires at least 3 trial curves, found " +
                            std::to_string(files.size()));

    std::vector<std::vector<CurvePoint>> curves;
    curves.reserve(files.size());
    for (const auto& f : files) curves.push_back(read_curve_csv(f));

    const FitSummary summary = fit_trials(curves, lambda2, window);
    write_text_file(dir / "fit.json", fit_summary_json(summary));
    return summary;
}

std::string strategy_report_json(std::size_t d) {
    const VerificationStrategy strategy = build_strategy(build_mub(d));
    json doc = json::parse(strategy_json(strategy));

    const double deltas[] = {0.10, 0.05, 0.01};
    const double epsilons[] = {0.10, 0.08, 0.05, 0.01};
    json table = json::array();
    for (const double delta : deltas)
        for (const double eps : epsilons)
            table.push_back({{"delta", delta},
                             {"epsilon", eps},
                             {"min_copies", min_copies(eps, delta, strategy.lambda2)}});
    doc["min_copies_table"] = std::move(table);
    return doc.dump(2) + "\n";
}

std::string fit_summary_json(const FitSummary& s) {
    json doc;
    doc["slope"] = s.slope;
    doc["slope_stderr"] = s.slope_stderr;
    doc["intercept"] = s.intercept;
    doc["window"] = {s.window_low, s.window_high};
    doc["sigma_excess"] = s.sigma_excess;
    doc["trials"] = s.trials;
    doc["plateau_warning"] = s.plateau_warning;
    doc["single_fit"] = {{"slope", s.aggregate_fit.slope},
                         {"slope_stderr", s.aggregate_fit.slope_stderr},
                         {"intercept", s.aggregate_fit.intercept},
                         {"window", {s.aggregate_fit.n_low, s.aggregate_fit.n_high}},
                         {"points", s.aggregate_fit.n_points}};
    return doc.dump(2) + "\n";
}

}  // namespace qsv
