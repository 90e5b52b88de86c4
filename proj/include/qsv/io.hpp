#pragma once

// File formats: ledger CSV, analysis curve CSV, aggregate CSV and JSON
// summaries. CSV files are comma-separated with a header row, UTF-8, LF line
// endings; reals carry 17 significant digits so round-trips are lossless.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qsv/device.hpp"
#include "qsv/mub.hpp"
#include "qsv/stats.hpp"

namespace qsv {

std::string format_real(double v);

// columns: copy_index,setting,k_alice,k_bob,passed
void write_ledger_csv(const std::filesystem::path& path, const RunLedger& ledger);
RunLedger read_ledger_csv(const std::filesystem::path& path);

struct CurvePoint {
    std::int64_t n = 0;
    std::int64_t m = 0;
    double pass_rate = 0.0;
    double delta = 1.0;
    double epsilon = 0.0;
    double log_delta = 0.0;
};

// columns: n,m,pass_rate,delta,epsilon,log_delta
void write_curve_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& curve);
std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path);

// columns: n,<name>_mean,<name>_stddev[,...] for each aggregated quantity,
// plus epsilon_trials (the number of trials with a defined epsilon).
void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<AggregatePoint>& pass_rate,
                         const std::vector<AggregatePoint>& delta,
                         const std::vector<AggregatePoint>& epsilon);

// columns: n,pass_rate_mean,pass_rate_stddev
void write_pass_rate_csv(const std::filesystem::path& path,
                         const std::vector<AggregatePoint>& pass_rate);

// JSON document with d, the basis vectors as re/im pairs, lambda2 and the
// Delta_eps coefficient.
std::string strategy_json(const VerificationStrategy& strategy);

}  // namespace qsv
