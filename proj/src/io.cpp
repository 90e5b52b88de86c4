#include "qsv/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qsv {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::int64_t parse_int(const std::string& s, const std::string& context) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError(context + ": bad integer '" + s + "'");
    return value;
}

double parse_double(const std::string& s, const std::string& context) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
        throw DataError(context + ": bad real '" + s + "'");
    return value;
}

std::string row_context(const std::filesystem::path& path, std::size_t row) {
    return path.filename().string() + " row " + std::to_string(row);
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_ledger_csv(const std::filesystem::path& path, const RunLedger& ledger) {
    std::ofstream out = open_output(path);
    out << "copy_index,setting,k_alice,k_bob,passed\n";
    for (const TestRecord& r : ledger.records) {
        out << r.copy_index << ',' << r.setting << ',' << r.k_alice << ',' << r.k_bob << ','
            << (r.passed ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

RunLedger read_ledger_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || split_csv_row(line).size() != 5)
        throw DataError(path.filename().string() + ": missing or malformed ledger header");

    RunLedger ledger;
    std::int64_t passes = 0;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != 5)
            throw DataError(row_context(path, row) + ": expected 5 columns, found " +
                            std::to_string(fields.size()));
        const std::string ctx = row_context(path, row);
        TestRecord rec;
        rec.copy_index = parse_int(fields[0], ctx);
        rec.setting = static_cast<int>(parse_int(fields[1], ctx));
        rec.k_alice = static_cast<int>(parse_int(fields[2], ctx));
        rec.k_bob = static_cast<int>(parse_int(fields[3], ctx));
        const std::int64_t passed = parse_int(fields[4], ctx);
        if (passed != 0 && passed != 1) throw DataError(ctx + ": passed must be 0 or 1");
        rec.passed = passed == 1;
        if (rec.copy_index != ledger.copies() + 1)
            throw DataError(ctx + ": copy_index out of sequence");
        if (rec.passed) ++passes;
        ledger.records.push_back(rec);
        ledger.cumulative_passes.push_back(passes);
    }
    if (ledger.records.empty())
        throw DataError(path.filename().string() + ": ledger has no records");
    return ledger;
}

void write_curve_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& curve) {
    std::ofstream out = open_output(path);
    out << "n,m,pass_rate,delta,epsilon,log_delta\n";
    for (const CurvePoint& p : curve) {
        out << p.n << ',' << p.m << ',' << format_real(p.pass_rate) << ','
            << format_real(p.delta) << ',' << format_real(p.epsilon) << ','
            << format_real(p.log_delta) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || split_csv_row(line).size() != 6)
        throw DataError(path.filename().string() + ": missing or malformed curve header");

    std::vector<CurvePoint> curve;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != 6)
            throw DataError(row_context(path, row) + ": expected 6 columns, found " +
                            std::to_string(fields.size()));
        const std::string ctx = row_context(path, row);
        CurvePoint p;
        p.n = parse_int(fields[0], ctx);
        p.m = parse_int(fields[1], ctx);
        p.pass_rate = parse_double(fields[2], ctx);
        p.delta = parse_double(fields[3], ctx);
        p.epsilon = parse_double(fields[4], ctx);
        p.log_delta = parse_double(fields[5], ctx);
        curve.push_back(p);
    }
    if (curve.empty()) throw DataError(path.filename().string() + ": curve has no points");
    return curve;
}

void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<AggregatePoint>& pass_rate,
                         const std::vector<AggregatePoint>& delta,
                         const std::vector<AggregatePoint>& epsilon) {
    std::ofstream out = open_output(path);
    out << "n,pass_rate_mean,pass_rate_stddev,delta_mean,delta_stddev,"
           "epsilon_mean,epsilon_stddev,epsilon_trials\n";
    for (std::size_t i = 0; i < pass_rate.size(); ++i) {
        out << pass_rate[i].n << ',' << format_real(pass_rate[i].mean) << ','
            << format_real(pass_rate[i].stddev) << ',' << format_real(delta[i].mean) << ','
            << format_real(delta[i].stddev) << ',' << format_real(epsilon[i].mean) << ','
            << format_real(epsilon[i].stddev) << ',' << epsilon[i].count << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_pass_rate_csv(const std::filesystem::path& path,
                         const std::vector<AggregatePoint>& pass_rate) {
    std::ofstream out = open_output(path);
    out << "n,pass_rate_mean,pass_rate_stddev\n";
    for (const AggregatePoint& p : pass_rate)
        out << p.n << ',' << format_real(p.mean) << ',' << format_real(p.stddev) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

std::string strategy_json(const VerificationStrategy& strategy) {
    nlohmann::json doc;
    doc["d"] = strategy.d;
    doc["lambda2"] = strategy.lambda2;
    doc["delta_eps_coeff"] = strategy.delta_eps_coeff();
    doc["probabilities"] = strategy.probabilities;
    nlohmann::json bases = nlohmann::json::array();
    for (const auto& basis : strategy.mubs.bases) {
        nlohmann::json jbasis = nlohmann::json::array();
        for (const ComplexVector& v : basis) {
            nlohmann::json jvec = nlohmann::json::array();
            for (const cxd& e : v.entries()) jvec.push_back({e.real(), e.imag()});
            jbasis.push_back(std::move(jvec));
        }
        bases.push_back(std::move(jbasis));
    }
    doc["bases"] = std::move(bases);
    return doc.dump(2) + "\n";
}

}  // namespace qsv
