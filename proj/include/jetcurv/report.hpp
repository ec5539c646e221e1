/**
 * @file report.hpp
 * @brief Run reports: per-point records, summary, JSON round-trip, CSV.
 */

#pragma once

#include "jetcurv/chern.hpp"
#include "jetcurv/spec_io.hpp"
#include "jetcurv/types.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifndef JETCURV_VERSION
#define JETCURV_VERSION "0.1.0"
#endif

namespace jetcurv {

inline constexpr const char* kToolVersion = JETCURV_VERSION;

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "pass") return Verdict::Pass;
    if (s == "fail") return Verdict::Fail;
    if (s == "inconclusive") return Verdict::Inconclusive;
    throw Error(ErrorKind::Config, "unknown verdict: " + s);
}

/// Fail dominates inconclusive, which dominates pass.
inline Verdict combine(Verdict a, Verdict b) {
    if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
    if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
    return Verdict::Pass;
}

inline int exit_code(Verdict v) {
    switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
    }
    return 2;
}

inline constexpr int kConfigErrorExit = 64;

struct Record {
    std::string label;   // potential name, empty for single-potential commands
    std::vector<Complex> z;
    std::map<std::string, double> values;
    double residual = 0.0;
    Verdict verdict = Verdict::Pass;

    bool operator==(const Record&) const = default;
};

struct Summary {
    double max_residual = 0.0;
    Verdict verdict = Verdict::Pass;
    double runtime_seconds = 0.0;

    bool operator==(const Summary&) const = default;
};

struct Report {
    std::string command;
    std::string tool_version = kToolVersion;
    std::string config_hash;
    std::uint64_t seed = 0;
    nlohmann::json config;  // echo of the run configuration
    std::vector<Record> records;
    Summary summary;
    std::string message;

    bool operator==(const Report&) const = default;

    /// Recomputes max_residual and verdict from the records; keeps runtime.
    void finalize() {
        summary.max_residual = 0.0;
        summary.verdict = Verdict::Pass;
        for (const auto& r : records) {
            summary.max_residual = std::max(summary.max_residual, r.residual);
            summary.verdict = combine(summary.verdict, r.verdict);
        }
    }
};

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline nlohmann::json to_json(const Record& r) {
    nlohmann::json z = nlohmann::json::array();
    for (const auto& c : r.z) z.push_back(complex_to_json(c));
    return {{"label", r.label}, {"z", z}, {"values", r.values}, {"residual", r.residual},
            {"verdict", to_string(r.verdict)}};
}

inline Record record_from_json(const nlohmann::json& j) {
    Record r;
    r.label = j.at("label").get<std::string>();
    for (const auto& c : j.at("z")) r.z.push_back(complex_from_json(c));
    r.values = j.at("values").get<std::map<std::string, double>>();
    r.residual = j.at("residual").get<double>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    return r;
}

inline nlohmann::json to_json(const Report& r) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : r.records) records.push_back(to_json(rec));
    return {{"command", r.command},
            {"tool_version", r.tool_version},
            {"config_hash", r.config_hash},
            {"seed", r.seed},
            {"config", r.config},
            {"records", records},
            {"summary",
             {{"max_residual", r.summary.max_residual},
              {"verdict", to_string(r.summary.verdict)},
              {"runtime_seconds", r.summary.runtime_seconds}}},
            {"message", r.message}};
}

inline Report report_from_json(const nlohmann::json& j) {
    try {
        Report r;
        r.command = j.at("command").get<std::string>();
        r.tool_version = j.at("tool_version").get<std::string>();
        r.config_hash = j.at("config_hash").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.config = j.at("config");
        for (const auto& rec : j.at("records")) r.records.push_back(record_from_json(rec));
        const auto& s = j.at("summary");
        r.summary.max_residual = s.at("max_residual").get<double>();
        r.summary.verdict = verdict_from_string(s.at("verdict").get<std::string>());
        r.summary.runtime_seconds = s.at("runtime_seconds").get<double>();
        r.message = j.value("message", "");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("malformed report: ") + e.what());
    }
}

inline std::string emit_json(const Report& r) { return to_json(r).dump(2); }

inline Report parse_json(const std::string& text) {
    try {
        return report_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("cannot parse report: ") + e.what());
    }
}

/**
 * CSV with a leading "# config_hash=..." comment. Columns are re/im of each
 * coordinate followed by the record values in the order given by `columns`.
 */
inline std::string emit_csv(const Report& r, const std::vector<std::string>& columns) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "# config_hash=" << r.config_hash << " command=" << r.command << " tool_version=" << r.tool_version
       << "\n";
    const std::size_t n = r.records.empty() ? 0 : r.records.front().z.size();
    std::vector<std::string> header;
    for (std::size_t i = 1; i <= n; ++i) {
        header.push_back("re_z" + std::to_string(i));
        header.push_back("im_z" + std::to_string(i));
    }
    header.insert(header.end(), columns.begin(), columns.end());
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& rec : r.records) {
        bool first = true;
        auto put = [&](double v) {
            os << (first ? "" : ",") << v;
            first = false;
        };
        for (const auto& c : rec.z) {
            put(c.real());
            put(c.imag());
        }
        for (const auto& col : columns) {
            const auto it = rec.values.find(col);
            put(it == rec.values.end() ? 0.0 : it->second);
        }
        os << "\n";
    }
    return os.str();
}

} // namespace jetcurv
