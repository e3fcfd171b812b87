#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ringpls/common.hpp"
#include "ringpls/csv.hpp"
#include "ringpls/time.hpp"

namespace ringpls {

inline constexpr int kPollutantCount = 9;

/// Pollutant order is fixed; it matches the response column layout
/// everywhere (CSV files, matrices, reports).
inline constexpr std::array<const char*, kPollutantCount> kPollutantNames = {
    "PM10", "PM2.5", "PMCO", "SO2", "O3", "CO", "NO2", "NO", "NOX"};

/// Storage units per pollutant position. Values are never rescaled.
inline constexpr std::array<const char*, kPollutantCount> kPollutantUnits = {
    "ug/m3", "ug/m3", "ug/m3", "ppb", "ppb", "ppm", "ppb", "ppb", "ppb"};

inline int pollutant_index(const std::string& name) {
    for (int i = 0; i < kPollutantCount; ++i) {
        if (name == kPollutantNames[static_cast<size_t>(i)]) return i;
    }
    throw ParseError("unknown pollutant '" + name + "'");
}

/// One station-hour of measurements. Missing values are flagged in
/// null_mask and the corresponding slot in values is unspecified.
struct PollutionRecord {
    std::string station_id;
    CivilHour timestamp;
    std::array<double, kPollutantCount> values{};
    std::array<bool, kPollutantCount> null_mask{};

    bool is_complete() const {
        for (bool b : null_mask) {
            if (b) return false;
        }
        return true;
    }
};

/// Field tokens interpreted as missing measurements.
struct NullSentinels {
    std::vector<std::string> tokens = {"", "-99"};

    bool matches(const std::string& field) const {
        for (const auto& t : tokens) {
            if (field == t) return true;
        }
        return false;
    }
};

inline const std::string kPollutionCsvHeader =
    "station_id,timestamp,PM10,PM2.5,PMCO,SO2,O3,CO,NO2,NO,NOX";

/// Parses a pollution CSV. One record per station-hour, duplicate keys are
/// an error rather than last-wins.
inline std::vector<PollutionRecord> parse_pollution_csv(std::istream& in,
                                                        const NullSentinels& sentinels = {}) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty pollution file (missing header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kPollutionCsvHeader) {
        throw SchemaError("bad pollution header: expected '" + kPollutionCsvHeader + "', got '" +
                          line + "'");
    }

    std::vector<PollutionRecord> records;
    std::set<std::pair<std::string, CivilHour>> seen;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        const std::string ctx = "pollution line " + std::to_string(line_no);
        if (fields.size() != 2 + kPollutantCount) {
            throw ParseError(ctx + ": expected " + std::to_string(2 + kPollutantCount) +
                             " fields, got " + std::to_string(fields.size()));
        }
        PollutionRecord rec;
        rec.station_id = fields[0];
        if (rec.station_id.empty()) throw ParseError(ctx + ": empty station_id");
        rec.timestamp = parse_civil_hour(fields[1]);
        for (int i = 0; i < kPollutantCount; ++i) {
            const std::string& f = fields[static_cast<size_t>(2 + i)];
            if (sentinels.matches(f)) {
                rec.null_mask[static_cast<size_t>(i)] = true;
                continue;
            }
            const double v = parse_real(f, ctx);
            if (!std::isfinite(v)) throw ParseError(ctx + ": non-finite value '" + f + "'");
            if (v < 0.0) {
                throw ParseError(ctx + ": negative concentration " + f + " for " +
                                 kPollutantNames[static_cast<size_t>(i)]);
            }
            rec.values[static_cast<size_t>(i)] = v;
        }
        const auto key = std::make_pair(rec.station_id, rec.timestamp);
        if (!seen.insert(key).second) {
            throw DuplicateKey(ctx + ": duplicate record for " + rec.station_id + " at " +
                               rec.timestamp.to_string());
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<PollutionRecord> parse_pollution_csv_file(const std::string& path,
                                                             const NullSentinels& sentinels = {}) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open pollution file '" + path + "'");
    return parse_pollution_csv(in, sentinels);
}

inline void write_pollution_csv(std::ostream& out, const std::vector<PollutionRecord>& records) {
    out << kPollutionCsvHeader << "\n";
    for (const auto& rec : records) {
        out << rec.station_id << ',' << rec.timestamp.to_string();
        for (int i = 0; i < kPollutantCount; ++i) {
            out << ',';
            if (!rec.null_mask[static_cast<size_t>(i)]) {
                out << fmt_real9(rec.values[static_cast<size_t>(i)]);
            }
        }
        out << "\n";
    }
}

}  // namespace ringpls
