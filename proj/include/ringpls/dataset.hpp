#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ringpls/common.hpp"
#include "ringpls/csv.hpp"
#include "ringpls/intensity.hpp"
#include "ringpls/pollution.hpp"
#include "ringpls/time.hpp"

namespace ringpls {

struct AlignedRow {
    std::string station_id;
    CivilHour timestamp;
    std::array<double, kPredictorCount> x{};
    std::array<double, kPollutantCount> y{};
};

/// Bookkeeping carried along with a dataset: where it came from and how
/// many rows each pipeline stage kept.
struct Provenance {
    std::map<std::string, std::string> source_digests;
    std::map<std::string, long> stage_counts;
    std::map<std::string, std::string> settings;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["source_digests"] = source_digests;
        j["stage_counts"] = stage_counts;
        j["settings"] = settings;
        return j;
    }
};

/// Joined modelling table: one row per (station, hour) with 60 predictors
/// and 9 responses, sorted by (station_id, timestamp), keys unique.
struct AlignedDataset {
    std::vector<AlignedRow> rows;
    Provenance provenance;

    Eigen::MatrixXd x_matrix() const {
        Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), kPredictorCount);
        for (size_t i = 0; i < rows.size(); ++i) {
            for (int j = 0; j < kPredictorCount; ++j) {
                X(static_cast<Eigen::Index>(i), j) = rows[i].x[static_cast<size_t>(j)];
            }
        }
        return X;
    }

    Eigen::MatrixXd y_matrix() const {
        Eigen::MatrixXd Y(static_cast<Eigen::Index>(rows.size()), kPollutantCount);
        for (size_t i = 0; i < rows.size(); ++i) {
            for (int j = 0; j < kPollutantCount; ++j) {
                Y(static_cast<Eigen::Index>(i), j) = rows[i].y[static_cast<size_t>(j)];
            }
        }
        return Y;
    }

    std::set<std::string> stations() const {
        std::set<std::string> out;
        for (const auto& r : rows) out.insert(r.station_id);
        return out;
    }

    AlignedDataset restricted_to(const std::set<std::string>& keep) const {
        AlignedDataset out;
        out.provenance = provenance;
        for (const auto& r : rows) {
            if (keep.count(r.station_id)) out.rows.push_back(r);
        }
        return out;
    }

    void sort_rows() {
        std::sort(rows.begin(), rows.end(), [](const AlignedRow& a, const AlignedRow& b) {
            if (a.station_id != b.station_id) return a.station_id < b.station_id;
            return a.timestamp < b.timestamp;
        });
    }
};

/// Inner join of intensities and pollution on (station_id, timestamp),
/// restricted to `stations`. Pollution records with missing values are
/// dropped (and counted) so every row has a complete response vector.
inline AlignedDataset align(const std::vector<IntensityVector>& intensities,
                            const std::vector<PollutionRecord>& pollution,
                            const std::set<std::string>& stations) {
    std::map<std::pair<std::string, CivilHour>, const PollutionRecord*> by_key;
    long incomplete_dropped = 0;
    for (const auto& p : pollution) {
        if (!stations.count(p.station_id)) continue;
        if (!p.is_complete()) {
            ++incomplete_dropped;
            continue;
        }
        by_key[{p.station_id, p.timestamp}] = &p;
    }

    AlignedDataset out;
    long unmatched_intensity = 0;
    for (const auto& iv : intensities) {
        if (!stations.count(iv.station_id)) continue;
        const auto it = by_key.find({iv.station_id, iv.timestamp});
        if (it == by_key.end()) {
            ++unmatched_intensity;
            continue;
        }
        AlignedRow row;
        row.station_id = iv.station_id;
        row.timestamp = iv.timestamp;
        row.x = flatten_predictors(iv);
        row.y = it->second->values;
        out.rows.push_back(std::move(row));
    }
    if (out.rows.empty()) {
        throw EmptyJoin("no (station, hour) pairs shared between intensities and pollution");
    }
    out.sort_rows();
    for (size_t i = 1; i < out.rows.size(); ++i) {
        if (out.rows[i - 1].station_id == out.rows[i].station_id &&
            out.rows[i - 1].timestamp == out.rows[i].timestamp) {
            throw DuplicateKey("duplicate intensity rows for " + out.rows[i].station_id + " at " +
                               out.rows[i].timestamp.to_string());
        }
    }

    const long matched = static_cast<long>(out.rows.size());
    out.provenance.stage_counts["aligned_rows"] = matched;
    out.provenance.stage_counts["pollution_incomplete_dropped"] = incomplete_dropped;
    out.provenance.stage_counts["intensity_unmatched"] = unmatched_intensity;
    out.provenance.stage_counts["pollution_unmatched"] =
        static_cast<long>(by_key.size()) - matched;
    return out;
}

inline const std::string kDatasetKeyHeader = "station_id,timestamp";

inline std::string dataset_csv_header() {
    std::string h = kDatasetKeyHeader;
    for (const auto& n : predictor_names()) h += "," + n;
    for (const auto* n : kPollutantNames) h += "," + std::string(n);
    return h;
}

inline void write_dataset_csv(std::ostream& out, const AlignedDataset& ds) {
    out << dataset_csv_header() << "\n";
    for (const auto& r : ds.rows) {
        out << r.station_id << ',' << r.timestamp.to_string();
        for (double v : r.x) out << ',' << fmt_full(v);
        for (double v : r.y) out << ',' << fmt_full(v);
        out << "\n";
    }
}

inline AlignedDataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty dataset file (missing header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != dataset_csv_header()) throw SchemaError("bad dataset header");

    AlignedDataset ds;
    size_t line_no = 1;
    std::set<std::pair<std::string, CivilHour>> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        const std::string ctx = "dataset line " + std::to_string(line_no);
        if (fields.size() != 2 + kPredictorCount + kPollutantCount) {
            throw ParseError(ctx + ": wrong field count " + std::to_string(fields.size()));
        }
        AlignedRow r;
        r.station_id = fields[0];
        r.timestamp = parse_civil_hour(fields[1]);
        for (int j = 0; j < kPredictorCount; ++j) {
            r.x[static_cast<size_t>(j)] = parse_real(fields[static_cast<size_t>(2 + j)], ctx);
        }
        for (int j = 0; j < kPollutantCount; ++j) {
            r.y[static_cast<size_t>(j)] =
                parse_real(fields[static_cast<size_t>(2 + kPredictorCount + j)], ctx);
        }
        if (!seen.insert({r.station_id, r.timestamp}).second) {
            throw DuplicateKey(ctx + ": duplicate key");
        }
        ds.rows.push_back(std::move(r));
    }
    ds.sort_rows();
    return ds;
}

inline AlignedDataset read_dataset_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open dataset '" + path + "'");
    return read_dataset_csv(in);
}

}  // namespace ringpls
