#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ringpls/common.hpp"
#include "ringpls/csv.hpp"
#include "ringpls/intensity.hpp"
#include "ringpls/palette.hpp"
#include "ringpls/time.hpp"

namespace ringpls {

inline const std::string kIntensityCsvHeader = "station_id,timestamp,colour,ring,fraction";
inline const std::string kTotalsCsvHeader =
    "station_id,timestamp,I_green,I_orange,I_red,I_darkred";

/// Long-format per-ring fractions, one row per (station, hour, colour, ring).
inline void write_intensity_csv(std::ostream& out,
                                const std::vector<IntensityVector>& rows) {
    out << kIntensityCsvHeader << "\n";
    for (const auto& iv : rows) {
        for (TrafficColour c : kAllTrafficColours) {
            for (int ring = 1; ring <= iv.n_rings; ++ring) {
                out << iv.station_id << ',' << iv.timestamp.to_string() << ','
                    << to_string(c) << ',' << ring << ','
                    << fmt_real9(iv.ring_fractions[static_cast<size_t>(ring - 1)]
                                                  [static_cast<size_t>(c)])
                    << "\n";
            }
        }
    }
}

/// Companion aggregate table: the four per-colour intensities per hour.
inline void write_totals_csv(std::ostream& out, const std::vector<IntensityVector>& rows) {
    out << kTotalsCsvHeader << "\n";
    for (const auto& iv : rows) {
        out << iv.station_id << ',' << iv.timestamp.to_string();
        for (TrafficColour c : kAllTrafficColours) {
            out << ',' << fmt_real9(iv.totals[static_cast<size_t>(c)]);
        }
        out << "\n";
    }
}

/// Rebuild intensity vectors from the long-format CSV. Every (station,
/// hour) group must supply each (colour, ring) cell exactly once and all
/// groups must agree on the ring count; totals are recomputed from the
/// fractions rather than trusted from a second file.
inline std::vector<IntensityVector> read_intensity_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty intensity file (missing header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kIntensityCsvHeader) throw SchemaError("bad intensity header");

    struct Cell {
        int ring;
        TrafficColour colour;
        double fraction;
    };
    std::map<std::pair<std::string, CivilHour>, std::vector<Cell>> groups;
    int max_ring = 0;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        const std::string ctx = "intensity line " + std::to_string(line_no);
        if (fields.size() != 5) {
            throw ParseError(ctx + ": expected 5 fields, got " + std::to_string(fields.size()));
        }
        Cell cell;
        cell.colour = traffic_colour_from_string(fields[2]);
        cell.ring = static_cast<int>(parse_int(fields[3], ctx));
        if (cell.ring < 1) throw ParseError(ctx + ": ring indices start at 1");
        cell.fraction = parse_real(fields[4], ctx);
        if (cell.fraction < 0.0 || cell.fraction > 1.0) {
            throw ParseError(ctx + ": fraction outside [0, 1]");
        }
        max_ring = std::max(max_ring, cell.ring);
        groups[{fields[0], parse_civil_hour(fields[1])}].push_back(cell);
    }
    if (groups.empty()) throw SchemaError("intensity file holds no data rows");

    std::vector<IntensityVector> out;
    out.reserve(groups.size());
    for (const auto& [key, cells] : groups) {
        const std::string where = key.first + " at " + key.second.to_string();
        IntensityVector iv;
        iv.station_id = key.first;
        iv.timestamp = key.second;
        iv.n_rings = max_ring;
        iv.ring_fractions.assign(static_cast<size_t>(max_ring), {});
        std::vector<std::array<bool, kTrafficColourCount>> seen(
            static_cast<size_t>(max_ring), {false, false, false, false});
        for (const Cell& cell : cells) {
            if (cell.ring > max_ring) throw SchemaError("ring out of range in " + where);
            auto& was = seen[static_cast<size_t>(cell.ring - 1)]
                            [static_cast<size_t>(cell.colour)];
            if (was) {
                throw DuplicateKey("duplicate (colour, ring) cell in intensity group " + where);
            }
            was = true;
            iv.ring_fractions[static_cast<size_t>(cell.ring - 1)]
                             [static_cast<size_t>(cell.colour)] = cell.fraction;
        }
        // Duplicates were caught above, so a wrong cell count here can only
        // mean missing cells.
        if (static_cast<int>(cells.size()) != max_ring * kTrafficColourCount) {
            throw SchemaError("intensity group " + where + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(max_ring * kTrafficColourCount));
        }
        for (int c = 0; c < kTrafficColourCount; ++c) {
            double sum = 0.0;
            for (int r = 0; r < max_ring; ++r) {
                sum += iv.ring_fractions[static_cast<size_t>(r)][static_cast<size_t>(c)];
            }
            iv.totals[static_cast<size_t>(c)] = sum / static_cast<double>(max_ring);
        }
        out.push_back(std::move(iv));
    }
    return out;
}

inline std::vector<IntensityVector> read_intensity_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open intensity file '" + path + "'");
    return read_intensity_csv(in);
}

}  // namespace ringpls
