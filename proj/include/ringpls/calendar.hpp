#pragma once

#include <array>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ringpls/common.hpp"
#include "ringpls/pollution.hpp"
#include "ringpls/time.hpp"

namespace ringpls {

/// Which records count as core hours: weekday whitelist, an inclusive
/// civil-hour window, and an explicit holiday list.
struct CalendarPolicy {
    // Indexed by weekday c_encoding: 0 = Sunday .. 6 = Saturday.
    std::array<bool, 7> included_weekdays = {false, true, true, true, true, true, false};
    int start_hour = 7;
    int end_hour = 22;
    std::set<CivilDate> holidays;

    void validate() const {
        if (start_hour < 0 || end_hour > 23 || start_hour > end_hour) {
            throw ConfigError("invalid hour window [" + std::to_string(start_hour) + ", " +
                              std::to_string(end_hour) + "]");
        }
        for (const auto& h : holidays) {
            if (!h.valid()) throw ConfigError("invalid holiday date " + h.to_string());
        }
    }

    bool keeps(const CivilHour& t) const {
        if (!included_weekdays[static_cast<size_t>(t.date.weekday())]) return false;
        if (t.hour < start_hour || t.hour > end_hour) return false;
        return holidays.find(t.date) == holidays.end();
    }
};

/// Keeps exactly the records with all nine pollutants present.
inline std::vector<PollutionRecord> filter_complete(const std::vector<PollutionRecord>& records) {
    std::vector<PollutionRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (r.is_complete()) out.push_back(r);
    }
    return out;
}

/// Keeps records on included weekdays, within the hour window, and not on
/// a holiday.
inline std::vector<PollutionRecord> filter_calendar(const std::vector<PollutionRecord>& records,
                                                    const CalendarPolicy& policy) {
    policy.validate();
    std::vector<PollutionRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (policy.keeps(r.timestamp)) out.push_back(r);
    }
    return out;
}

/// Completeness per station over an inclusive date period: complete sets
/// divided by 24 x number of days.
inline std::map<std::string, double> completeness_report(
    const std::vector<PollutionRecord>& records, CivilDate first_day, CivilDate last_day) {
    if (last_day < first_day) throw ConfigError("completeness period is empty");
    const double slots = 24.0 * static_cast<double>(last_day.serial() - first_day.serial() + 1);

    std::map<std::string, double> complete_counts;
    std::set<std::string> stations;
    for (const auto& r : records) {
        stations.insert(r.station_id);
        if (r.is_complete()) complete_counts[r.station_id] += 1.0;
    }
    std::map<std::string, double> out;
    for (const auto& s : stations) {
        const auto it = complete_counts.find(s);
        out[s] = (it == complete_counts.end()) ? 0.0 : it->second / slots;
    }
    return out;
}

/// Holiday files list one ISO date per line; '#' starts a comment.
inline std::set<CivilDate> parse_holiday_file(std::istream& in) {
    std::set<CivilDate> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.pop_back();
        }
        const size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        try {
            out.insert(parse_civil_date(line.substr(first)));
        } catch (const ParseError& e) {
            throw ParseError("holiday file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

inline std::set<CivilDate> parse_holiday_file_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open holiday file '" + path + "'");
    return parse_holiday_file(in);
}

}  // namespace ringpls
