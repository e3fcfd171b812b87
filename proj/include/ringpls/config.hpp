#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ringpls/calendar.hpp"
#include "ringpls/common.hpp"
#include "ringpls/palette.hpp"
#include "ringpls/similarity.hpp"
#include "ringpls/split.hpp"
#include "ringpls/thresholds.hpp"

namespace ringpls {

struct StationGeometryConfig {
    double centre_x = 0.0;
    double centre_y = 0.0;
    double outer_radius_px = 0.0;
};

struct CvSettings {
    int n_folds = 5;
    /// Candidate counts are 1..min(max_components, p, fold_train_rows - 1).
    int max_components = 20;
    bool paper_faithful_standardisation = false;
};

struct PathsConfig {
    std::string maps_dir = "maps";
    std::string pollution_csv = "pollution.csv";
    std::string holidays_file;  // optional; empty = no holidays
    /// The three pipeline artefacts default to fixed names inside
    /// out_dir; set them explicitly to read or write elsewhere.
    std::string intensity_csv;
    std::string totals_csv;
    std::string dataset_csv;
    std::string out_dir = "out";
};

/// Everything a run needs, loaded from one JSON file. Relative paths are
/// resolved against the config file's own directory, so a fixture
/// directory can be moved wholesale.
struct RunConfig {
    std::map<std::string, StationGeometryConfig> stations;
    int ring_count = 15;
    ColourPalette palette = default_palette();
    CalendarPolicy calendar;
    SplitSpec split;
    CvSettings cv;
    std::vector<std::string> training_stations;
    std::string validation_station;
    ThresholdPolicy thresholds;
    Chi2Options chi2;
    PathsConfig paths;

    std::string out_path(const std::string& basename) const {
        return (std::filesystem::path(paths.out_dir) / basename).string();
    }
    std::string intensity_csv_path() const {
        return paths.intensity_csv.empty() ? out_path("intensity.csv") : paths.intensity_csv;
    }
    std::string totals_csv_path() const {
        return paths.totals_csv.empty() ? out_path("intensity_totals.csv") : paths.totals_csv;
    }
    std::string dataset_csv_path() const {
        return paths.dataset_csv.empty() ? out_path("dataset.csv") : paths.dataset_csv;
    }

    void validate() const {
        if (ring_count < 1) throw ConfigError("ring_count must be at least 1");
        palette.validate();
        calendar.validate();
        thresholds.validate();
        if (chi2.n_bins < 2) throw ConfigError("chi2.n_bins must be at least 2");
        std::set<std::string> train(training_stations.begin(), training_stations.end());
        if (train.size() != training_stations.size()) {
            throw ConfigError("training_stations contains duplicates");
        }
        if (!validation_station.empty() && train.count(validation_station)) {
            throw ConfigError("validation_station '" + validation_station +
                              "' must not appear in training_stations");
        }
        for (const auto& [id, geo] : stations) {
            if (id.empty()) throw ConfigError("empty station id in stations map");
            if (!(geo.outer_radius_px > 0.0)) {
                throw ConfigError("station '" + id + "' needs outer_radius_px > 0");
            }
        }
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                                const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

inline Rgb8 rgb_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError(where + " must be an [r, g, b] triple");
    }
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() > 255) {
            throw ConfigError(where + " components must be integers in [0, 255]");
        }
    }
    return Rgb8{static_cast<std::uint8_t>(j[0].get<int>()),
                static_cast<std::uint8_t>(j[1].get<int>()),
                static_cast<std::uint8_t>(j[2].get<int>())};
}

inline int weekday_from_name(const std::string& s) {
    static const std::map<std::string, int> names = {
        {"Sun", 0}, {"Mon", 1}, {"Tue", 2}, {"Wed", 3},
        {"Thu", 4}, {"Fri", 5}, {"Sat", 6}};
    const auto it = names.find(s);
    if (it == names.end()) {
        throw ConfigError("unknown weekday '" + s + "' (use Sun..Sat)");
    }
    return it->second;
}

template <typename T>
T get_number(const nlohmann::json& j, const char* key, T fallback, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw ConfigError(std::string(key) + " in " + where + " must be numeric");
    return it->get<T>();
}

}  // namespace detail

/// Parse a config JSON object. `base_dir` anchors relative paths.
inline RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    detail::reject_unknown_keys(
        j,
        {"stations", "ring_count", "palette", "calendar", "split", "cv",
         "training_stations", "validation_station", "thresholds", "chi2", "paths"},
        "config root");

    RunConfig cfg;

    if (const auto it = j.find("stations"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("stations must be an object keyed by id");
        for (const auto& [id, geo] : it->items()) {
            detail::reject_unknown_keys(geo, {"centre_x", "centre_y", "outer_radius_px"},
                                        "stations." + id);
            StationGeometryConfig g;
            g.centre_x = detail::get_number<double>(geo, "centre_x", 0.0, "stations." + id);
            g.centre_y = detail::get_number<double>(geo, "centre_y", 0.0, "stations." + id);
            g.outer_radius_px =
                detail::get_number<double>(geo, "outer_radius_px", 0.0, "stations." + id);
            cfg.stations[id] = g;
        }
    }

    cfg.ring_count = detail::get_number<int>(j, "ring_count", 15, "config root");

    if (const auto it = j.find("palette"); it != j.end()) {
        detail::reject_unknown_keys(*it, {"tolerance", "green", "orange", "red", "darkred"},
                                    "palette");
        cfg.palette.tolerance =
            detail::get_number<double>(*it, "tolerance", cfg.palette.tolerance, "palette");
        const char* names[] = {"green", "orange", "red", "darkred"};
        for (int c = 0; c < kTrafficColourCount; ++c) {
            if (const auto cit = it->find(names[c]); cit != it->end()) {
                cfg.palette.reference_rgb[static_cast<size_t>(c)] =
                    detail::rgb_from_json(*cit, std::string("palette.") + names[c]);
            }
        }
    }

    if (const auto it = j.find("calendar"); it != j.end()) {
        detail::reject_unknown_keys(*it, {"included_weekdays", "start_hour", "end_hour"},
                                    "calendar");
        if (const auto wit = it->find("included_weekdays"); wit != it->end()) {
            if (!wit->is_array()) throw ConfigError("included_weekdays must be an array");
            cfg.calendar.included_weekdays.fill(false);
            for (const auto& name : *wit) {
                if (!name.is_string()) throw ConfigError("weekday names must be strings");
                cfg.calendar.included_weekdays[static_cast<size_t>(
                    detail::weekday_from_name(name.get<std::string>()))] = true;
            }
        }
        cfg.calendar.start_hour =
            detail::get_number<int>(*it, "start_hour", cfg.calendar.start_hour, "calendar");
        cfg.calendar.end_hour =
            detail::get_number<int>(*it, "end_hour", cfg.calendar.end_hour, "calendar");
    }

    if (const auto it = j.find("split"); it != j.end()) {
        detail::reject_unknown_keys(*it, {"train_fraction", "seed", "mode"}, "split");
        cfg.split.train_fraction = detail::get_number<double>(
            *it, "train_fraction", cfg.split.train_fraction, "split");
        cfg.split.seed =
            detail::get_number<std::uint64_t>(*it, "seed", cfg.split.seed, "split");
        if (const auto mit = it->find("mode"); mit != it->end()) {
            if (!mit->is_string()) throw ConfigError("split.mode must be a string");
            cfg.split.mode = split_mode_from_string(mit->get<std::string>());
        }
    }

    if (const auto it = j.find("cv"); it != j.end()) {
        detail::reject_unknown_keys(
            *it, {"n_folds", "max_components", "paper_faithful_standardisation"}, "cv");
        cfg.cv.n_folds = detail::get_number<int>(*it, "n_folds", cfg.cv.n_folds, "cv");
        cfg.cv.max_components =
            detail::get_number<int>(*it, "max_components", cfg.cv.max_components, "cv");
        if (const auto fit = it->find("paper_faithful_standardisation"); fit != it->end()) {
            if (!fit->is_boolean()) {
                throw ConfigError("cv.paper_faithful_standardisation must be a boolean");
            }
            cfg.cv.paper_faithful_standardisation = fit->get<bool>();
        }
    }

    if (const auto it = j.find("training_stations"); it != j.end()) {
        if (!it->is_array()) throw ConfigError("training_stations must be an array");
        for (const auto& s : *it) {
            if (!s.is_string()) throw ConfigError("training_stations entries must be strings");
            cfg.training_stations.push_back(s.get<std::string>());
        }
    }
    if (const auto it = j.find("validation_station"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("validation_station must be a string");
        cfg.validation_station = it->get<std::string>();
    }

    if (const auto it = j.find("thresholds"); it != j.end()) {
        detail::reject_unknown_keys(*it, {"ozone_ppb", "pm10_ugm3", "pm25_ugm3"}, "thresholds");
        cfg.thresholds.ozone_ppb =
            detail::get_number<double>(*it, "ozone_ppb", cfg.thresholds.ozone_ppb, "thresholds");
        cfg.thresholds.pm10_ugm3 =
            detail::get_number<double>(*it, "pm10_ugm3", cfg.thresholds.pm10_ugm3, "thresholds");
        cfg.thresholds.pm25_ugm3 =
            detail::get_number<double>(*it, "pm25_ugm3", cfg.thresholds.pm25_ugm3, "thresholds");
    }

    if (const auto it = j.find("chi2"); it != j.end()) {
        detail::reject_unknown_keys(*it, {"n_bins", "standardised"}, "chi2");
        cfg.chi2.n_bins = detail::get_number<int>(*it, "n_bins", cfg.chi2.n_bins, "chi2");
        if (const auto sit = it->find("standardised"); sit != it->end()) {
            if (!sit->is_boolean()) throw ConfigError("chi2.standardised must be a boolean");
            cfg.chi2.standardised = sit->get<bool>();
        }
    }

    if (const auto it = j.find("paths"); it != j.end()) {
        detail::reject_unknown_keys(*it,
                                    {"maps_dir", "pollution_csv", "holidays_file",
                                     "intensity_csv", "totals_csv", "dataset_csv", "out_dir"},
                                    "paths");
        const auto resolve = [&](const char* key, std::string& slot) {
            const auto pit = it->find(key);
            if (pit == it->end()) {
                if (!slot.empty()) slot = (base_dir / slot).lexically_normal().string();
                return;
            }
            if (!pit->is_string()) throw ConfigError(std::string("paths.") + key + " must be a string");
            const std::string raw = pit->get<std::string>();
            if (raw.empty()) {
                slot.clear();
                return;
            }
            std::filesystem::path p(raw);
            slot = (p.is_absolute() ? p : base_dir / p).lexically_normal().string();
        };
        resolve("maps_dir", cfg.paths.maps_dir);
        resolve("pollution_csv", cfg.paths.pollution_csv);
        resolve("holidays_file", cfg.paths.holidays_file);
        resolve("intensity_csv", cfg.paths.intensity_csv);
        resolve("totals_csv", cfg.paths.totals_csv);
        resolve("dataset_csv", cfg.paths.dataset_csv);
        resolve("out_dir", cfg.paths.out_dir);
    } else {
        for (std::string* slot :
             {&cfg.paths.maps_dir, &cfg.paths.pollution_csv, &cfg.paths.out_dir}) {
            *slot = (base_dir / *slot).lexically_normal().string();
        }
    }

    if (!cfg.paths.holidays_file.empty()) {
        cfg.calendar.holidays = parse_holiday_file_path(cfg.paths.holidays_file);
    }
    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j, std::filesystem::path(path).parent_path());
}

/// Fold shuffling must not replay the train/test shuffle, so the CV seed
/// is the run seed mixed with a fixed odd constant (splitmix64's
/// increment). Documented so runs are reproducible from the config alone.
inline std::uint64_t derive_cv_seed(std::uint64_t run_seed) {
    return run_seed ^ 0x9e3779b97f4a7c15ULL;
}

}  // namespace ringpls
