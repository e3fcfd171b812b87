// ringpls command-line tool: traffic-map ingestion, dataset assembly,
// PLS model training/validation, station similarity, and reporting, plus
// a synthetic-fixture generator so the whole pipeline runs offline.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <ringpls/ringpls.hpp>

namespace fs = std::filesystem;
namespace rp = ringpls;
using nlohmann::json;

namespace {

void log_line(const std::string& msg) { std::cerr << "ringpls: " << msg << "\n"; }

void write_text(const std::string& path, const std::string& content) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw rp::InputError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw rp::Error("failed writing '" + path + "'");
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rp::InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string file_digest(const std::string& path) { return rp::fnv1a64_hex(read_bytes(path)); }

// ---------------------------------------------------------------------------
// Shared flags: every pipeline command takes --config plus optional overrides.

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> stations;
    std::optional<std::string> validation_station;
    std::optional<std::string> split_mode;
    bool paper_faithful = false;
    bool chi2_standardised = false;
    std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "run configuration JSON")->required();
    cmd->add_option("--seed", o.seed, "override split.seed");
    cmd->add_option("--stations", o.stations,
                    "override training_stations (comma or space separated)")
        ->delimiter(',');
    cmd->add_option("--validation-station", o.validation_station,
                    "override validation_station");
    cmd->add_option("--split", o.split_mode, "override split mode: random|chronological");
    cmd->add_flag("--paper-faithful-standardisation", o.paper_faithful,
                  "fit z-scoring once before cross-validation instead of per fold");
    cmd->add_flag("--chi2-standardised", o.chi2_standardised,
                  "z-score each station sample before chi-square binning");
    cmd->add_option("--out", o.out_dir, "override output directory");
}

rp::RunConfig load_with_overrides(const CommonOpts& o) {
    rp::RunConfig cfg = rp::load_config(o.config_path);
    if (o.seed) cfg.split.seed = *o.seed;
    if (!o.stations.empty()) cfg.training_stations = o.stations;
    if (o.validation_station) cfg.validation_station = *o.validation_station;
    if (o.split_mode) cfg.split.mode = rp::split_mode_from_string(*o.split_mode);
    if (o.paper_faithful) cfg.cv.paper_faithful_standardisation = true;
    if (o.chi2_standardised) cfg.chi2.standardised = true;
    if (o.out_dir) cfg.paths.out_dir = *o.out_dir;
    cfg.validate();
    return cfg;
}

// Recompute the four aggregate intensities from a dataset row's predictors.
std::array<double, 4> totals_from_row(const rp::AlignedRow& row) {
    std::array<double, 4> t{};
    for (int c = 0; c < rp::kTrafficColourCount; ++c) {
        double sum = 0.0;
        for (int i = 0; i < rp::kModelRingCount; ++i) {
            sum += row.x[static_cast<size_t>(c * rp::kModelRingCount + i)];
        }
        t[static_cast<size_t>(c)] = sum / rp::kModelRingCount;
    }
    return t;
}

std::vector<std::string> totals_names() {
    return {"I_green", "I_orange", "I_red", "I_darkred"};
}

// ---------------------------------------------------------------------------
// synth: write a complete self-contained fixture directory.

struct SynthOpts {
    std::string out_dir;
    std::uint64_t seed = 7;
    int n_stations = 3;
    int n_days = 5;
    int frame = 301;
    int rings = rp::kModelRingCount;
};

void cmd_synth(const SynthOpts& o) {
    if (o.n_stations < 2) throw rp::ConfigError("synth needs at least 2 stations");
    if (o.n_days < 1) throw rp::ConfigError("synth needs at least 1 day");
    if (o.frame < 61) throw rp::ConfigError("synth frame must be at least 61 pixels");

    const fs::path root(o.out_dir);
    fs::create_directories(root / "maps");
    std::mt19937_64 rng(o.seed);

    const double centre = (o.frame - 1) / 2.0;
    const double radius = centre - 4.0;
    const rp::RingGeometry geo =
        rp::build_rings(centre, centre, radius, o.rings, o.frame, o.frame);
    const rp::ColourPalette palette = rp::default_palette();

    // Days start on a Monday and include the following weekend; the second
    // Wednesday (or the first day, for short runs) is declared a holiday.
    const rp::CivilDate start{2024, 3, 4};  // a Monday
    const int total_days = o.n_days + 2;    // spill into a weekend
    const rp::CivilDate holiday = total_days > 9 ? rp::CivilDate{2024, 3, 13} : start;

    // Shared linear pollutant map: coefficients are colour-weighted so
    // green/orange predictors carry most of the signal.
    const double colour_weight[4] = {1.0, 0.8, 0.3, 0.15};
    Eigen::MatrixXd B(rp::kPredictorCount, rp::kPollutantCount);
    for (int j = 0; j < rp::kPredictorCount; ++j) {
        const int colour = j / rp::kModelRingCount;
        for (int k = 0; k < rp::kPollutantCount; ++k) {
            B(j, k) = std::abs(rp::detail::gauss(rng)) * colour_weight[colour];
        }
    }
    const double base[rp::kPollutantCount] = {45.0, 20.0, 18.0, 4.0, 30.0,
                                              0.4,  18.0, 9.0,  28.0};

    std::vector<rp::PollutionRecord> pollution;
    std::vector<std::string> station_ids;
    double mean_x_sum = 0.0;
    long mean_x_count = 0;

    struct Snapshot {
        std::string station;
        rp::CivilHour ts;
        std::array<double, rp::kPredictorCount> x;
    };
    std::vector<Snapshot> snapshots;

    for (int s = 0; s < o.n_stations; ++s) {
        const std::string sid = rp::synth_station_id(s);
        station_ids.push_back(sid);
        // Station activity drifts upward with the index, so ST02 stays the
        // closest match to ST01 and similarity decays monotonically.
        const double station_level = 0.55 + 0.12 * s;

        for (int d = 0; d < total_days; ++d) {
            const rp::CivilDate day = rp::CivilDate::from_serial(start.serial() + d);
            for (int h = 0; h < 24; ++h) {
                const rp::CivilHour ts{day, h};
                const double activity =
                    std::min(0.9, station_level * rp::rush_hour_factor(h) +
                                      0.05 * rp::detail::uniform01(rng));

                std::vector<std::array<double, 4>> fractions(
                    static_cast<size_t>(o.rings));
                for (int i = 0; i < o.rings; ++i) {
                    const double ring_pos = static_cast<double>(i + 1) / o.rings;
                    const double density = 0.55 - 0.25 * ring_pos;
                    const double c_level =
                        std::min(0.9, activity * (1.2 - 0.6 * ring_pos) +
                                          0.03 * rp::detail::uniform01(rng));
                    auto& f = fractions[static_cast<size_t>(i)];
                    f[3] = density * 0.5 * c_level * c_level;           // darkred
                    f[2] = density * 0.3 * c_level;                     // red
                    f[1] = density * (0.25 * c_level + 0.05);           // orange
                    f[0] = density - f[1] - f[2] - f[3];                // green
                }

                const auto counts = rp::counts_from_fractions(geo, fractions);
                const rp::ImageRgb img = rp::paint_counts(geo, counts, palette);
                const std::string fname = sid + "_" + ts.to_string().substr(0, 13) + ".png";
                rp::encode_png((root / "maps" / fname).string(), img);

                // The dataset's predictors are what counting the image
                // yields; pollutant truth is built from those fractions.
                rp::SnapshotCounts sc;
                sc.station_id = sid;
                sc.timestamp = ts;
                sc.n_rings = o.rings;
                sc.counts = counts;
                sc.ring_pixel_counts = geo.ring_pixel_counts;
                sc.non_road.assign(static_cast<size_t>(o.rings), 0);
                const rp::IntensityVector iv = rp::to_intensity(sc);
                Snapshot snap;
                snap.station = sid;
                snap.ts = ts;
                snap.x = rp::flatten_predictors(iv);
                for (double v : snap.x) {
                    mean_x_sum += v;
                    ++mean_x_count;
                }
                snapshots.push_back(std::move(snap));
            }
        }
    }

    // Rescale coefficient columns so traffic contributes on the order of
    // each pollutant's baseline, then emit pollutant rows (with a few
    // nulls so the completeness filter has work to do).
    const double mean_x = mean_x_sum / static_cast<double>(mean_x_count);
    for (int k = 0; k < rp::kPollutantCount; ++k) {
        const double raw = B.col(k).sum() * mean_x;
        if (raw > 0.0) B.col(k) *= base[k] / raw;
    }
    for (const auto& snap : snapshots) {
        rp::PollutionRecord rec;
        rec.station_id = snap.station;
        rec.timestamp = snap.ts;
        for (int k = 0; k < rp::kPollutantCount; ++k) {
            double v = base[k];
            for (int j = 0; j < rp::kPredictorCount; ++j) {
                v += B(j, k) * snap.x[static_cast<size_t>(j)];
            }
            v += 0.02 * base[k] * rp::detail::gauss(rng);
            rec.values[static_cast<size_t>(k)] = std::max(0.0, v);
            rec.null_mask[static_cast<size_t>(k)] = rp::detail::uniform01(rng) < 0.04;
        }
        pollution.push_back(std::move(rec));
    }

    std::ostringstream pcsv;
    rp::write_pollution_csv(pcsv, pollution);
    write_text((root / "pollution.csv").string(), pcsv.str());
    write_text((root / "holidays.txt").string(),
               "# fixture holiday\n" + holiday.to_string() + "\n");

    json cfg;
    for (const auto& sid : station_ids) {
        cfg["stations"][sid] = {{"centre_x", centre},
                                {"centre_y", centre},
                                {"outer_radius_px", radius}};
    }
    cfg["ring_count"] = o.rings;
    cfg["palette"] = {{"tolerance", palette.tolerance},
                      {"green", {99, 214, 104}},
                      {"orange", {255, 151, 77}},
                      {"red", {242, 60, 50}},
                      {"darkred", {129, 31, 31}}};
    cfg["calendar"] = {{"included_weekdays", {"Mon", "Tue", "Wed", "Thu", "Fri"}},
                       {"start_hour", 7},
                       {"end_hour", 22}};
    cfg["split"] = {{"train_fraction", 0.8}, {"seed", 17}, {"mode", "random"}};
    cfg["cv"] = {{"n_folds", 5},
                 {"max_components", 10},
                 {"paper_faithful_standardisation", false}};
    std::vector<std::string> training(station_ids.begin() + 1, station_ids.end());
    cfg["training_stations"] = training;
    cfg["validation_station"] = station_ids.front();
    cfg["chi2"] = {{"n_bins", 20}, {"standardised", false}};
    cfg["paths"] = {{"maps_dir", "maps"},
                    {"pollution_csv", "pollution.csv"},
                    {"holidays_file", "holidays.txt"},
                    {"out_dir", "out"}};
    write_text((root / "config.json").string(), cfg.dump(2) + "\n");

    log_line("synth: wrote " + std::to_string(snapshots.size()) + " map images, " +
             std::to_string(pollution.size()) + " pollutant rows, config.json");
}

// ---------------------------------------------------------------------------
// ingest-maps

void cmd_ingest_maps(const rp::RunConfig& cfg) {
    if (cfg.stations.empty()) {
        throw rp::ConfigError("config defines no stations; ingest-maps has nothing to do");
    }
    if (!fs::is_directory(cfg.paths.maps_dir)) {
        throw rp::NoInputs("maps directory '" + cfg.paths.maps_dir + "' does not exist");
    }

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(cfg.paths.maps_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw rp::NoInputs("no .png/.jpg files in '" + cfg.paths.maps_dir + "'");
    }

    // Geometry depends on the frame size, so cache per (station, w, h).
    std::map<std::tuple<std::string, int, int>, rp::RingGeometry> geometries;
    std::vector<rp::IntensityVector> rows;
    long failed = 0;
    for (const std::string& path : files) {
        try {
            const std::string stem = fs::path(path).stem().string();
            const size_t sep = stem.rfind('_');
            if (sep == std::string::npos) {
                throw rp::ParseError("filename '" + stem +
                                     "' is not <station>_<YYYY-MM-DDTHH>");
            }
            const std::string sid = stem.substr(0, sep);
            const rp::CivilHour ts = rp::parse_civil_hour(stem.substr(sep + 1));
            const auto git = cfg.stations.find(sid);
            if (git == cfg.stations.end()) {
                throw rp::ConfigError("station '" + sid + "' not present in config");
            }
            const rp::ImageRgb img = rp::decode_image(path);
            const auto key = std::make_tuple(sid, img.width(), img.height());
            auto geo_it = geometries.find(key);
            if (geo_it == geometries.end()) {
                geo_it = geometries
                             .emplace(key, rp::build_rings(git->second.centre_x,
                                                           git->second.centre_y,
                                                           git->second.outer_radius_px,
                                                           cfg.ring_count, img.width(),
                                                           img.height()))
                             .first;
            }
            rows.push_back(rp::to_intensity(
                rp::count_snapshot(img, geo_it->second, cfg.palette, sid, ts)));
        } catch (const rp::Error& e) {
            ++failed;
            log_line("ingest-maps: skipping '" + path + "': " + e.what());
        }
    }
    if (rows.empty()) {
        throw rp::InputError("all " + std::to_string(failed) + " map files failed to ingest");
    }

    std::sort(rows.begin(), rows.end(),
              [](const rp::IntensityVector& a, const rp::IntensityVector& b) {
                  if (a.station_id != b.station_id) return a.station_id < b.station_id;
                  return a.timestamp < b.timestamp;
              });

    std::ostringstream intensity, totals;
    rp::write_intensity_csv(intensity, rows);
    rp::write_totals_csv(totals, rows);
    write_text(cfg.intensity_csv_path(), intensity.str());
    write_text(cfg.totals_csv_path(), totals.str());
    log_line("ingest-maps: " + std::to_string(rows.size()) + " snapshots ok, " +
             std::to_string(failed) + " failed");
}

// ---------------------------------------------------------------------------
// ingest-pollution

void cmd_ingest_pollution(const rp::RunConfig& cfg) {
    const auto records = rp::parse_pollution_csv_file(cfg.paths.pollution_csv);
    if (records.empty()) throw rp::NoInputs("pollution file holds no data rows");

    std::ostringstream clean;
    rp::write_pollution_csv(clean, records);
    write_text(cfg.out_path("pollution_clean.csv"), clean.str());

    rp::CivilDate first = records.front().timestamp.date;
    rp::CivilDate last = first;
    for (const auto& r : records) {
        first = std::min(first, r.timestamp.date);
        last = std::max(last, r.timestamp.date);
    }
    const auto report = rp::completeness_report(records, first, last);
    std::ostringstream comp;
    comp << "station_id,complete_fraction\n";
    for (const auto& [sid, frac] : report) {
        comp << sid << ',' << rp::fmt_real9(frac) << "\n";
    }
    write_text(cfg.out_path("completeness.csv"), comp.str());
    log_line("ingest-pollution: " + std::to_string(records.size()) + " rows over " +
             std::to_string(last.serial() - first.serial() + 1) + " days");
}

// ---------------------------------------------------------------------------
// build-dataset

void cmd_build_dataset(const rp::RunConfig& cfg) {
    const std::string intensity_path = cfg.intensity_csv_path();
    const auto intensities = rp::read_intensity_csv_file(intensity_path);

    const std::string clean_path = cfg.out_path("pollution_clean.csv");
    const std::string pollution_path =
        fs::exists(clean_path) ? clean_path : cfg.paths.pollution_csv;
    const auto records = rp::parse_pollution_csv_file(pollution_path);

    const auto complete = rp::filter_complete(records);
    const auto kept = rp::filter_calendar(complete, cfg.calendar);

    std::set<std::string> stations;
    if (cfg.stations.empty()) {
        for (const auto& iv : intensities) stations.insert(iv.station_id);
    } else {
        for (const auto& [sid, geo] : cfg.stations) stations.insert(sid);
    }

    rp::AlignedDataset ds = rp::align(intensities, kept, stations);
    ds.provenance.stage_counts["pollution_rows"] = static_cast<long>(records.size());
    ds.provenance.stage_counts["pollution_complete"] = static_cast<long>(complete.size());
    ds.provenance.stage_counts["pollution_calendar_kept"] = static_cast<long>(kept.size());
    ds.provenance.stage_counts["intensity_rows"] = static_cast<long>(intensities.size());
    ds.provenance.source_digests["intensity_csv"] = file_digest(intensity_path);
    ds.provenance.source_digests["pollution_csv"] = file_digest(pollution_path);
    ds.provenance.settings["calendar_start_hour"] = std::to_string(cfg.calendar.start_hour);
    ds.provenance.settings["calendar_end_hour"] = std::to_string(cfg.calendar.end_hour);
    ds.provenance.settings["holidays"] = std::to_string(cfg.calendar.holidays.size());

    std::ostringstream dcsv;
    rp::write_dataset_csv(dcsv, ds);
    write_text(cfg.dataset_csv_path(), dcsv.str());
    write_text(cfg.out_path("dataset_provenance.json"),
               ds.provenance.to_json().dump(2) + "\n");
    log_line("build-dataset: " + std::to_string(ds.rows.size()) + " aligned rows from " +
             std::to_string(intensities.size()) + " snapshots and " +
             std::to_string(records.size()) + " pollutant rows");
}

// ---------------------------------------------------------------------------
// train

rp::AlignedDataset load_dataset(const rp::RunConfig& cfg) {
    return rp::read_dataset_csv_file(cfg.dataset_csv_path());
}

rp::AlignedDataset training_rows(const rp::RunConfig& cfg, const rp::AlignedDataset& ds) {
    if (cfg.training_stations.empty()) {
        throw rp::ConfigError("training_stations is empty");
    }
    const std::set<std::string> keep(cfg.training_stations.begin(),
                                     cfg.training_stations.end());
    rp::AlignedDataset out = ds.restricted_to(keep);
    if (out.rows.empty()) {
        throw rp::EmptyJoin("dataset holds no rows for the training stations");
    }
    return out;
}

void cmd_train(const rp::RunConfig& cfg) {
    const rp::AlignedDataset ds = load_dataset(cfg);
    const rp::AlignedDataset train_ds = training_rows(cfg, ds);

    const rp::SplitIndices idx = rp::split_dataset(train_ds, cfg.split);
    const rp::AlignedDataset train_block = rp::take_rows(train_ds, idx.train);
    const rp::AlignedDataset test_block = rp::take_rows(train_ds, idx.test);

    const Eigen::MatrixXd x_train = train_block.x_matrix();
    const Eigen::MatrixXd y_train = train_block.y_matrix();

    rp::CvSpec cv;
    cv.n_folds = cfg.cv.n_folds;
    cv.seed = rp::derive_cv_seed(cfg.split.seed);
    cv.paper_faithful_standardisation = cfg.cv.paper_faithful_standardisation;
    const long fold_train_rows =
        static_cast<long>(x_train.rows()) -
        (static_cast<long>(x_train.rows()) + cv.n_folds - 1) / cv.n_folds;
    const int max_cand = static_cast<int>(std::min<long>(
        {cfg.cv.max_components, x_train.cols(), fold_train_rows - 1}));
    if (max_cand < 1) throw rp::FoldTooSmall("training block too small for any component");
    for (int k = 1; k <= max_cand; ++k) cv.candidates.push_back(k);

    const rp::TrainResult result = rp::train_final(x_train, y_train, cv);
    const rp::EvalReport test_eval =
        rp::evaluate(result.model, test_block.x_matrix(), test_block.y_matrix());

    rp::save_model(cfg.out_path("model.json"), result.model);

    std::ostringstream cv_csv;
    cv_csv << "n_components,mean_rmse_std,truncated_folds,selected\n";
    for (size_t c = 0; c < result.cv.candidates.size(); ++c) {
        cv_csv << result.cv.candidates[c] << ','
               << rp::fmt_real9(result.cv.mean_rmse(static_cast<Eigen::Index>(c))) << ','
               << result.cv.truncated_folds[c] << ','
               << (result.cv.candidates[c] == result.cv.selected ? 1 : 0) << "\n";
    }
    write_text(cfg.out_path("cv_report.csv"), cv_csv.str());

    std::ostringstream folds_csv;
    folds_csv << "n_components,fold,rmse_std\n";
    for (size_t c = 0; c < result.cv.candidates.size(); ++c) {
        for (int f = 0; f < cfg.cv.n_folds; ++f) {
            folds_csv << result.cv.candidates[c] << ',' << (f + 1) << ','
                      << rp::fmt_real9(result.cv.fold_rmse(f, static_cast<Eigen::Index>(c)))
                      << "\n";
        }
    }
    write_text(cfg.out_path("cv_folds.csv"), folds_csv.str());

    json summary;
    summary["seed"] = cfg.split.seed;
    summary["cv_seed"] = rp::derive_cv_seed(cfg.split.seed);
    summary["split_mode"] = rp::to_string(cfg.split.mode);
    summary["training_stations"] = cfg.training_stations;
    summary["n_rows_train"] = static_cast<long>(train_block.rows.size());
    summary["n_rows_test"] = static_cast<long>(test_block.rows.size());
    summary["selected_components"] = result.cv.selected;
    summary["paper_faithful_standardisation"] = cfg.cv.paper_faithful_standardisation;
    summary["test"]["rmse_standardised"] = test_eval.rmse_standardised;
    summary["test"]["train_rmse_standardised"] = test_eval.train_rmse_standardised;
    summary["test"]["overtraining_ratio"] = test_eval.overtraining_ratio;
    for (int k = 0; k < rp::kPollutantCount; ++k) {
        summary["test"]["rmse"][rp::kPollutantNames[k]] = test_eval.rmse_per_response(k);
    }
    write_text(cfg.out_path("train_summary.json"), summary.dump(2) + "\n");

    log_line("train: selected " + std::to_string(result.cv.selected) +
             " components; test overtraining ratio " +
             rp::fmt_real9(test_eval.overtraining_ratio));
}

// ---------------------------------------------------------------------------
// validate

void cmd_validate(const rp::RunConfig& cfg) {
    if (cfg.validation_station.empty()) {
        throw rp::ConfigError("validation_station is not set");
    }
    const rp::PlsrModel model = rp::load_model(cfg.out_path("model.json"));
    const rp::AlignedDataset ds = load_dataset(cfg);

    rp::AlignedDataset val = ds.restricted_to({cfg.validation_station});
    if (val.rows.empty()) {
        throw rp::EmptyValidation("dataset holds no rows for validation station '" +
                                  cfg.validation_station + "'");
    }
    const rp::AlignedDataset train_ds = training_rows(cfg, ds);

    const Eigen::MatrixXd x_val = val.x_matrix();
    const Eigen::MatrixXd y_val = val.y_matrix();

    const rp::RangeComparison ranges =
        rp::compare_ranges(train_ds.x_matrix(), x_val, rp::predictor_names());
    const rp::EvalReport eval = rp::evaluate(model, x_val, y_val);
    const Eigen::MatrixXd pred = rp::plsr_predict(model, x_val);
    const auto residuals = rp::residual_diagnostics(y_val, pred, [] {
        std::vector<std::string> n;
        for (const char* p : rp::kPollutantNames) n.emplace_back(p);
        return n;
    }());

    std::ostringstream pred_csv;
    pred_csv << "station_id,timestamp,pollutant,truth,predicted\n";
    for (size_t i = 0; i < val.rows.size(); ++i) {
        for (int k = 0; k < rp::kPollutantCount; ++k) {
            pred_csv << val.rows[i].station_id << ',' << val.rows[i].timestamp.to_string()
                     << ',' << rp::kPollutantNames[k] << ','
                     << rp::fmt_real9(y_val(static_cast<Eigen::Index>(i), k)) << ','
                     << rp::fmt_real9(pred(static_cast<Eigen::Index>(i), k)) << "\n";
        }
    }
    write_text(cfg.out_path("predictions.csv"), pred_csv.str());

    std::ostringstream ranges_csv;
    ranges_csv << "variable,train_min,train_max,validation_min,validation_max,"
                  "overlap_fraction,flagged\n";
    for (size_t j = 0; j < ranges.names.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const bool flagged = ranges.overlap_fraction(jj) < ranges.threshold;
        ranges_csv << ranges.names[j] << ',' << rp::fmt_real9(ranges.min_train(jj)) << ','
                   << rp::fmt_real9(ranges.max_train(jj)) << ','
                   << rp::fmt_real9(ranges.min_validation(jj)) << ','
                   << rp::fmt_real9(ranges.max_validation(jj)) << ','
                   << rp::fmt_real9(ranges.overlap_fraction(jj)) << ',' << (flagged ? 1 : 0)
                   << "\n";
    }
    write_text(cfg.out_path("ranges.csv"), ranges_csv.str());

    std::ostringstream res_csv;
    res_csv << "pollutant,rmse,bias,bias_in_truth_sd,bias_band,residual_std,skewness,"
               "excess_kurtosis,jarque_bera,normal_at_5pct\n";
    for (int k = 0; k < rp::kPollutantCount; ++k) {
        const auto& d = residuals[static_cast<size_t>(k)];
        res_csv << d.name << ',' << rp::fmt_real9(eval.rmse_per_response(k)) << ','
                << rp::fmt_real9(d.bias) << ',' << rp::fmt_real9(d.bias_in_truth_sd) << ','
                << rp::to_string(d.bias_band) << ',' << rp::fmt_real9(d.residual_std) << ','
                << rp::fmt_real9(d.skewness) << ',' << rp::fmt_real9(d.excess_kurtosis)
                << ',' << rp::fmt_real9(d.jarque_bera) << ',' << (d.normal_at_5pct ? 1 : 0)
                << "\n";
    }
    write_text(cfg.out_path("residuals.csv"), res_csv.str());

    json metrics;
    metrics["validation_station"] = cfg.validation_station;
    metrics["n_rows"] = eval.n_rows;
    metrics["rmse_standardised"] = eval.rmse_standardised;
    metrics["train_rmse_standardised"] = eval.train_rmse_standardised;
    metrics["overtraining_ratio"] = eval.overtraining_ratio;
    for (int k = 0; k < rp::kPollutantCount; ++k) {
        metrics["rmse"][rp::kPollutantNames[k]] = eval.rmse_per_response(k);
    }
    metrics["range_flagged"] = ranges.flagged;
    write_text(cfg.out_path("validation_metrics.json"), metrics.dump(2) + "\n");

    log_line("validate: " + std::to_string(eval.n_rows) + " rows at '" +
             cfg.validation_station + "', pooled standardised RMSE " +
             rp::fmt_real9(eval.rmse_standardised) + ", " +
             std::to_string(ranges.flagged.size()) + " range-flagged variables");
}

// ---------------------------------------------------------------------------
// similarity

void cmd_similarity(const rp::RunConfig& cfg) {
    if (cfg.validation_station.empty()) {
        throw rp::ConfigError("validation_station is not set");
    }
    const rp::PlsrModel model = rp::load_model(cfg.out_path("model.json"));
    const rp::AlignedDataset ds = load_dataset(cfg);

    rp::AlignedDataset ref = ds.restricted_to({cfg.validation_station});
    if (ref.rows.empty()) {
        throw rp::EmptyValidation("dataset holds no rows for validation station '" +
                                  cfg.validation_station + "'");
    }

    const Eigen::VectorXd vip = rp::vip_scores(model);
    const auto names = rp::predictor_names();

    std::vector<std::pair<std::string, Eigen::MatrixXd>> candidates;
    for (const std::string& sid : ds.stations()) {
        if (sid == cfg.validation_station) continue;
        candidates.emplace_back(sid, ds.restricted_to({sid}).x_matrix());
    }
    if (candidates.empty()) {
        throw rp::InputError("dataset holds no stations besides the validation station");
    }

    const Eigen::MatrixXd ref_x = ref.x_matrix();
    const auto ranking = rp::rank_similarity(ref_x, candidates, vip, names, cfg.chi2);

    std::ostringstream sim_csv;
    sim_csv << "rank,station_id,score\n";
    for (size_t i = 0; i < ranking.size(); ++i) {
        sim_csv << (i + 1) << ',' << ranking[i].station_id << ','
                << rp::fmt_real9(ranking[i].score) << "\n";
    }
    write_text(cfg.out_path("similarity.csv"), sim_csv.str());

    std::ostringstream detail_csv;
    detail_csv << "station_id,variable,chi2,weight,weighted,degenerate\n";
    for (const auto& [sid, sample] : candidates) {
        const rp::SimilarityScore s =
            rp::weighted_chi2(ref_x, sample, vip, names, cfg.chi2);
        for (const auto& v : s.per_variable) {
            detail_csv << sid << ',' << v.name << ',' << rp::fmt_real9(v.chi2) << ','
                       << rp::fmt_real9(v.weight) << ',' << rp::fmt_real9(v.weighted) << ','
                       << (v.degenerate ? 1 : 0) << "\n";
        }
    }
    write_text(cfg.out_path("similarity_breakdown.csv"), detail_csv.str());

    log_line("similarity: most similar to '" + cfg.validation_station + "' is '" +
             ranking.front().station_id + "' (score " +
             rp::fmt_real9(ranking.front().score) + ")");
}

// ---------------------------------------------------------------------------
// report

void write_correlation_csv(const std::string& path, const Eigen::MatrixXd& r,
                           const std::vector<std::string>& names) {
    std::ostringstream csv;
    csv << "variable";
    for (const auto& n : names) csv << ',' << n;
    csv << "\n";
    for (size_t i = 0; i < names.size(); ++i) {
        csv << names[i];
        for (size_t j = 0; j < names.size(); ++j) {
            csv << ','
                << rp::fmt_real9(r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        csv << "\n";
    }
    write_text(path, csv.str());
}

void write_correlation_long(const std::string& path, const Eigen::MatrixXd& r,
                            const std::vector<std::string>& names) {
    std::ostringstream csv;
    csv << "variable,category,value\n";
    for (size_t i = 0; i < names.size(); ++i) {
        for (size_t j = 0; j < names.size(); ++j) {
            csv << names[i] << ',' << names[j] << ','
                << rp::fmt_real9(r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
                << "\n";
        }
    }
    write_text(path, csv.str());
}

void cmd_report(const rp::RunConfig& cfg) {
    const rp::AlignedDataset ds = load_dataset(cfg);

    // Hourly profiles of the four aggregate intensities and each pollutant.
    std::map<std::string, std::map<std::string, rp::HourlyProfile>> profiles;
    for (const auto& row : ds.rows) {
        auto& by_var = profiles[row.station_id];
        const auto totals = totals_from_row(row);
        const auto tnames = totals_names();
        for (int c = 0; c < 4; ++c) {
            by_var[tnames[static_cast<size_t>(c)]].add(row.timestamp,
                                                       totals[static_cast<size_t>(c)]);
        }
        for (int k = 0; k < rp::kPollutantCount; ++k) {
            by_var[rp::kPollutantNames[k]].add(row.timestamp,
                                               row.y[static_cast<size_t>(k)]);
        }
    }
    std::ostringstream prof_csv;
    prof_csv << "station_id,variable,hour,mean,count\n";
    for (const auto& [sid, by_var] : profiles) {
        for (const auto& [var, prof] : by_var) {
            for (int h = 0; h < 24; ++h) {
                if (!prof.has(h)) continue;  // absent hours stay absent
                prof_csv << sid << ',' << var << ',' << h << ','
                         << rp::fmt_real9(prof.mean(h)) << ',' << prof.count(h) << "\n";
            }
        }
    }
    write_text(cfg.out_path("profiles.csv"), prof_csv.str());

    // Correlations on aggregate intensities + pollutants, and on the full
    // 69-column table (both conventions, since either may be wanted).
    const Eigen::MatrixXd x = ds.x_matrix();
    const Eigen::MatrixXd y = ds.y_matrix();
    std::vector<std::string> small_names = totals_names();
    for (const char* p : rp::kPollutantNames) small_names.emplace_back(p);
    Eigen::MatrixXd small(x.rows(), 4 + rp::kPollutantCount);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto totals = totals_from_row(ds.rows[static_cast<size_t>(i)]);
        for (int c = 0; c < 4; ++c) small(i, c) = totals[static_cast<size_t>(c)];
    }
    small.rightCols(rp::kPollutantCount) = y;

    std::vector<std::string> full_names = rp::predictor_names();
    for (const char* p : rp::kPollutantNames) full_names.emplace_back(p);
    Eigen::MatrixXd full(x.rows(), x.cols() + y.cols());
    full << x, y;

    const Eigen::MatrixXd r_small = rp::pearson_matrix(small);
    const Eigen::MatrixXd r_full = rp::pearson_matrix(full);
    write_correlation_csv(cfg.out_path("correlations_totals.csv"), r_small, small_names);
    write_correlation_long(cfg.out_path("correlations_totals_long.csv"), r_small,
                           small_names);
    write_correlation_csv(cfg.out_path("correlations_full.csv"), r_full, full_names);
    write_correlation_long(cfg.out_path("correlations_full_long.csv"), r_full, full_names);

    // Exceedance counts per station (strict >; dataset rows are complete).
    std::ostringstream exc_csv;
    exc_csv << "station_id,pollutant,exceedances,rows\n";
    std::map<std::string, std::array<long, 3>> counts;
    std::map<std::string, long> rows_per_station;
    const int i_pm10 = rp::pollutant_index("PM10");
    const int i_pm25 = rp::pollutant_index("PM2.5");
    const int i_o3 = rp::pollutant_index("O3");
    for (const auto& row : ds.rows) {
        const auto f = rp::exceedance_flags(row.y[static_cast<size_t>(i_pm10)],
                                            row.y[static_cast<size_t>(i_pm25)],
                                            row.y[static_cast<size_t>(i_o3)],
                                            cfg.thresholds);
        auto& c = counts[row.station_id];
        c[0] += f.pm10 ? 1 : 0;
        c[1] += f.pm25 ? 1 : 0;
        c[2] += f.ozone ? 1 : 0;
        ++rows_per_station[row.station_id];
    }
    for (const auto& [sid, c] : counts) {
        exc_csv << sid << ",PM10," << c[0] << ',' << rows_per_station[sid] << "\n";
        exc_csv << sid << ",PM2.5," << c[1] << ',' << rows_per_station[sid] << "\n";
        exc_csv << sid << ",O3," << c[2] << ',' << rows_per_station[sid] << "\n";
    }
    write_text(cfg.out_path("exceedances.csv"), exc_csv.str());

    // VIP and component tables when a trained model is present.
    const std::string model_path = cfg.out_path("model.json");
    if (fs::exists(model_path)) {
        const rp::PlsrModel model = rp::load_model(model_path);
        const auto ranking = rp::vip_ranking(model, rp::predictor_names());
        std::ostringstream vip_csv;
        vip_csv << "predictor,vip,important\n";
        for (const auto& e : ranking) {
            vip_csv << e.name << ',' << rp::fmt_real9(e.score) << ','
                    << (e.score > 1.0 ? 1 : 0) << "\n";
        }
        write_text(cfg.out_path("vip.csv"), vip_csv.str());

        std::ostringstream vip_long;
        vip_long << "variable,category,value\n";
        for (const auto& e : ranking) {
            vip_long << e.name << ",vip," << rp::fmt_real9(e.score) << "\n";
        }
        write_text(cfg.out_path("vip_long.csv"), vip_long.str());

        std::ostringstream comp_csv;
        comp_csv << "component,explained_y_share,predictor,weight\n";
        for (int f = 1; f <= model.n_components; ++f) {
            const auto rep = rp::component_weight_report(model, rp::predictor_names(), f);
            for (const auto& w : rep.weights) {
                comp_csv << f << ',' << rp::fmt_real9(rep.explained_y_share) << ','
                         << w.name << ',' << rp::fmt_real9(w.weight) << "\n";
            }
        }
        write_text(cfg.out_path("components.csv"), comp_csv.str());
    } else {
        log_line("report: no model.json in output directory; skipping VIP/component tables");
    }

    log_line("report: profiles, correlations and exceedance tables written to '" +
             cfg.paths.out_dir + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Traffic-map ring intensities and PLS pollutant modelling"};
    app.require_subcommand(1);

    CommonOpts ingest_maps_opts, ingest_poll_opts, build_opts, train_opts, validate_opts,
        similarity_opts, report_opts;
    SynthOpts synth_opts;

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic fixture directory");
    synth->add_option("--out", synth_opts.out_dir, "fixture directory")->required();
    synth->add_option("--seed", synth_opts.seed, "generator seed");
    synth->add_option("--stations", synth_opts.n_stations, "number of stations");
    synth->add_option("--days", synth_opts.n_days, "number of working days");
    synth->add_option("--frame", synth_opts.frame, "square image size in pixels");

    CLI::App* ingest_maps =
        app.add_subcommand("ingest-maps", "count traffic pixels in map snapshots");
    add_common(ingest_maps, ingest_maps_opts);
    CLI::App* ingest_poll =
        app.add_subcommand("ingest-pollution", "normalise pollutant measurements");
    add_common(ingest_poll, ingest_poll_opts);
    CLI::App* build = app.add_subcommand("build-dataset", "align traffic with pollutants");
    add_common(build, build_opts);
    CLI::App* train = app.add_subcommand("train", "select components and fit the model");
    add_common(train, train_opts);
    CLI::App* validate = app.add_subcommand("validate", "evaluate on the validation station");
    add_common(validate, validate_opts);
    CLI::App* similarity = app.add_subcommand("similarity", "rank stations by similarity");
    add_common(similarity, similarity_opts);
    CLI::App* report = app.add_subcommand("report", "profiles, correlations, VIP tables");
    add_common(report, report_opts);

    try {
        app.parse(argc, argv);
        if (synth->parsed()) {
            cmd_synth(synth_opts);
        } else if (ingest_maps->parsed()) {
            cmd_ingest_maps(load_with_overrides(ingest_maps_opts));
        } else if (ingest_poll->parsed()) {
            cmd_ingest_pollution(load_with_overrides(ingest_poll_opts));
        } else if (build->parsed()) {
            cmd_build_dataset(load_with_overrides(build_opts));
        } else if (train->parsed()) {
            cmd_train(load_with_overrides(train_opts));
        } else if (validate->parsed()) {
            cmd_validate(load_with_overrides(validate_opts));
        } else if (similarity->parsed()) {
            cmd_similarity(load_with_overrides(similarity_opts));
        } else if (report->parsed()) {
            cmd_report(load_with_overrides(report_opts));
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ringpls: " << e.what() << "\n";
        return 2;
    } catch (const rp::InputError& e) {
        std::cerr << "ringpls: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ringpls: internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
