// Acceptance gate. Each numbered criterion prints exactly one line:
//
//   PASS  criterion  N: <what was checked> (<evidence>)
//   FAIL  criterion  N: <what was checked> (<what went wrong>)
//   SKIP  criterion  N: <what was checked> (<why it did not run>)
//
// The process exits non-zero iff any criterion FAILed. Criterion 11 needs
// an external dataset and is optional: it SKIPs when the dataset is absent
// and never gates the build.

#include <array>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <ringpls/ringpls.hpp>

#include "helpers.hpp"

namespace rp = ringpls;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const std::string& what, const std::string& status,
            const std::string& evidence) {
    std::cout << status << "  criterion " << (idx < 10 ? " " : "") << idx << ": "
              << what << " (" << evidence << ")" << std::endl;
    if (status == "FAIL") ++g_failures;
}

/// Runs `body` (which returns an evidence string on success and throws or
/// returns a failure message via the `ok` flag otherwise) and prints the
/// criterion line.
template <typename Fn>
void criterion(int idx, const std::string& what, Fn&& body) {
    try {
        bool ok = true;
        const std::string evidence = body(ok);
        report(idx, what, ok ? "PASS" : "FAIL", evidence);
    } catch (const std::exception& e) {
        report(idx, what, "FAIL", std::string("exception: ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << v;
    return ss.str();
}

std::vector<int> iota_candidates(int lo, int hi) {
    std::vector<int> v;
    for (int k = lo; k <= hi; ++k) v.push_back(k);
    return v;
}

std::vector<std::string> column_names(int p) {
    std::vector<std::string> names;
    for (int j = 1; j <= p; ++j) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "x%02d", j);
        names.emplace_back(buf);
    }
    return names;
}

int run_cli(const std::string& args) {
#ifdef RINGPLS_CLI_PATH
    const std::string cmd =
        std::string(RINGPLS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
#else
    (void)args;
    return -1;
#endif
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Independent re-derivation of ring membership used by criteria 5 and 6:
/// a pixel at integer coordinates belongs to the disc iff its squared
/// distance from the centre is strictly below R^2, and to ring
/// ceil(N d^2 / R^2) (1-based, clamped) otherwise.
int oracle_ring(int x, int y, double cx, double cy, double radius, int n_rings) {
    const double dx = x - cx;
    const double dy = y - cy;
    const double d2 = dx * dx + dy * dy;
    const double r2 = radius * radius;
    if (d2 >= r2) return -1;
    int ring = static_cast<int>(std::ceil(n_rings * d2 / r2));
    if (ring < 1) ring = 1;
    if (ring > n_rings) ring = n_rings;
    return ring - 1;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    criterion(1, "full-component PLSR matches minimum-norm least squares", [](bool& ok) {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (int rep = 0; rep < 10; ++rep) {
            std::mt19937_64 rng(100 + static_cast<std::uint64_t>(rep));
            const Eigen::MatrixXd x = testhelp::gauss_matrix(rng, 200, 8);
            const Eigen::MatrixXd b = testhelp::gauss_matrix(rng, 8, 3);
            const Eigen::MatrixXd y = x * b;  // noise-free

            const rp::PlsrModel model = rp::plsr_fit(x, y, 8);
            const Eigen::MatrixXd pred_pls = rp::plsr_predict(model, x);

            Eigen::MatrixXd x1(x.rows(), x.cols() + 1);  // intercept column
            x1.col(0).setOnes();
            x1.rightCols(x.cols()) = x;
            const Eigen::MatrixXd pred_ols = x1 * testhelp::ols_coefficients(x1, y);

            worst = std::max(worst, testhelp::rel_diff(pred_pls, pred_ols));
        }
        const double secs = seconds_since(t0);
        ok = worst <= 1e-6 && secs < 5.0;
        return "10 systems n=200 p=8 m=3, max rel err " + fmt(worst) + ", " +
               fmt(secs) + " s";
    });
}

void criterion_2() {
    criterion(2, "first weight vector equals the closed form for one response",
              [](bool& ok) {
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            std::mt19937_64 rng(200 + static_cast<std::uint64_t>(rep));
            const Eigen::MatrixXd x = testhelp::gauss_matrix(rng, 60, 12);
            const Eigen::MatrixXd b = testhelp::gauss_matrix(rng, 12, 1);
            const Eigen::MatrixXd y =
                x * b + 0.1 * testhelp::gauss_matrix(rng, 60, 1);

            const rp::PlsrModel model = rp::plsr_fit(x, y, 1);

            const Eigen::MatrixXd xs = rp::fit_standardiser(x).transform(x);
            const Eigen::MatrixXd ys = rp::fit_standardiser(y).transform(y);
            Eigen::VectorXd w = xs.transpose() * ys.col(0);
            w /= w.norm();
            w = testhelp::canonical_sign(w);

            worst = std::max(
                worst, (model.x_weights.col(0) - w).cwiseAbs().maxCoeff());
        }
        ok = worst <= 1e-10;
        return "20 instances m=1, max |w1 - X0'y0/|X0'y0|| = " + fmt(worst);
    });
}

void criterion_3() {
    criterion(3, "VIP scores satisfy sum(VIP^2) = number of predictors",
              [](bool& ok) {
        struct Shape { int n, p, m, k; };
        const std::vector<Shape> shapes = {
            {120, 10, 3, 3}, {200, 60, 9, 4}, {80, 25, 2, 2}, {150, 8, 1, 8}};
        double worst = 0.0;
        for (size_t i = 0; i < shapes.size(); ++i) {
            const auto& s = shapes[i];
            std::mt19937_64 rng(300 + static_cast<std::uint64_t>(i));
            const Eigen::MatrixXd x = testhelp::gauss_matrix(rng, s.n, s.p);
            const Eigen::MatrixXd b = testhelp::gauss_matrix(rng, s.p, s.m);
            const Eigen::MatrixXd y =
                x * b + 0.05 * testhelp::gauss_matrix(rng, s.n, s.m);
            const rp::PlsrModel model = rp::plsr_fit(x, y, s.k);
            const Eigen::VectorXd vip = rp::vip_scores(model);
            worst = std::max(worst,
                             std::abs(vip.squaredNorm() - static_cast<double>(s.p)));
        }
        ok = worst <= 1e-9;
        return "4 shapes up to p=60 m=9, max |sum(VIP^2) - p| = " + fmt(worst);
    });
}

void criterion_4() {
    criterion(4, "cross-validation recovers the planted component count",
              [](bool& ok) {
        const auto t0 = std::chrono::steady_clock::now();

        int recovered = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            rp::LatentSystemSpec spec;
            spec.n_rows = 150;
            spec.n_predictors = 10;
            spec.n_responses = 4;
            spec.rank = 3;
            spec.noise_std = 0.0;
            spec.seed = seed;
            const rp::LatentSystem sys = rp::synth_latent_system(spec);

            rp::CvSpec cv;
            cv.n_folds = 5;
            cv.candidates = iota_candidates(1, 8);
            cv.seed = rp::derive_cv_seed(seed);
            if (rp::kfold_cv(sys.X, sys.Y, cv).selected == 3) ++recovered;
        }

        double rmse_lo = 1e300, rmse_hi = 0.0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            rp::LatentSystemSpec spec;
            spec.n_rows = 250;
            spec.n_predictors = 10;
            spec.n_responses = 9;
            spec.rank = 3;
            spec.noise_std = 0.1;
            spec.seed = 400 + seed;
            const rp::LatentSystem sys = rp::synth_latent_system(spec);

            rp::SplitSpec split;
            split.train_fraction = 0.8;
            split.seed = seed;
            const rp::SplitIndices idx =
                rp::split_indices(static_cast<size_t>(spec.n_rows), split);
            const auto gather = [&](const Eigen::MatrixXd& m,
                                    const std::vector<size_t>& rows) {
                Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
                for (size_t i = 0; i < rows.size(); ++i) {
                    out.row(static_cast<Eigen::Index>(i)) =
                        m.row(static_cast<Eigen::Index>(rows[i]));
                }
                return out;
            };
            const Eigen::MatrixXd x_train = gather(sys.X, idx.train);
            const Eigen::MatrixXd y_train = gather(sys.Y, idx.train);
            const Eigen::MatrixXd x_test = gather(sys.X, idx.test);
            const Eigen::MatrixXd y_test = gather(sys.Y, idx.test);

            rp::CvSpec cv;
            cv.n_folds = 5;
            cv.candidates = iota_candidates(1, 8);
            cv.seed = rp::derive_cv_seed(seed);
            const rp::TrainResult tr = rp::train_final(x_train, y_train, cv);
            const double held_out =
                rp::rmse_all(y_test, rp::plsr_predict(tr.model, x_test));
            rmse_lo = std::min(rmse_lo, held_out);
            rmse_hi = std::max(rmse_hi, held_out);
        }

        const double secs = seconds_since(t0);
        ok = recovered >= 18 && rmse_lo >= 0.09 && rmse_hi <= 0.13 && secs < 30.0;
        return "noise-free: " + std::to_string(recovered) +
               "/20 seeds select 3; noise 0.1: held-out RMSE in [" + fmt(rmse_lo) +
               ", " + fmt(rmse_hi) + "]; " + fmt(secs) + " s";
    });
}

void criterion_5() {
    criterion(5, "ring geometry is equal-area and exactly partitions the disc",
              [](bool& ok) {
        const double cx = 960.0, cy = 540.0, radius = 500.0;
        const int n_rings = 15;
        const rp::RingGeometry geo =
            rp::build_rings(cx, cy, radius, n_rings, 1920, 1080);

        std::vector<std::int64_t> brute(static_cast<size_t>(n_rings), 0);
        std::int64_t brute_total = 0;
        for (int y = 0; y < 1080; ++y) {
            for (int x = 0; x < 1920; ++x) {
                const int r = oracle_ring(x, y, cx, cy, radius, n_rings);
                if (r < 0) continue;
                ++brute[static_cast<size_t>(r)];
                ++brute_total;
            }
        }

        bool counts_match = geo.ring_pixel_counts == brute;
        const bool total_match = geo.total_in_disc() == brute_total;

        double mean = 0.0;
        for (std::int64_t t : geo.ring_pixel_counts) mean += static_cast<double>(t);
        mean /= n_rings;
        double worst_dev = 0.0;
        for (std::int64_t t : geo.ring_pixel_counts) {
            worst_dev = std::max(worst_dev,
                                 std::abs(static_cast<double>(t) - mean) / mean);
        }

        ok = counts_match && total_match && worst_dev < 0.02;
        return "R=500 N=15 in 1920x1080: max ring deviation " +
               fmt(100.0 * worst_dev) + "% of mean, disc total " +
               std::to_string(geo.total_in_disc()) +
               (total_match && counts_match ? " == brute force" : " != brute force");
    });
}

void criterion_6() {
    criterion(6, "intensity vectors match brute-force per-pixel recomputation",
              [](bool& ok) {
        const rp::ColourPalette palette = rp::default_palette();
        const std::array<rp::Rgb8, 4>& refs = palette.reference_rgb;

        const double cx = 100.0, cy = 100.0, radius = 90.0;
        const int n_rings = rp::kModelRingCount;
        const rp::RingGeometry geo = rp::build_rings(cx, cy, radius, n_rings, 201, 201);

        double worst = 0.0;
        for (int img_i = 0; img_i < 5; ++img_i) {
            std::mt19937_64 rng(600 + static_cast<std::uint64_t>(img_i));
            std::vector<std::array<long, 4>> planted(static_cast<size_t>(n_rings));
            for (int i = 0; i < n_rings; ++i) {
                const long cap = geo.ring_pixel_counts[static_cast<size_t>(i)];
                for (int c = 0; c < 4; ++c) {
                    planted[static_cast<size_t>(i)][static_cast<size_t>(c)] =
                        static_cast<long>(testhelp::uniform01(rng) * 0.2 *
                                          static_cast<double>(cap));
                }
            }
            const rp::ImageRgb img = rp::paint_counts(geo, planted, palette);

            // Brute force: classify every pixel by exact palette colour and
            // re-derive its ring, then apply the averaged ring-fraction
            // formula directly.
            std::vector<std::array<std::int64_t, 4>> n_oracle(
                static_cast<size_t>(n_rings), {0, 0, 0, 0});
            std::vector<std::int64_t> t_oracle(static_cast<size_t>(n_rings), 0);
            for (int y = 0; y < img.height(); ++y) {
                for (int x = 0; x < img.width(); ++x) {
                    const int r = oracle_ring(x, y, cx, cy, radius, n_rings);
                    if (r < 0) continue;
                    ++t_oracle[static_cast<size_t>(r)];
                    const rp::Rgb8 px = img.at(x, y);
                    for (int c = 0; c < 4; ++c) {
                        if (px.r == refs[static_cast<size_t>(c)].r &&
                            px.g == refs[static_cast<size_t>(c)].g &&
                            px.b == refs[static_cast<size_t>(c)].b) {
                            ++n_oracle[static_cast<size_t>(r)][static_cast<size_t>(c)];
                            break;
                        }
                    }
                }
            }
            std::array<double, 4> totals_oracle = {0, 0, 0, 0};
            for (int c = 0; c < 4; ++c) {
                for (int i = 0; i < n_rings; ++i) {
                    totals_oracle[static_cast<size_t>(c)] +=
                        static_cast<double>(n_oracle[static_cast<size_t>(i)]
                                                    [static_cast<size_t>(c)]) /
                        static_cast<double>(t_oracle[static_cast<size_t>(i)]);
                }
                totals_oracle[static_cast<size_t>(c)] /= n_rings;
            }

            const rp::IntensityVector iv = rp::to_intensity(rp::count_snapshot(
                img, geo, palette, "ACC", rp::CivilHour{rp::CivilDate{2024, 3, 4}, 8}));
            for (int c = 0; c < 4; ++c) {
                worst = std::max(worst,
                                 std::abs(iv.totals[static_cast<size_t>(c)] -
                                          totals_oracle[static_cast<size_t>(c)]));
            }
        }
        ok = worst <= 1e-12;
        return "5 painted images, max |library - brute force| = " + fmt(worst);
    });
}

void criterion_7() {
    criterion(7, "weighted chi-square is symmetric, zero on identity, and exact "
                 "on a hand-computed example",
              [](bool& ok) {
        const int p = 5;
        const auto names = column_names(p);
        double worst_sym = 0.0;
        bool identity_exact = true;
        for (int rep = 0; rep < 100; ++rep) {
            std::mt19937_64 rng(700 + static_cast<std::uint64_t>(rep));
            const int n_u = 30 + static_cast<int>(testhelp::uniform01(rng) * 50);
            const int n_v = 30 + static_cast<int>(testhelp::uniform01(rng) * 50);
            Eigen::MatrixXd u = testhelp::gauss_matrix(rng, n_u, p);
            Eigen::MatrixXd v =
                testhelp::gauss_matrix(rng, n_v, p) * 1.3 +
                Eigen::MatrixXd::Constant(n_v, p, 0.4);
            Eigen::VectorXd vip(p);
            for (int j = 0; j < p; ++j) vip(j) = 0.1 + testhelp::uniform01(rng);

            const double s_uv = rp::weighted_chi2(u, v, vip, names).score;
            const double s_vu = rp::weighted_chi2(v, u, vip, names).score;
            worst_sym = std::max(worst_sym, std::abs(s_uv - s_vu) /
                                                std::max(1.0, std::abs(s_uv)));
            if (rp::weighted_chi2(u, u, vip, names).score != 0.0) {
                identity_exact = false;
            }
        }

        // Hand-computed two-bin example: u = {0,0,0,1,1}, v = {0,1,1,1}.
        // Pooled range [0,1], bins [0,0.5) and [0.5,1]; observed u = (3,2),
        // v = (1,3); expected u = (4*5/9, 5*5/9), v = (4*4/9, 5*4/9);
        // chi2 = sum (O-E)^2/E over both samples = 1.1025.
        Eigen::MatrixXd u2(5, 1), v2(4, 1);
        u2 << 0, 0, 0, 1, 1;
        v2 << 0, 1, 1, 1;
        Eigen::VectorXd one(1);
        one << 1.0;
        rp::Chi2Options two_bins;
        two_bins.n_bins = 2;
        const double hand =
            rp::weighted_chi2(u2, v2, one, {"x"}, two_bins).score;
        const double hand_err = std::abs(hand - 1.1025);

        ok = worst_sym <= 1e-12 && identity_exact && hand_err <= 1e-12;
        return "100 pairs: max symmetry gap " + fmt(worst_sym) +
               ", identity exactly zero: " + (identity_exact ? "yes" : "no") +
               ", hand example err " + fmt(hand_err);
    });
}

void criterion_8() {
    criterion(8, "calendar filter keeps exactly the working-day core hours",
              [](bool& ok) {
        // Three weeks starting Monday 2024-03-04, one holiday in week 3.
        const rp::CivilDate start{2024, 3, 4};
        const rp::CivilDate holiday{2024, 3, 18};

        std::vector<rp::PollutionRecord> records;
        for (long d = 0; d < 21; ++d) {
            const rp::CivilDate date = rp::CivilDate::from_serial(start.serial() + d);
            for (int h = 0; h < 24; ++h) {
                rp::PollutionRecord rec;
                rec.station_id = "ACC";
                rec.timestamp = rp::CivilHour{date, h};
                rec.values.fill(1.0);
                records.push_back(rec);
            }
        }

        rp::CalendarPolicy policy;  // Mon-Fri 7..22 by default
        policy.holidays.insert(holiday);
        const auto kept = rp::filter_calendar(records, policy);

        std::set<rp::CivilHour> expected;
        for (long d = 0; d < 21; ++d) {
            const rp::CivilDate date = rp::CivilDate::from_serial(start.serial() + d);
            const int wd = date.weekday();
            if (wd == 0 || wd == 6 || date == holiday) continue;
            for (int h = 7; h <= 22; ++h) expected.insert(rp::CivilHour{date, h});
        }

        std::set<rp::CivilHour> got;
        for (const auto& r : kept) got.insert(r.timestamp);

        ok = got == expected && kept.size() == expected.size();
        return std::to_string(kept.size()) + " of " + std::to_string(records.size()) +
               " hourly records kept; expected set of " +
               std::to_string(expected.size()) + " matched " +
               (got == expected ? "exactly" : "NOT");
    });
}

void criterion_9() {
    criterion(9, "pooled six-station training beats the single most similar station",
              [](bool& ok) {
        int pooled_wins = 0;
        std::string last_pick;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            rp::ScenarioSpec spec;  // 7 stations, shared latent response map
            spec.seed = seed;
            const rp::Scenario sc = rp::synth_scenario(spec);
            const rp::StationBlock& validation = sc.stations[0];

            const Eigen::Index rows = spec.rows_per_station;
            Eigen::MatrixXd x_pool(6 * rows, spec.n_predictors);
            Eigen::MatrixXd y_pool(6 * rows, spec.n_responses);
            for (int s = 1; s <= 6; ++s) {
                x_pool.middleRows((s - 1) * rows, rows) = sc.stations[s].X;
                y_pool.middleRows((s - 1) * rows, rows) = sc.stations[s].Y;
            }

            rp::CvSpec cv;
            cv.n_folds = 5;
            cv.candidates = iota_candidates(1, 8);
            cv.seed = rp::derive_cv_seed(seed);
            const rp::TrainResult pooled = rp::train_final(x_pool, y_pool, cv);
            const double rmse_pooled = rp::rmse_all(
                validation.Y, rp::plsr_predict(pooled.model, validation.X));

            // Pick the benchmark's most similar station with the pooled
            // model's VIP weights, then train on that station alone.
            const Eigen::VectorXd vip = rp::vip_scores(pooled.model);
            std::vector<std::pair<std::string, Eigen::MatrixXd>> candidates;
            for (int s = 1; s <= 6; ++s) {
                candidates.emplace_back(sc.stations[s].station_id, sc.stations[s].X);
            }
            const auto ranked =
                rp::rank_similarity(validation.X, candidates, vip,
                                    column_names(static_cast<int>(spec.n_predictors)));
            last_pick = ranked.front().station_id;
            const rp::StationBlock* single = nullptr;
            for (const auto& st : sc.stations) {
                if (st.station_id == last_pick) single = &st;
            }

            const rp::TrainResult solo = rp::train_final(single->X, single->Y, cv);
            const double rmse_solo = rp::rmse_all(
                validation.Y, rp::plsr_predict(solo.model, validation.X));

            if (rmse_pooled < rmse_solo) ++pooled_wins;
        }
        ok = pooled_wins >= 8;
        return std::to_string(pooled_wins) +
               "/10 seeds favour pooled training (last most-similar pick: " +
               last_pick + ")";
    });
}

void criterion_10() {
    criterion(10, "training is byte-deterministic and persistence is bit-exact",
              [](bool& ok) {
#ifndef RINGPLS_CLI_PATH
        ok = false;
        return std::string("command-line binary path not configured");
#else
        // Part 1: rerunning `train` on the same inputs and seed reproduces
        // the persisted model byte for byte.
        const fs::path dir = fs::temp_directory_path() / "ringpls_acceptance";
        fs::remove_all(dir);
        const std::string cfg = (dir / "config.json").string();
        bool cli_ok = run_cli("synth --out " + dir.string() +
                              " --days 4 --stations 3 --frame 161 --seed 11") == 0;
        for (const char* sub :
             {"ingest-maps", "ingest-pollution", "build-dataset", "train"}) {
            cli_ok = cli_ok && run_cli(std::string(sub) + " --config " + cfg) == 0;
        }
        std::string first, second;
        if (cli_ok) {
            first = slurp(dir / "out" / "model.json");
            cli_ok = run_cli("train --config " + cfg) == 0;
            second = slurp(dir / "out" / "model.json");
        }
        const bool rerun_identical = cli_ok && !first.empty() && first == second;
        fs::remove_all(dir);

        // Part 2: save -> load -> predict is bit-identical to predicting
        // with the in-memory model.
        rp::LatentSystemSpec spec;
        spec.n_rows = 120;
        spec.n_predictors = 20;
        spec.n_responses = 5;
        spec.rank = 3;
        spec.noise_std = 0.05;
        spec.seed = 21;
        const rp::LatentSystem sys = rp::synth_latent_system(spec);
        const rp::PlsrModel model = rp::plsr_fit(sys.X, sys.Y, 3);

        const fs::path model_path =
            fs::temp_directory_path() / "ringpls_acceptance_model.json";
        rp::save_model(model_path.string(), model);
        const rp::PlsrModel loaded = rp::load_model(model_path.string());
        fs::remove(model_path);

        const Eigen::MatrixXd p1 = rp::plsr_predict(model, sys.X);
        const Eigen::MatrixXd p2 = rp::plsr_predict(loaded, sys.X);
        const bool bit_identical =
            p1.rows() == p2.rows() && p1.cols() == p2.cols() &&
            std::memcmp(p1.data(), p2.data(),
                        sizeof(double) * static_cast<size_t>(p1.size())) == 0;

        ok = rerun_identical && bit_identical;
        return std::string("train rerun byte-identical: ") +
               (rerun_identical ? "yes" : "no") +
               "; load->predict bit-identical: " + (bit_identical ? "yes" : "no");
#endif
    });
}

void criterion_11() {
    const std::string what =
        "external dataset integration (three-station benchmark)";
    const char* root = std::getenv("RINGPLS_DATASET_DIR");
    if (root == nullptr) {
        report(11, what, "SKIP",
               "optional; set RINGPLS_DATASET_DIR to a local copy of the "
               "published dataset with a config.json to run it");
        return;
    }
    criterion(11, what, [&](bool& ok) {
        const fs::path cfg = fs::path(root) / "config.json";
        if (!fs::exists(cfg)) {
            ok = false;
            return "RINGPLS_DATASET_DIR set but " + cfg.string() + " not found";
        }
        for (const char* sub : {"ingest-maps", "ingest-pollution", "build-dataset",
                                "train", "similarity"}) {
            if (run_cli(std::string(sub) + " --config " + cfg.string()) != 0) {
                ok = false;
                return std::string(sub) + " failed on the external dataset";
            }
        }
        // The most similar station to PED must be SAG: first data row of
        // the ranking (rank,station_id,score).
        const nlohmann::json j =
            nlohmann::json::parse(slurp(fs::path(root) / "config.json"));
        const std::string out_dir =
            j.value("paths", nlohmann::json::object()).value("out_dir", "out");
        std::ifstream sim(fs::path(root) / out_dir / "similarity.csv");
        std::string header, top;
        std::getline(sim, header);
        std::getline(sim, top);
        ok = top.rfind("1,SAG,", 0) == 0;
        return "most similar station row: '" + top + "' (expected SAG first)";
    });
}

}  // namespace

int main() {
    std::cout << "ring-intensity PLSR toolkit acceptance gate" << std::endl;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) FAILED" << std::endl;
        return 1;
    }
    std::cout << "all gating criteria passed" << std::endl;
    return 0;
}
