#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringpls/common.hpp"
#include "ringpls/image.hpp"
#include "ringpls/intensity.hpp"
#include "ringpls/palette.hpp"
#include "ringpls/rings.hpp"

namespace ringpls {
namespace detail {

/// Uniform double in [0, 1) from the top 53 bits of the engine. Written
/// out (rather than std::uniform_real_distribution) so a seed pins the
/// exact stream on every platform.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller, same portability rationale.
inline double gauss(std::mt19937_64& rng) {
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(2.0 * std::numbers::pi * v);
}

inline Eigen::MatrixXd gauss_matrix(Eigen::Index rows, Eigen::Index cols,
                                    std::mt19937_64& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    }
    return m;
}

}  // namespace detail

/// A synthetic regression problem whose predictor block has *exactly* the
/// requested latent rank: X = T P with T (n x rank) and P (rank x p), and
/// Y = T C + noise. Because every X column lives in the rank-dimensional
/// score space, a PLS fit explains the noise-free response completely at
/// `rank` components — the construction cross-validation recovery tests
/// rely on. (A full-rank X with a low-rank coefficient matrix would not
/// do: successive PLS components leak outside the response-relevant
/// subspace and the RMSE knee blurs.)
struct LatentSystemSpec {
    Eigen::Index n_rows = 400;
    Eigen::Index n_predictors = 60;
    Eigen::Index n_responses = 9;
    int rank = 3;
    double noise_std = 0.0;
    std::uint64_t seed = 1;
};

struct LatentSystem {
    Eigen::MatrixXd X;            // n x p, exact rank `rank`
    Eigen::MatrixXd Y;            // n x m, noisy
    Eigen::MatrixXd noise_free_y; // n x m
    Eigen::MatrixXd latent_scores;    // T, n x rank
    Eigen::MatrixXd latent_loadings;  // P, rank x p
    Eigen::MatrixXd response_map;     // C, rank x m
    int rank = 0;
};

inline LatentSystem synth_latent_system(const LatentSystemSpec& spec) {
    if (spec.rank < 1 || spec.rank > std::min(spec.n_rows, spec.n_predictors)) {
        throw ConfigError("latent rank outside [1, min(n, p)]");
    }
    if (spec.noise_std < 0.0) throw ConfigError("noise_std must be non-negative");
    std::mt19937_64 rng(spec.seed);
    LatentSystem s;
    s.rank = spec.rank;
    s.latent_scores = detail::gauss_matrix(spec.n_rows, spec.rank, rng);
    s.latent_loadings = detail::gauss_matrix(spec.rank, spec.n_predictors, rng);
    s.response_map = detail::gauss_matrix(spec.rank, spec.n_responses, rng);
    s.X = s.latent_scores * s.latent_loadings;
    s.noise_free_y = s.latent_scores * s.response_map;
    s.Y = s.noise_free_y;
    if (spec.noise_std > 0.0) {
        s.Y += spec.noise_std *
               detail::gauss_matrix(spec.n_rows, spec.n_responses, rng);
    }
    return s;
}

/// Multi-station fixture: every station obeys the same latent response
/// map, but station k's latent scores are mean-shifted by k * shift_step
/// along a fixed direction. Station ST01 (k = 0) is the natural
/// validation station; ST02 is planted as its most similar neighbour and
/// similarity decays monotonically with the station index.
struct ScenarioSpec {
    int n_stations = 7;
    Eigen::Index rows_per_station = 160;
    Eigen::Index n_predictors = 60;
    Eigen::Index n_responses = 9;
    int rank = 4;
    double noise_std = 0.1;
    double shift_step = 0.6;
    std::uint64_t seed = 7;
};

struct StationBlock {
    std::string station_id;
    Eigen::MatrixXd X;
    Eigen::MatrixXd Y;
    double planted_shift = 0.0;
};

struct Scenario {
    std::vector<StationBlock> stations;  // index 0 = ST01, shift 0
    Eigen::MatrixXd latent_loadings;     // shared P
    Eigen::MatrixXd response_map;        // shared C
};

inline std::string synth_station_id(int index) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "ST%02d", index + 1);
    return buf;
}

inline Scenario synth_scenario(const ScenarioSpec& spec) {
    if (spec.n_stations < 2) throw ConfigError("scenario needs at least 2 stations");
    if (spec.rank < 1 || spec.rank > spec.n_predictors) {
        throw ConfigError("scenario rank outside [1, p]");
    }
    std::mt19937_64 rng(spec.seed);
    Scenario sc;
    sc.latent_loadings = detail::gauss_matrix(spec.rank, spec.n_predictors, rng);
    sc.response_map = detail::gauss_matrix(spec.rank, spec.n_responses, rng);
    Eigen::VectorXd direction = detail::gauss_matrix(spec.rank, 1, rng);
    direction.normalize();

    for (int k = 0; k < spec.n_stations; ++k) {
        StationBlock b;
        b.station_id = synth_station_id(k);
        b.planted_shift = spec.shift_step * k;
        Eigen::MatrixXd t = detail::gauss_matrix(spec.rows_per_station, spec.rank, rng);
        t.rowwise() += (b.planted_shift * direction).transpose();
        b.X = t * sc.latent_loadings;
        b.Y = t * sc.response_map;
        if (spec.noise_std > 0.0) {
            b.Y += spec.noise_std *
                   detail::gauss_matrix(spec.rows_per_station, spec.n_responses, rng);
        }
        sc.stations.push_back(std::move(b));
    }
    return sc;
}

/// Paint exact per-ring, per-colour pixel counts onto a background image.
/// In-disc pixels are visited in scan order (y outer, x inner); within
/// each ring the first counts[ring][Green] pixels become green, the next
/// counts[ring][Orange] orange, and so on, the remainder keeping the
/// background colour. Counting the result therefore recovers the given
/// counts exactly — the round-trip the intensity oracles build on.
inline ImageRgb paint_counts(const RingGeometry& geo,
                             const std::vector<std::array<long, 4>>& counts,
                             const ColourPalette& palette,
                             Rgb8 background = {255, 255, 255}) {
    if (static_cast<int>(counts.size()) != geo.n_rings) {
        throw WrongRingCount("paint_counts: counts for " + std::to_string(counts.size()) +
                             " rings, geometry has " + std::to_string(geo.n_rings));
    }
    for (int i = 0; i < geo.n_rings; ++i) {
        long total = 0;
        for (long c : counts[static_cast<size_t>(i)]) {
            if (c < 0) throw Error("paint_counts: negative count");
            total += c;
        }
        if (total > geo.ring_pixel_counts[static_cast<size_t>(i)]) {
            throw Error("paint_counts: ring " + std::to_string(i + 1) + " asked for " +
                        std::to_string(total) + " painted pixels but holds only " +
                        std::to_string(geo.ring_pixel_counts[static_cast<size_t>(i)]));
        }
    }

    ImageRgb img(geo.frame_width, geo.frame_height, background);
    std::vector<std::array<long, 4>> painted(counts.size(), {0, 0, 0, 0});
    for (int y = 0; y < geo.frame_height; ++y) {
        for (int x = 0; x < geo.frame_width; ++x) {
            const int ring = geo.ring_index_of_pixel(x, y);
            if (ring < 0) continue;
            auto& done = painted[static_cast<size_t>(ring)];
            const auto& want = counts[static_cast<size_t>(ring)];
            for (int c = 0; c < kTrafficColourCount; ++c) {
                if (done[static_cast<size_t>(c)] < want[static_cast<size_t>(c)]) {
                    img.at(x, y) = palette.reference_rgb[static_cast<size_t>(c)];
                    ++done[static_cast<size_t>(c)];
                    break;
                }
            }
        }
    }
    return img;
}

/// Integer counts realising target fractions as closely as pixels allow:
/// count = round(fraction * ring size), rescaled when rounding oversubscribes.
inline std::vector<std::array<long, 4>> counts_from_fractions(
    const RingGeometry& geo, const std::vector<std::array<double, 4>>& fractions) {
    if (static_cast<int>(fractions.size()) != geo.n_rings) {
        throw WrongRingCount("counts_from_fractions: fraction rows != rings");
    }
    std::vector<std::array<long, 4>> out(fractions.size());
    for (int i = 0; i < geo.n_rings; ++i) {
        const long t = geo.ring_pixel_counts[static_cast<size_t>(i)];
        double sum = 0.0;
        for (double f : fractions[static_cast<size_t>(i)]) {
            if (f < 0.0 || !std::isfinite(f)) throw Error("fractions must be finite and >= 0");
            sum += f;
        }
        const double scale = sum > 1.0 ? 1.0 / sum : 1.0;
        long used = 0;
        for (int c = 0; c < kTrafficColourCount; ++c) {
            long n = std::lround(fractions[static_cast<size_t>(i)][static_cast<size_t>(c)] *
                                 scale * static_cast<double>(t));
            n = std::min(n, t - used);
            out[static_cast<size_t>(i)][static_cast<size_t>(c)] = n;
            used += n;
        }
    }
    return out;
}

/// Twin-peaked daily activity curve (morning and evening rush) in [0, 1]:
/// Gaussian bumps centred on hours 8 and 18. Used by the fixture
/// generator so hourly profiles of synthetic traffic show two maxima.
inline double rush_hour_factor(int hour) {
    const double h = static_cast<double>(hour);
    const double morning = std::exp(-0.5 * std::pow((h - 8.0) / 2.0, 2.0));
    const double evening = std::exp(-0.5 * std::pow((h - 18.0) / 2.0, 2.0));
    return std::min(1.0, morning + evening);
}

}  // namespace ringpls
