#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "ringpls/common.hpp"
#include "ringpls/image.hpp"
#include "ringpls/palette.hpp"
#include "ringpls/rings.hpp"
#include "ringpls/time.hpp"

namespace ringpls {

/// Number of rings used for the modelling predictors (4 colours x 15 rings).
inline constexpr int kModelRingCount = 15;
inline constexpr int kPredictorCount = kModelRingCount * kTrafficColourCount;  // 60

/// Per-ring, per-colour pixel tallies for one station-hour snapshot.
struct SnapshotCounts {
    std::string station_id;
    CivilHour timestamp;
    int n_rings = 0;
    std::vector<std::array<std::int64_t, kTrafficColourCount>> counts;  // n_i^c
    std::vector<std::int64_t> non_road;                                 // per-ring remainder
    std::vector<std::int64_t> ring_pixel_counts;                        // t_i from the geometry
};

/// Per-ring colour fractions n_i^c / t_i plus the four per-colour totals
/// I^c = (1/N) sum_i n_i^c / t_i.
struct IntensityVector {
    std::string station_id;
    CivilHour timestamp;
    int n_rings = 0;
    std::vector<std::array<double, kTrafficColourCount>> ring_fractions;
    std::array<double, kTrafficColourCount> totals = {0.0, 0.0, 0.0, 0.0};
};

/// Classifies every in-disc pixel and tallies it into its ring. Scan order
/// does not affect the result.
inline SnapshotCounts count_snapshot(const ImageRgb& image, const RingGeometry& geometry,
                                     const ColourPalette& palette, std::string station_id,
                                     CivilHour timestamp) {
    if (image.width() != geometry.frame_width || image.height() != geometry.frame_height) {
        throw DimensionMismatch("image is " + std::to_string(image.width()) + "x" +
                                std::to_string(image.height()) + " but geometry assumes " +
                                std::to_string(geometry.frame_width) + "x" +
                                std::to_string(geometry.frame_height));
    }

    SnapshotCounts sc;
    sc.station_id = std::move(station_id);
    sc.timestamp = timestamp;
    sc.n_rings = geometry.n_rings;
    sc.counts.assign(static_cast<size_t>(geometry.n_rings), {0, 0, 0, 0});
    sc.non_road.assign(static_cast<size_t>(geometry.n_rings), 0);
    sc.ring_pixel_counts = geometry.ring_pixel_counts;

    const int x0 = static_cast<int>(std::floor(geometry.centre_x - geometry.outer_radius_px));
    const int x1 = static_cast<int>(std::ceil(geometry.centre_x + geometry.outer_radius_px));
    const int y0 = static_cast<int>(std::floor(geometry.centre_y - geometry.outer_radius_px));
    const int y1 = static_cast<int>(std::ceil(geometry.centre_y + geometry.outer_radius_px));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const int ring = geometry.ring_index_of_pixel(x, y);
            if (ring < 0) continue;
            if (auto colour = classify_pixel(image.at(x, y), palette)) {
                sc.counts[static_cast<size_t>(ring)][static_cast<int>(*colour)]++;
            } else {
                sc.non_road[static_cast<size_t>(ring)]++;
            }
        }
    }
    return sc;
}

/// Converts tallies to ring fractions and the per-colour totals.
inline IntensityVector to_intensity(const SnapshotCounts& counts) {
    IntensityVector v;
    v.station_id = counts.station_id;
    v.timestamp = counts.timestamp;
    v.n_rings = counts.n_rings;
    v.ring_fractions.assign(static_cast<size_t>(counts.n_rings), {0.0, 0.0, 0.0, 0.0});

    for (int i = 0; i < counts.n_rings; ++i) {
        const std::int64_t t_i = counts.ring_pixel_counts[static_cast<size_t>(i)];
        if (t_i <= 0) {
            throw EmptyRing("ring " + std::to_string(i + 1) + " of station " + counts.station_id +
                            " contains no pixels");
        }
        for (int c = 0; c < kTrafficColourCount; ++c) {
            v.ring_fractions[static_cast<size_t>(i)][c] =
                static_cast<double>(counts.counts[static_cast<size_t>(i)][c]) /
                static_cast<double>(t_i);
        }
    }
    for (int c = 0; c < kTrafficColourCount; ++c) {
        double sum = 0.0;
        for (int i = 0; i < counts.n_rings; ++i) {
            sum += v.ring_fractions[static_cast<size_t>(i)][c];
        }
        v.totals[c] = sum / static_cast<double>(counts.n_rings);
    }
    return v;
}

/// Flattens a 15-ring intensity vector into the 60 model predictors,
/// colour-major and ring-minor: green r1..r15, orange r1..r15, and so on.
inline std::array<double, kPredictorCount> flatten_predictors(const IntensityVector& v) {
    if (v.n_rings != kModelRingCount) {
        throw WrongRingCount("expected " + std::to_string(kModelRingCount) + " rings, got " +
                             std::to_string(v.n_rings));
    }
    std::array<double, kPredictorCount> out{};
    for (int c = 0; c < kTrafficColourCount; ++c) {
        for (int i = 0; i < kModelRingCount; ++i) {
            out[static_cast<size_t>(c * kModelRingCount + i)] =
                v.ring_fractions[static_cast<size_t>(i)][c];
        }
    }
    return out;
}

/// Inverse of flatten_predictors (station and timestamp left empty).
inline IntensityVector unflatten_predictors(const std::array<double, kPredictorCount>& x) {
    IntensityVector v;
    v.n_rings = kModelRingCount;
    v.ring_fractions.assign(kModelRingCount, {0.0, 0.0, 0.0, 0.0});
    for (int c = 0; c < kTrafficColourCount; ++c) {
        for (int i = 0; i < kModelRingCount; ++i) {
            v.ring_fractions[static_cast<size_t>(i)][c] =
                x[static_cast<size_t>(c * kModelRingCount + i)];
        }
    }
    for (int c = 0; c < kTrafficColourCount; ++c) {
        double sum = 0.0;
        for (int i = 0; i < kModelRingCount; ++i) sum += v.ring_fractions[static_cast<size_t>(i)][c];
        v.totals[c] = sum / kModelRingCount;
    }
    return v;
}

/// Predictor column names in flatten order: green_r01 .. darkred_r15.
inline std::vector<std::string> predictor_names() {
    std::vector<std::string> names;
    names.reserve(kPredictorCount);
    for (TrafficColour c : kAllTrafficColours) {
        for (int i = 1; i <= kModelRingCount; ++i) {
            char buf[24];
            std::snprintf(buf, sizeof(buf), "%s_r%02d", to_string(c), i);
            names.emplace_back(buf);
        }
    }
    return names;
}

}  // namespace ringpls
