#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "ringpls/common.hpp"
#include "ringpls/image.hpp"

namespace ringpls {

/// The four congestion levels drawn on traffic maps, ordered from free
/// flow to jammed. The ordering is fixed: it defines predictor indexing.
enum class TrafficColour : int { Green = 0, Orange = 1, Red = 2, DarkRed = 3 };

inline constexpr int kTrafficColourCount = 4;

inline constexpr std::array<TrafficColour, kTrafficColourCount> kAllTrafficColours = {
    TrafficColour::Green, TrafficColour::Orange, TrafficColour::Red, TrafficColour::DarkRed};

inline const char* to_string(TrafficColour c) {
    switch (c) {
        case TrafficColour::Green: return "green";
        case TrafficColour::Orange: return "orange";
        case TrafficColour::Red: return "red";
        case TrafficColour::DarkRed: return "darkred";
    }
    return "?";
}

inline TrafficColour traffic_colour_from_string(const std::string& s) {
    for (TrafficColour c : kAllTrafficColours) {
        if (s == to_string(c)) return c;
    }
    throw ParseError("unknown traffic colour '" + s + "'");
}

/// Reference RGB per traffic colour plus a match tolerance (max Euclidean
/// RGB distance). References must be pairwise separated by more than twice
/// the tolerance so no pixel can match two colours.
struct ColourPalette {
    std::array<Rgb8, kTrafficColourCount> reference_rgb;
    double tolerance = 40.0;

    void validate() const {
        if (tolerance < 0.0) throw ConfigError("palette tolerance must be non-negative");
        for (int i = 0; i < kTrafficColourCount; ++i) {
            for (int j = i + 1; j < kTrafficColourCount; ++j) {
                const double d = std::sqrt(rgb_distance_sq(reference_rgb[i], reference_rgb[j]));
                if (d <= 2.0 * tolerance) {
                    throw ConfigError("palette references for " +
                                      std::string(to_string(kAllTrafficColours[i])) + " and " +
                                      std::string(to_string(kAllTrafficColours[j])) +
                                      " are separated by " + std::to_string(d) +
                                      " which is not more than twice the tolerance");
                }
            }
        }
    }
};

/// Approximate on-screen traffic colours; overridable via the run config
/// since map providers are free to restyle their tiles.
inline ColourPalette default_palette() {
    ColourPalette p;
    p.reference_rgb[static_cast<int>(TrafficColour::Green)] = {99, 214, 104};
    p.reference_rgb[static_cast<int>(TrafficColour::Orange)] = {255, 151, 77};
    p.reference_rgb[static_cast<int>(TrafficColour::Red)] = {242, 60, 50};
    p.reference_rgb[static_cast<int>(TrafficColour::DarkRed)] = {129, 31, 31};
    p.tolerance = 40.0;
    return p;
}

/// Classifies one pixel. Returns the traffic colour whose reference is
/// within `tolerance`, or nullopt for non-road pixels. Total and pure; by
/// the palette separation invariant at most one colour can qualify.
inline std::optional<TrafficColour> classify_pixel(Rgb8 rgb, const ColourPalette& palette) {
    const double tol_sq = palette.tolerance * palette.tolerance;
    for (TrafficColour c : kAllTrafficColours) {
        if (rgb_distance_sq(rgb, palette.reference_rgb[static_cast<int>(c)]) <= tol_sq) {
            return c;
        }
    }
    return std::nullopt;
}

}  // namespace ringpls
