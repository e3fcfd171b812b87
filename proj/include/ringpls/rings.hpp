#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ringpls/common.hpp"

namespace ringpls {

/// N concentric equal-area annuli around a station centre, in pixel space.
/// Ring boundaries sit at r_i = R * sqrt(i / N), which makes every annulus
/// cover the same area and therefore roughly the same number of pixels.
struct RingGeometry {
    double centre_x = 0.0;
    double centre_y = 0.0;
    double outer_radius_px = 0.0;
    int n_rings = 0;
    int frame_width = 0;
    int frame_height = 0;
    std::vector<std::int64_t> ring_pixel_counts;  // t_i, one per ring

    /// 0-based ring index for a squared centre distance, or -1 outside the
    /// disc. Membership is ceil(N * d^2 / R^2) clamped to [1, N].
    int ring_index(double dist_sq) const {
        const double r_sq = outer_radius_px * outer_radius_px;
        if (dist_sq >= r_sq) return -1;
        const double scaled = static_cast<double>(n_rings) * dist_sq / r_sq;
        int ring = static_cast<int>(std::ceil(scaled));
        if (ring < 1) ring = 1;
        if (ring > n_rings) ring = n_rings;
        return ring - 1;
    }

    int ring_index_of_pixel(int x, int y) const {
        const double dx = x - centre_x;
        const double dy = y - centre_y;
        return ring_index(dx * dx + dy * dy);
    }

    std::int64_t total_in_disc() const {
        return std::accumulate(ring_pixel_counts.begin(), ring_pixel_counts.end(),
                               std::int64_t{0});
    }
};

/// Builds the ring geometry for a frame of the given dimensions, counting
/// the pixels that fall into each annulus. Pixels are treated as lattice
/// points at integer coordinates; a pixel belongs to the disc iff its
/// centre distance is strictly below the outer radius.
inline RingGeometry build_rings(double centre_x, double centre_y, double outer_radius_px,
                                int n_rings, int frame_width, int frame_height) {
    if (n_rings < 1) throw ConfigError("n_rings must be >= 1");
    if (outer_radius_px <= 0.0) throw ConfigError("outer_radius_px must be positive");
    if (centre_x - outer_radius_px < 0.0 || centre_x + outer_radius_px > frame_width - 1 ||
        centre_y - outer_radius_px < 0.0 || centre_y + outer_radius_px > frame_height - 1) {
        throw DiscOutOfBounds("disc of radius " + std::to_string(outer_radius_px) +
                              " around (" + std::to_string(centre_x) + ", " +
                              std::to_string(centre_y) + ") extends past the " +
                              std::to_string(frame_width) + "x" + std::to_string(frame_height) +
                              " frame");
    }

    RingGeometry g;
    g.centre_x = centre_x;
    g.centre_y = centre_y;
    g.outer_radius_px = outer_radius_px;
    g.n_rings = n_rings;
    g.frame_width = frame_width;
    g.frame_height = frame_height;
    g.ring_pixel_counts.assign(static_cast<size_t>(n_rings), 0);

    const int x0 = static_cast<int>(std::floor(centre_x - outer_radius_px));
    const int x1 = static_cast<int>(std::ceil(centre_x + outer_radius_px));
    const int y0 = static_cast<int>(std::floor(centre_y - outer_radius_px));
    const int y1 = static_cast<int>(std::ceil(centre_y + outer_radius_px));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const int ring = g.ring_index_of_pixel(x, y);
            if (ring >= 0) g.ring_pixel_counts[static_cast<size_t>(ring)]++;
        }
    }
    return g;
}

}  // namespace ringpls
