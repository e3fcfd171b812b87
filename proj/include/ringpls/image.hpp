#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ringpls/common.hpp"

namespace ringpls {

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb8&) const = default;
};

// Decoders treat pixel storage as a packed byte-RGB buffer.
static_assert(sizeof(Rgb8) == 3);

/// Squared Euclidean distance in RGB space.
inline double rgb_distance_sq(Rgb8 a, Rgb8 b) {
    const double dr = static_cast<double>(a.r) - b.r;
    const double dg = static_cast<double>(a.g) - b.g;
    const double db = static_cast<double>(a.b) - b.b;
    return dr * dr + dg * dg + db * db;
}

/// Dense 8-bit RGB raster, row-major.
class ImageRgb {
public:
    ImageRgb() = default;
    ImageRgb(int width, int height, Rgb8 fill_colour = {255, 255, 255})
        : width_(width), height_(height),
          pixels_(static_cast<size_t>(width) * static_cast<size_t>(height), fill_colour) {}

    int width() const { return width_; }
    int height() const { return height_; }

    Rgb8& at(int x, int y) { return pixels_[static_cast<size_t>(y) * width_ + x]; }
    const Rgb8& at(int x, int y) const { return pixels_[static_cast<size_t>(y) * width_ + x]; }

    std::vector<Rgb8>& pixels() { return pixels_; }
    const std::vector<Rgb8>& pixels() const { return pixels_; }

    void fill(Rgb8 colour) {
        for (auto& p : pixels_) p = colour;
    }

    /// Paints the axis-aligned rectangle [x0,x1] x [y0,y1], clipped to the frame.
    void fill_rect(int x0, int y0, int x1, int y1, Rgb8 colour) {
        for (int y = std::max(0, y0); y <= std::min(height_ - 1, y1); ++y) {
            for (int x = std::max(0, x0); x <= std::min(width_ - 1, x1); ++x) {
                at(x, y) = colour;
            }
        }
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<Rgb8> pixels_;
};

}  // namespace ringpls
