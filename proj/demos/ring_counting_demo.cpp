// Demonstrates the image half of the library: build a ring geometry, paint
// known per-ring pixel counts, count them back, and print the resulting
// traffic-intensity vector.

#include <cstdio>

#include <ringpls/ringpls.hpp>

int main() {
    namespace rp = ringpls;

    const int frame = 121;
    const rp::RingGeometry geo = rp::build_rings(60.0, 60.0, 55.0, 5, frame, frame);
    const rp::ColourPalette palette = rp::default_palette();

    // One row per ring: {green, orange, red, darkred} pixel counts.
    std::vector<std::array<long, 4>> counts;
    for (int i = 0; i < geo.n_rings; ++i) {
        const long t = geo.ring_pixel_counts[static_cast<size_t>(i)];
        counts.push_back({t / 4, t / 8, t / 16, t / 32});
    }

    const rp::ImageRgb img = rp::paint_counts(geo, counts, palette);
    const rp::SnapshotCounts sc =
        rp::count_snapshot(img, geo, palette, "DEMO", rp::CivilHour{{2024, 3, 4}, 8});
    const rp::IntensityVector iv = rp::to_intensity(sc);

    std::printf("ring   t_i    green  orange  red  darkred\n");
    for (int i = 0; i < geo.n_rings; ++i) {
        std::printf("%4d %6lld %7lld %7lld %5lld %7lld\n", i + 1,
                    static_cast<long long>(geo.ring_pixel_counts[static_cast<size_t>(i)]),
                    static_cast<long long>(sc.counts[static_cast<size_t>(i)][0]),
                    static_cast<long long>(sc.counts[static_cast<size_t>(i)][1]),
                    static_cast<long long>(sc.counts[static_cast<size_t>(i)][2]),
                    static_cast<long long>(sc.counts[static_cast<size_t>(i)][3]));
    }
    std::printf("\nper-colour intensities I^c = (1/N) sum_i n_i^c / t_i:\n");
    const char* names[4] = {"green", "orange", "red", "darkred"};
    for (int c = 0; c < 4; ++c) {
        std::printf("  %-8s %.6f\n", names[c], iv.totals[static_cast<size_t>(c)]);
    }
    return 0;
}
