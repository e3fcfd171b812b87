#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ringpls/common.hpp"
#include "ringpls/dataset.hpp"

namespace ringpls {

enum class SplitMode { Random, Chronological };

inline std::string to_string(SplitMode m) {
    return m == SplitMode::Random ? "random" : "chronological";
}

inline SplitMode split_mode_from_string(const std::string& s) {
    if (s == "random") return SplitMode::Random;
    if (s == "chronological") return SplitMode::Chronological;
    throw ConfigError("unknown split mode '" + s + "' (expected random|chronological)");
}

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    SplitMode mode = SplitMode::Random;
};

struct SplitIndices {
    std::vector<size_t> train;
    std::vector<size_t> test;
};

namespace detail {

/// Uniform draw from [0, bound] via rejection, so the sequence for a given
/// seed is fixed by this code alone. std::uniform_int_distribution is
/// implementation-defined and would tie results to one standard library.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == std::mt19937_64::max()) return rng();
    const std::uint64_t range = bound + 1;
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % range;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % range;
}

/// In-place Fisher-Yates shuffle driven by bounded_draw; deterministic
/// across platforms for a given seed.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    if (items.empty()) return;
    for (size_t i = items.size() - 1; i > 0; --i) {
        const size_t j = static_cast<size_t>(bounded_draw(rng, static_cast<std::uint64_t>(i)));
        std::swap(items[i], items[j]);
    }
}

}  // namespace detail

/// Split row indices [0, n) into train/test. Random mode shuffles with a
/// seeded deterministic Fisher-Yates; chronological mode keeps the
/// dataset's (station, timestamp) order and takes the earliest rows for
/// training. Train size is round(train_fraction * n).
inline SplitIndices split_indices(size_t n, const SplitSpec& spec) {
    if (n < 10) {
        throw TooFewRows("need at least 10 rows to split, got " + std::to_string(n));
    }
    if (!(spec.train_fraction > 0.0) || !(spec.train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie strictly between 0 and 1");
    }
    const size_t n_train =
        static_cast<size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n) {
        throw TooFewRows("split leaves an empty side (n=" + std::to_string(n) +
                         ", train_fraction=" + std::to_string(spec.train_fraction) + ")");
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    if (spec.mode == SplitMode::Random) {
        std::mt19937_64 rng(spec.seed);
        detail::deterministic_shuffle(order, rng);
    }

    SplitIndices out;
    out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return out;
}

/// Chronological mode must not depend on how rows happen to be stored:
/// order rows by timestamp (ties broken by station, then stored order)
/// before cutting. Random mode uses stored order as the shuffle base,
/// which align() fixes to sorted (station, timestamp).
inline SplitIndices split_dataset(const AlignedDataset& ds, const SplitSpec& spec) {
    if (spec.mode == SplitMode::Random) return split_indices(ds.rows.size(), spec);

    const size_t n = ds.rows.size();
    if (n < 10) throw TooFewRows("need at least 10 rows to split, got " + std::to_string(n));
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (ds.rows[a].timestamp != ds.rows[b].timestamp) {
            return ds.rows[a].timestamp < ds.rows[b].timestamp;
        }
        return ds.rows[a].station_id < ds.rows[b].station_id;
    });
    const size_t n_train =
        static_cast<size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n) {
        throw TooFewRows("split leaves an empty side (n=" + std::to_string(n) + ")");
    }
    SplitIndices out;
    out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return out;
}

inline AlignedDataset take_rows(const AlignedDataset& ds, const std::vector<size_t>& idx) {
    AlignedDataset out;
    out.provenance = ds.provenance;
    out.rows.reserve(idx.size());
    for (size_t i : idx) out.rows.push_back(ds.rows.at(i));
    return out;
}

}  // namespace ringpls
