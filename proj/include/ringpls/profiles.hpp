#pragma once

#include <array>
#include <string>

#include "ringpls/common.hpp"
#include "ringpls/time.hpp"

namespace ringpls {

/// Mean value per hour of day (0-23). Hours never observed stay absent;
/// an absent hour is not a zero and asking for its mean is an error, so a
/// sparse day cannot masquerade as a quiet one.
class HourlyProfile {
public:
    void add(const CivilHour& ts, double value) { add(ts.hour, value); }

    void add(int hour, double value) {
        check(hour);
        sum_[static_cast<size_t>(hour)] += value;
        ++count_[static_cast<size_t>(hour)];
    }

    long count(int hour) const {
        check(hour);
        return count_[static_cast<size_t>(hour)];
    }

    bool has(int hour) const { return count(hour) > 0; }

    double mean(int hour) const {
        check(hour);
        const long c = count_[static_cast<size_t>(hour)];
        if (c == 0) {
            throw Error("hour " + std::to_string(hour) + " has no observations");
        }
        return sum_[static_cast<size_t>(hour)] / static_cast<double>(c);
    }

private:
    static void check(int hour) {
        if (hour < 0 || hour > 23) {
            throw Error("hour " + std::to_string(hour) + " outside [0, 23]");
        }
    }

    std::array<double, 24> sum_{};
    std::array<long, 24> count_{};
};

}  // namespace ringpls
