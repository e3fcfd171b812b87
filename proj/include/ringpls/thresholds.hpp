#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ringpls/common.hpp"
#include "ringpls/pollution.hpp"

namespace ringpls {

/// Air-quality alert thresholds. A value triggers only when it strictly
/// exceeds its threshold; a missing value never triggers.
struct ThresholdPolicy {
    double ozone_ppb = 155.0;
    double pm10_ugm3 = 214.0;
    double pm25_ugm3 = 97.4;

    void validate() const {
        if (!(ozone_ppb > 0.0) || !(pm10_ugm3 > 0.0) || !(pm25_ugm3 > 0.0)) {
            throw ConfigError("alert thresholds must be positive");
        }
    }
};

struct ExceedanceFlags {
    bool ozone = false;
    bool pm10 = false;
    bool pm25 = false;

    bool any() const { return ozone || pm10 || pm25; }
};

/// Flags for one observation. Null entries (nullopt) never flag: absence
/// of a measurement is not evidence of an exceedance.
inline ExceedanceFlags exceedance_flags(std::optional<double> pm10,
                                        std::optional<double> pm25,
                                        std::optional<double> ozone,
                                        const ThresholdPolicy& policy = {}) {
    ExceedanceFlags f;
    f.ozone = ozone.has_value() && *ozone > policy.ozone_ppb;
    f.pm10 = pm10.has_value() && *pm10 > policy.pm10_ugm3;
    f.pm25 = pm25.has_value() && *pm25 > policy.pm25_ugm3;
    return f;
}

inline ExceedanceFlags exceedance_flags(const PollutionRecord& rec,
                                        const ThresholdPolicy& policy = {}) {
    const int i_pm10 = pollutant_index("PM10");
    const int i_pm25 = pollutant_index("PM2.5");
    const int i_o3 = pollutant_index("O3");
    const auto field = [&](int i) -> std::optional<double> {
        if (rec.null_mask[static_cast<size_t>(i)]) return std::nullopt;
        return rec.values[static_cast<size_t>(i)];
    };
    return exceedance_flags(field(i_pm10), field(i_pm25), field(i_o3), policy);
}

}  // namespace ringpls
