#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringpls/common.hpp"
#include "ringpls/plsr.hpp"

namespace ringpls {

/// Variable-importance-in-projection scores. With J predictors, weights
/// w_f (unit norm) and per-component explained response sums of squares
/// s_f, the importance of predictor j is
///
///   VIP_j = sqrt( J * sum_f w_jf^2 * s_f / sum_f s_f ).
///
/// Because each weight column has unit norm, sum_j VIP_j^2 = J under this
/// normalisation. Setting `denominator_total_y_variance` divides by the
/// full response sum of squares (n-1)*m instead of the explained part;
/// scores then shrink uniformly and no longer average to 1.
struct VipOptions {
    bool denominator_total_y_variance = false;
};

inline Eigen::VectorXd vip_scores(const PlsrModel& model, const VipOptions& opt = {}) {
    const Eigen::Index J = model.n_predictors();
    const Eigen::VectorXd& s = model.explained_y_variance;
    const double explained = s.sum();
    if (!(explained > 0.0)) {
        throw DegenerateModel("model explains none of the response variance; "
                              "VIP scores are undefined");
    }
    const double denom =
        opt.denominator_total_y_variance ? model.total_y_sum_squares() : explained;
    if (!(denom > 0.0)) throw DegenerateModel("VIP denominator is not positive");

    Eigen::VectorXd out(J);
    for (Eigen::Index j = 0; j < J; ++j) {
        double acc = 0.0;
        for (Eigen::Index f = 0; f < s.size(); ++f) {
            const double w = model.x_weights(j, f);
            acc += w * w * s(f);
        }
        out(j) = std::sqrt(static_cast<double>(J) * acc / denom);
    }
    return out;
}

struct VipEntry {
    std::string name;
    double score = 0.0;
};

/// VIP scores paired with predictor names, sorted descending by score
/// (ties keep name order, so output is fully deterministic).
inline std::vector<VipEntry> vip_ranking(const PlsrModel& model,
                                         const std::vector<std::string>& names,
                                         const VipOptions& opt = {}) {
    const Eigen::VectorXd v = vip_scores(model, opt);
    if (static_cast<Eigen::Index>(names.size()) != v.size()) {
        throw ShapeMismatch("vip_ranking: name count does not match predictors");
    }
    std::vector<VipEntry> out(names.size());
    for (size_t j = 0; j < names.size(); ++j) {
        out[j] = {names[j], v(static_cast<Eigen::Index>(j))};
    }
    std::stable_sort(out.begin(), out.end(), [](const VipEntry& a, const VipEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.name < b.name;
    });
    return out;
}

}  // namespace ringpls
