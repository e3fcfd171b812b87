#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ringpls/common.hpp"
#include "ringpls/plsr.hpp"

namespace ringpls {

struct ComponentWeight {
    std::string name;
    double weight = 0.0;
};

/// What one latent component is made of: its predictor weights ordered by
/// magnitude, and the share of response variation it carries.
struct ComponentReport {
    int component = 0;            // 1-based
    double explained_y_share = 0.0;  // ssy_f / sum_f ssy_f
    std::vector<ComponentWeight> weights;  // |weight| descending
};

inline ComponentReport component_weight_report(const PlsrModel& model,
                                               const std::vector<std::string>& names,
                                               int component) {
    if (component < 1 || component > model.n_components) {
        throw ComponentOutOfRange("component " + std::to_string(component) +
                                  " outside [1, " + std::to_string(model.n_components) + "]");
    }
    if (static_cast<Eigen::Index>(names.size()) != model.n_predictors()) {
        throw ShapeMismatch("component_weight_report: name count mismatch");
    }
    ComponentReport r;
    r.component = component;
    const double total = model.explained_y_variance.sum();
    r.explained_y_share =
        total > 0.0 ? model.explained_y_variance(component - 1) / total : 0.0;
    r.weights.resize(names.size());
    for (size_t j = 0; j < names.size(); ++j) {
        r.weights[j] = {names[j],
                        model.x_weights(static_cast<Eigen::Index>(j), component - 1)};
    }
    std::stable_sort(r.weights.begin(), r.weights.end(),
                     [](const ComponentWeight& a, const ComponentWeight& b) {
                         const double ma = std::abs(a.weight);
                         const double mb = std::abs(b.weight);
                         if (ma != mb) return ma > mb;
                         return a.name < b.name;
                     });
    return r;
}

}  // namespace ringpls
