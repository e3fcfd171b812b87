#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringpls/common.hpp"

namespace ringpls {

enum class BiasBand { Small, Moderate, Large };

inline std::string to_string(BiasBand b) {
    switch (b) {
        case BiasBand::Small: return "small";
        case BiasBand::Moderate: return "moderate";
        default: return "large";
    }
}

/// Per-response residual diagnostics: how big is the systematic error,
/// and do the residuals look Gaussian?
struct ResidualDiagnostics {
    std::string name;
    double bias = 0.0;               // mean(prediction - truth), original units
    double bias_in_truth_sd = 0.0;   // bias / sd(truth)
    BiasBand bias_band = BiasBand::Small;  // |bias| vs truth sd: <1, 1-2, >2
    double residual_std = 0.0;       // n-1 deviation of residuals
    double skewness = 0.0;           // population moment ratio m3 / m2^1.5
    double excess_kurtosis = 0.0;    // m4 / m2^2 - 3
    double jarque_bera = 0.0;        // n/6 * (S^2 + K^2/4)
    /// Jarque-Bera compared with the chi-square(2) 95% point, 5.991:
    /// true means normality is *not* rejected at the 5% level.
    bool normal_at_5pct = false;
};

inline constexpr double kJarqueBeraCritical5pct = 5.991;

inline std::vector<ResidualDiagnostics> residual_diagnostics(
    const Eigen::MatrixXd& truth, const Eigen::MatrixXd& pred,
    const std::vector<std::string>& names) {
    if (truth.rows() != pred.rows() || truth.cols() != pred.cols()) {
        throw ShapeMismatch("residual_diagnostics: shapes differ");
    }
    if (static_cast<Eigen::Index>(names.size()) != truth.cols()) {
        throw ShapeMismatch("residual_diagnostics: name count mismatch");
    }
    const Eigen::Index n = truth.rows();
    if (n < 3) throw TooFewRows("need at least 3 rows for residual diagnostics");

    std::vector<ResidualDiagnostics> out;
    out.reserve(names.size());
    for (Eigen::Index j = 0; j < truth.cols(); ++j) {
        ResidualDiagnostics d;
        d.name = names[static_cast<size_t>(j)];
        const Eigen::VectorXd res = pred.col(j) - truth.col(j);
        d.bias = res.mean();

        const double truth_mean = truth.col(j).mean();
        const double truth_sd = std::sqrt(
            (truth.col(j).array() - truth_mean).square().sum() / static_cast<double>(n - 1));
        if (!(truth_sd > 0.0)) {
            throw ConstantColumn("response '" + d.name + "' is constant in the truth set");
        }
        d.bias_in_truth_sd = d.bias / truth_sd;
        const double abs_b = std::abs(d.bias_in_truth_sd);
        d.bias_band = abs_b < 1.0 ? BiasBand::Small
                      : abs_b <= 2.0 ? BiasBand::Moderate
                                     : BiasBand::Large;

        const Eigen::ArrayXd centred = res.array() - d.bias;
        const double m2 = centred.square().mean();
        d.residual_std =
            std::sqrt(centred.square().sum() / static_cast<double>(n - 1));
        if (m2 > 0.0) {
            const double m3 = centred.cube().mean();
            const double m4 = centred.square().square().mean();
            d.skewness = m3 / std::pow(m2, 1.5);
            d.excess_kurtosis = m4 / (m2 * m2) - 3.0;
        } else {
            d.skewness = 0.0;
            d.excess_kurtosis = 0.0;  // all residuals identical
        }
        d.jarque_bera = static_cast<double>(n) / 6.0 *
                        (d.skewness * d.skewness +
                         d.excess_kurtosis * d.excess_kurtosis / 4.0);
        d.normal_at_5pct = d.jarque_bera < kJarqueBeraCritical5pct;
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace ringpls
