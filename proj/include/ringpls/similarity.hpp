#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringpls/common.hpp"

namespace ringpls {

struct Chi2Options {
    int n_bins = 20;
    /// Z-score each sample's columns by that sample's own mean and
    /// deviation before binning, so the comparison sees distribution
    /// shape rather than location or scale. (Equal-width bins over the
    /// pooled range are affine-equivariant, so a *shared* transform would
    /// change nothing; per-sample scoring is what makes this distinct.)
    bool standardised = false;
};

struct VariableChi2 {
    std::string name;
    double chi2 = 0.0;
    double weight = 0.0;   // VIP_j / max VIP
    double weighted = 0.0; // weight * chi2
    /// True when the variable offered no usable spread (pooled range of
    /// width zero, or a constant column under per-sample z-scoring); its
    /// term contributes 0 and is flagged rather than invented.
    bool degenerate = false;
};

struct SimilarityScore {
    double score = 0.0;  // sum over variables of weight * chi2
    std::vector<VariableChi2> per_variable;
};

namespace detail {

inline void chi2_histogram(const Eigen::VectorXd& v, double lo, double hi, int n_bins,
                           std::vector<long>& out) {
    out.assign(static_cast<size_t>(n_bins), 0);
    const double width = hi - lo;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        int b = static_cast<int>(std::floor((v(i) - lo) / width * n_bins));
        b = std::clamp(b, 0, n_bins - 1);  // the maximum lands in the last bin
        ++out[static_cast<size_t>(b)];
    }
}

inline bool zscore_column(Eigen::VectorXd& v) {
    const double mean = v.mean();
    const double ss = (v.array() - mean).square().sum();
    if (v.size() < 2) return false;
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    if (!(sd > 0.0)) return false;
    v = (v.array() - mean) / sd;
    return true;
}

}  // namespace detail

/// Two-sample chi-square distance between the column distributions of `a`
/// and `b`, weighted per variable by normalised VIP scores. For variable j
/// the values of both samples are pooled, the pooled [min, max] is cut
/// into equal-width bins, and with observed bin counts O_u, O_v and sample
/// sizes N_u, N_v the expected counts under "same distribution" are
///
///   E_u(k) = (O_u(k) + O_v(k)) / (N_u + N_v) * N_u    (likewise for v),
///
/// giving chi2_j = sum_k [ (O_u-E_u)^2/E_u + (O_v-E_v)^2/E_v ] over bins
/// with nonzero pooled count. The station score is sum_j VIP_j/max(VIP) *
/// chi2_j: symmetric in its arguments and exactly zero when they hold the
/// same rows.
inline SimilarityScore weighted_chi2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                     const Eigen::VectorXd& vip,
                                     const std::vector<std::string>& names,
                                     const Chi2Options& opt = {}) {
    if (a.cols() != b.cols()) throw ShapeMismatch("weighted_chi2: column counts differ");
    if (vip.size() != a.cols()) throw ShapeMismatch("weighted_chi2: VIP length mismatch");
    if (static_cast<Eigen::Index>(names.size()) != a.cols()) {
        throw ShapeMismatch("weighted_chi2: name count mismatch");
    }
    if (a.rows() == 0 || b.rows() == 0) throw ShapeMismatch("weighted_chi2: empty sample");
    if (opt.n_bins < 2) throw ConfigError("chi-square binning needs at least 2 bins");
    const double vip_max = vip.maxCoeff();
    if (!(vip_max > 0.0)) {
        throw DegenerateModel("all VIP scores are zero; weights undefined");
    }

    const double n_u = static_cast<double>(a.rows());
    const double n_v = static_cast<double>(b.rows());
    SimilarityScore result;
    std::vector<long> obs_u, obs_v;

    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        VariableChi2 var;
        var.name = names[static_cast<size_t>(j)];
        var.weight = vip(j) / vip_max;

        Eigen::VectorXd col_u = a.col(j);
        Eigen::VectorXd col_v = b.col(j);
        bool usable = true;
        if (opt.standardised) {
            usable = detail::zscore_column(col_u) && detail::zscore_column(col_v);
        }
        double lo = 0.0, hi = 0.0;
        if (usable) {
            lo = std::min(col_u.minCoeff(), col_v.minCoeff());
            hi = std::max(col_u.maxCoeff(), col_v.maxCoeff());
            usable = hi > lo;
        }
        if (!usable) {
            var.degenerate = true;
            result.per_variable.push_back(std::move(var));
            continue;
        }

        detail::chi2_histogram(col_u, lo, hi, opt.n_bins, obs_u);
        detail::chi2_histogram(col_v, lo, hi, opt.n_bins, obs_v);
        double chi2 = 0.0;
        for (int k = 0; k < opt.n_bins; ++k) {
            const double pooled =
                static_cast<double>(obs_u[static_cast<size_t>(k)] +
                                    obs_v[static_cast<size_t>(k)]);
            if (pooled == 0.0) continue;
            // Multiply before dividing: for identical samples the numerator
            // is then an exact multiple of the denominator, so the expected
            // counts equal the observed ones and the statistic is exactly 0.
            const double e_u = pooled * n_u / (n_u + n_v);
            const double e_v = pooled * n_v / (n_u + n_v);
            const double d_u = static_cast<double>(obs_u[static_cast<size_t>(k)]) - e_u;
            const double d_v = static_cast<double>(obs_v[static_cast<size_t>(k)]) - e_v;
            chi2 += d_u * d_u / e_u + d_v * d_v / e_v;
        }
        var.chi2 = chi2;
        var.weighted = var.weight * chi2;
        result.score += var.weighted;
        result.per_variable.push_back(std::move(var));
    }
    return result;
}

struct StationSimilarity {
    std::string station_id;
    double score = 0.0;
};

/// Score every candidate station against a reference sample and order
/// them most-similar (smallest score) first; exact ties keep id order so
/// the ranking is reproducible.
inline std::vector<StationSimilarity> rank_similarity(
    const Eigen::MatrixXd& reference,
    const std::vector<std::pair<std::string, Eigen::MatrixXd>>& candidates,
    const Eigen::VectorXd& vip, const std::vector<std::string>& names,
    const Chi2Options& opt = {}) {
    std::vector<StationSimilarity> out;
    out.reserve(candidates.size());
    for (const auto& [id, sample] : candidates) {
        out.push_back({id, weighted_chi2(reference, sample, vip, names, opt).score});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const StationSimilarity& x, const StationSimilarity& y) {
                         if (x.score != y.score) return x.score < y.score;
                         return x.station_id < y.station_id;
                     });
    return out;
}

}  // namespace ringpls
