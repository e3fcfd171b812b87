#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringpls/common.hpp"
#include "ringpls/metrics.hpp"
#include "ringpls/plsr.hpp"
#include "ringpls/split.hpp"
#include "ringpls/standardise.hpp"

namespace ringpls {

struct CvSpec {
    int n_folds = 5;
    std::vector<int> candidates;  // component counts to score
    std::uint64_t seed = 0;
    /// When true, z-scoring is fitted once on the full input and reused in
    /// every fold (standardise-then-split, as some published pipelines do).
    /// The default refits scaling inside each fold, which is leak-free.
    bool paper_faithful_standardisation = false;
};

struct CvReport {
    std::vector<int> candidates;      // ascending, deduplicated
    std::vector<size_t> fold_sizes;   // validation rows per fold
    Eigen::MatrixXd fold_rmse;        // n_folds x n_candidates, standardised units
    Eigen::VectorXd mean_rmse;        // per candidate, equal fold weights
    /// Per candidate: folds where the fold's data supported fewer
    /// components than requested, so the truncated model was scored.
    std::vector<int> truncated_folds;
    int selected = 0;                 // smallest candidate with minimal mean RMSE
};

/// K-fold cross-validation over candidate component counts. Rows are
/// shuffled deterministically by seed and dealt round-robin into folds.
/// Scores are pooled standardised-unit RMSEs; ties in the mean go to the
/// smallest component count.
inline CvReport kfold_cv(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                         const CvSpec& spec) {
    if (spec.n_folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    if (spec.candidates.empty()) throw ConfigError("no candidate component counts given");
    for (int k : spec.candidates) {
        if (k < 1) throw ConfigError("candidate component counts must be positive");
    }
    if (X.rows() != Y.rows()) throw DimensionMismatch("kfold_cv: X and Y row counts differ");
    const size_t n = static_cast<size_t>(X.rows());
    if (n < 2 * static_cast<size_t>(spec.n_folds)) {
        throw FoldTooSmall("need at least 2 rows per fold: " + std::to_string(n) +
                           " rows across " + std::to_string(spec.n_folds) + " folds");
    }

    CvReport report;
    report.candidates = spec.candidates;
    std::sort(report.candidates.begin(), report.candidates.end());
    report.candidates.erase(
        std::unique(report.candidates.begin(), report.candidates.end()),
        report.candidates.end());
    const int n_cand = static_cast<int>(report.candidates.size());
    const int max_candidate = report.candidates.back();

    // Deal shuffled row indices into folds round-robin.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::mt19937_64 rng(spec.seed);
    detail::deterministic_shuffle(order, rng);
    std::vector<std::vector<size_t>> folds(static_cast<size_t>(spec.n_folds));
    for (size_t i = 0; i < n; ++i) {
        folds[i % static_cast<size_t>(spec.n_folds)].push_back(order[i]);
    }

    Standardiser shared_sx, shared_sy;
    if (spec.paper_faithful_standardisation) {
        shared_sx = fit_standardiser(X);
        shared_sy = fit_standardiser(Y);
    }

    report.fold_rmse.resize(spec.n_folds, n_cand);
    report.truncated_folds.assign(static_cast<size_t>(n_cand), 0);

    for (int f = 0; f < spec.n_folds; ++f) {
        const auto& val_idx = folds[static_cast<size_t>(f)];
        report.fold_sizes.push_back(val_idx.size());
        std::vector<size_t> train_idx;
        train_idx.reserve(n - val_idx.size());
        for (int g = 0; g < spec.n_folds; ++g) {
            if (g == f) continue;
            const auto& fold = folds[static_cast<size_t>(g)];
            train_idx.insert(train_idx.end(), fold.begin(), fold.end());
        }

        Eigen::MatrixXd x_tr(train_idx.size(), X.cols());
        Eigen::MatrixXd y_tr(train_idx.size(), Y.cols());
        for (size_t i = 0; i < train_idx.size(); ++i) {
            x_tr.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(train_idx[i]));
            y_tr.row(static_cast<Eigen::Index>(i)) = Y.row(static_cast<Eigen::Index>(train_idx[i]));
        }
        Eigen::MatrixXd x_val(val_idx.size(), X.cols());
        Eigen::MatrixXd y_val(val_idx.size(), Y.cols());
        for (size_t i = 0; i < val_idx.size(); ++i) {
            x_val.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(val_idx[i]));
            y_val.row(static_cast<Eigen::Index>(i)) = Y.row(static_cast<Eigen::Index>(val_idx[i]));
        }

        const PlsrModel full =
            spec.paper_faithful_standardisation
                ? plsr_fit_upto(x_tr, y_tr, max_candidate, shared_sx, shared_sy)
                : plsr_fit_upto(x_tr, y_tr, max_candidate);
        const Eigen::MatrixXd z_truth = full.y_standardiser.transform(y_val);

        std::map<int, double> rmse_by_effective;
        for (int c = 0; c < n_cand; ++c) {
            const int k = report.candidates[static_cast<size_t>(c)];
            const int k_eff = std::min(k, full.n_components);
            if (k_eff < k) ++report.truncated_folds[static_cast<size_t>(c)];
            auto it = rmse_by_effective.find(k_eff);
            if (it == rmse_by_effective.end()) {
                const PlsrModel m =
                    k_eff == full.n_components ? full : with_components(full, k_eff);
                const double v =
                    rmse_all(z_truth, plsr_predict_standardised(m, x_val));
                it = rmse_by_effective.emplace(k_eff, v).first;
            }
            report.fold_rmse(f, c) = it->second;
        }
    }

    // Summed in a fixed order, one column at a time: candidates truncated
    // to the same effective count carry bitwise-equal fold scores, and the
    // tie-break below only works if their means stay bitwise equal too
    // (a vectorised reduction may reassociate differently per column).
    report.mean_rmse.resize(n_cand);
    for (int c = 0; c < n_cand; ++c) {
        double sum = 0.0;
        for (int f = 0; f < spec.n_folds; ++f) sum += report.fold_rmse(f, c);
        report.mean_rmse(c) = sum / spec.n_folds;
    }
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < report.mean_rmse.size(); ++c) {
        if (report.mean_rmse(c) < report.mean_rmse(best)) best = c;
    }
    report.selected = report.candidates[static_cast<size_t>(best)];
    return report;
}

/// The end-to-end selection-and-retrain step: cross-validate on the
/// training block, then refit strictly at the chosen component count on
/// all of it.
struct TrainResult {
    CvReport cv;
    PlsrModel model;
};

inline TrainResult train_final(const Eigen::MatrixXd& x_train, const Eigen::MatrixXd& y_train,
                               const CvSpec& spec) {
    TrainResult out;
    out.cv = kfold_cv(x_train, y_train, spec);
    out.model = plsr_fit(x_train, y_train, out.cv.selected);
    return out;
}

}  // namespace ringpls
