#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringpls/common.hpp"
#include "ringpls/plsr.hpp"
#include "ringpls/pollution.hpp"

namespace ringpls {

inline double rmse(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
    if (truth.size() != pred.size()) {
        throw ShapeMismatch("rmse: truth has " + std::to_string(truth.size()) +
                            " entries, prediction has " + std::to_string(pred.size()));
    }
    if (truth.size() == 0) throw ShapeMismatch("rmse of empty vectors is undefined");
    return std::sqrt((truth - pred).squaredNorm() / static_cast<double>(truth.size()));
}

/// Per-column RMSE for matrix-valued truth/prediction pairs.
inline Eigen::VectorXd rmse_columns(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& pred) {
    if (truth.rows() != pred.rows() || truth.cols() != pred.cols()) {
        throw ShapeMismatch("rmse_columns: shapes differ");
    }
    if (truth.rows() == 0) throw ShapeMismatch("rmse of empty matrices is undefined");
    return ((truth - pred).array().square().colwise().mean()).sqrt().matrix().transpose();
}

/// Pooled RMSE across all cells of a matrix pair.
inline double rmse_all(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& pred) {
    if (truth.rows() != pred.rows() || truth.cols() != pred.cols()) {
        throw ShapeMismatch("rmse_all: shapes differ");
    }
    if (truth.size() == 0) throw ShapeMismatch("rmse of empty matrices is undefined");
    return std::sqrt((truth - pred).array().square().mean());
}

/// Held-out evaluation of a fitted model.
struct EvalReport {
    long n_rows = 0;
    /// Original-units RMSE per response column.
    Eigen::VectorXd rmse_per_response;
    /// RMSE pooled over all responses, in standardised units (the model's
    /// training-set response scaling), so columns are comparable.
    double rmse_standardised = 0.0;
    /// Training-set pooled standardised RMSE, reconstructed from the
    /// model's explained Y sums of squares.
    double train_rmse_standardised = 0.0;
    /// rmse_standardised / train_rmse_standardised: values well above 1
    /// indicate the fit does not transfer (overtraining).
    double overtraining_ratio = 0.0;
};

/// The model's training residual in standardised units is recoverable
/// without the training responses: total SS of z-scored Y is (n-1)*m and
/// each component removes ssy(f), so
///   train RMSE = sqrt(((n-1)*m - sum_f ssy(f)) / (n*m)).
inline double train_rmse_standardised(const PlsrModel& model) {
    const double total = model.total_y_sum_squares();
    const double explained = model.explained_y_variance.sum();
    const double resid = std::max(0.0, total - explained);
    return std::sqrt(resid / (static_cast<double>(model.n_train) *
                              static_cast<double>(model.n_responses())));
}

inline EvalReport evaluate(const PlsrModel& model, const Eigen::MatrixXd& x_test,
                           const Eigen::MatrixXd& y_test) {
    if (x_test.rows() == 0) throw EmptyTest("evaluation set has no rows");
    if (x_test.rows() != y_test.rows()) {
        throw ShapeMismatch("evaluate: X and Y row counts differ");
    }
    EvalReport r;
    r.n_rows = x_test.rows();
    const Eigen::MatrixXd pred = plsr_predict(model, x_test);
    r.rmse_per_response = rmse_columns(y_test, pred);
    const Eigen::MatrixXd z_truth = model.y_standardiser.transform(y_test);
    const Eigen::MatrixXd z_pred = plsr_predict_standardised(model, x_test);
    r.rmse_standardised = rmse_all(z_truth, z_pred);
    r.train_rmse_standardised = train_rmse_standardised(model);
    r.overtraining_ratio = r.train_rmse_standardised > 0.0
                               ? r.rmse_standardised / r.train_rmse_standardised
                               : std::numeric_limits<double>::infinity();
    return r;
}

/// Column-wise comparison of the model-building sample against the
/// validation sample: how much of each validation [min, max] range the
/// training range covers. 1 when validation lies inside training, 0 when
/// the ranges are disjoint. Deliberately asymmetric — the question is
/// whether predictions on the validation set extrapolate.
struct RangeComparison {
    std::vector<std::string> names;
    Eigen::VectorXd min_train, max_train, min_validation, max_validation;
    Eigen::VectorXd overlap_fraction;
    /// Variables with coverage below the threshold (default 0.9): the
    /// model extrapolates on these.
    std::vector<std::string> flagged;
    double threshold = 0.9;
};

inline RangeComparison compare_ranges(const Eigen::MatrixXd& train,
                                      const Eigen::MatrixXd& validation,
                                      const std::vector<std::string>& names,
                                      double threshold = 0.9) {
    if (train.cols() != validation.cols()) {
        throw ShapeMismatch("compare_ranges: column counts differ");
    }
    if (static_cast<Eigen::Index>(names.size()) != train.cols()) {
        throw ShapeMismatch("compare_ranges: name count does not match columns");
    }
    if (train.rows() == 0 || validation.rows() == 0) {
        throw ShapeMismatch("compare_ranges: empty sample");
    }
    RangeComparison r;
    r.names = names;
    r.threshold = threshold;
    r.min_train = train.colwise().minCoeff().transpose();
    r.max_train = train.colwise().maxCoeff().transpose();
    r.min_validation = validation.colwise().minCoeff().transpose();
    r.max_validation = validation.colwise().maxCoeff().transpose();
    r.overlap_fraction.resize(train.cols());
    for (Eigen::Index j = 0; j < train.cols(); ++j) {
        const double lo = std::max(r.min_train(j), r.min_validation(j));
        const double hi = std::min(r.max_train(j), r.max_validation(j));
        const double val_len = r.max_validation(j) - r.min_validation(j);
        double frac;
        if (val_len <= 0.0) {
            // Validation range is a single point: either training covers it or not.
            frac = (r.min_validation(j) >= r.min_train(j) &&
                    r.min_validation(j) <= r.max_train(j))
                       ? 1.0
                       : 0.0;
        } else {
            frac = std::max(0.0, hi - lo) / val_len;
        }
        r.overlap_fraction(j) = frac;
        if (frac < threshold) r.flagged.push_back(names[static_cast<size_t>(j)]);
    }
    return r;
}

}  // namespace ringpls
