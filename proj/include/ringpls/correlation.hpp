#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "ringpls/common.hpp"

namespace ringpls {

/// Pearson correlation matrix of the columns of `m` (diagonal exactly 1).
/// A constant column has no defined correlation with anything; that is
/// reported rather than silently produced as NaN.
inline Eigen::MatrixXd pearson_matrix(const Eigen::MatrixXd& m) {
    if (m.rows() < 2) {
        throw TooFewRows("need at least 2 rows for correlations, got " +
                         std::to_string(m.rows()));
    }
    const Eigen::MatrixXd centred = m.rowwise() - m.colwise().mean();
    const Eigen::VectorXd norms = centred.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < norms.size(); ++j) {
        if (!(norms(j) > 0.0)) {
            throw ConstantColumn("column " + std::to_string(j) +
                                 " is constant; correlation undefined");
        }
    }
    Eigen::MatrixXd r = centred.transpose() * centred;
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
            r(i, j) = i == j ? 1.0 : r(i, j) / (norms(i) * norms(j));
        }
    }
    return r;
}

/// Correlation between two equal-length vectors.
inline double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ShapeMismatch("pearson: lengths differ");
    if (a.size() < 2) throw TooFewRows("need at least 2 values for a correlation");
    const Eigen::VectorXd ca = a.array() - a.mean();
    const Eigen::VectorXd cb = b.array() - b.mean();
    const double na = ca.norm();
    const double nb = cb.norm();
    if (!(na > 0.0) || !(nb > 0.0)) {
        throw ConstantColumn("constant input; correlation undefined");
    }
    return ca.dot(cb) / (na * nb);
}

}  // namespace ringpls
