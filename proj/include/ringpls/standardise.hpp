#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ringpls/common.hpp"

namespace ringpls {

/// Column-wise z-score transform fitted on one matrix and applied to others.
/// Standard deviations use the n-1 divisor.
struct Standardiser {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;

    Eigen::Index cols() const { return mean.size(); }

    Eigen::MatrixXd transform(const Eigen::MatrixXd& m) const {
        if (m.cols() != mean.size()) {
            throw DimensionMismatch("standardiser fitted on " + std::to_string(mean.size()) +
                                    " columns, given " + std::to_string(m.cols()));
        }
        return (m.rowwise() - mean.transpose()).array().rowwise() /
               stddev.transpose().array();
    }

    Eigen::MatrixXd inverse(const Eigen::MatrixXd& z) const {
        if (z.cols() != mean.size()) {
            throw DimensionMismatch("standardiser fitted on " + std::to_string(mean.size()) +
                                    " columns, given " + std::to_string(z.cols()));
        }
        return (z.array().rowwise() * stddev.transpose().array()).matrix().rowwise() +
               mean.transpose();
    }
};

/// Fit column means and n-1 standard deviations. A column whose deviation is
/// zero (to within rounding of its own magnitude) cannot be scaled to unit
/// variance; that is a data problem the caller must hear about.
inline Standardiser fit_standardiser(const Eigen::MatrixXd& m) {
    if (m.rows() < 2) {
        throw TooFewRows("need at least 2 rows to standardise, got " + std::to_string(m.rows()));
    }
    Standardiser s;
    s.mean = m.colwise().mean().transpose();
    Eigen::MatrixXd centred = m.rowwise() - s.mean.transpose();
    s.stddev = (centred.array().square().colwise().sum() /
                static_cast<double>(m.rows() - 1))
                   .sqrt()
                   .matrix()
                   .transpose();
    for (Eigen::Index j = 0; j < s.stddev.size(); ++j) {
        const double eps = 1e-12 * (1.0 + std::abs(s.mean(j)));
        if (!(s.stddev(j) > eps)) {
            throw ZeroVariance("column " + std::to_string(j) +
                               " has (near-)zero variance; cannot standardise");
        }
    }
    return s;
}

}  // namespace ringpls
