// Shared fixtures for the test binaries: deterministic random matrices and
// an independent least-squares oracle the PLS implementation is checked
// against. The oracle deliberately uses a different algorithm (complete
// orthogonal decomposition) from anything in the library.
#pragma once

#include <random>

#include <Eigen/Dense>

namespace testhelp {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Box-Muller, independent of any library RNG so tests cannot inherit a
/// library bug through shared sampling code.
inline double gauss(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

inline Eigen::MatrixXd gauss_matrix(std::mt19937_64& rng, Eigen::Index rows,
                                    Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    }
    return m;
}

/// Minimum-norm least squares on already-standardised matrices.
inline Eigen::MatrixXd ols_coefficients(const Eigen::MatrixXd& xs,
                                        const Eigen::MatrixXd& ys) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(xs);
    return cod.solve(ys);
}

/// Sign convention used by the model's weight vectors: the entry with the
/// largest magnitude is positive. Applied to oracle vectors before comparing.
inline Eigen::VectorXd canonical_sign(Eigen::VectorXd v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > best) {
            best = std::abs(v(i));
            imax = i;
        }
    }
    if (v(imax) < 0.0) v = -v;
    return v;
}

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double denom = std::max(1e-300, b.norm());
    return (a - b).norm() / denom;
}

}  // namespace testhelp
