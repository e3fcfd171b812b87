#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "ringpls/common.hpp"
#include "ringpls/standardise.hpp"

namespace ringpls {

/// Fitted partial-least-squares regression model (PLS2, NIPALS).
///
/// All matrices live in standardised space; `coefficients` maps z-scored
/// predictors to z-scored responses. Use plsr_predict for original units.
struct PlsrModel {
    int n_components = 0;
    long n_train = 0;

    Standardiser x_standardiser;
    Standardiser y_standardiser;

    Eigen::MatrixXd x_weights;    // W  (p x A), unit-norm columns
    Eigen::MatrixXd x_loadings;   // P  (p x A)
    Eigen::MatrixXd y_loadings;   // Q  (m x A)
    Eigen::MatrixXd x_scores;     // T  (n x A), training scores
    Eigen::MatrixXd y_scores;     // U  (n x A)
    Eigen::MatrixXd coefficients; // B  (p x m), standardised space

    /// Sum of squares of standardised Y captured by each component:
    /// ssy(f) = |t_f|^2 * |q_f|^2. Total Y sum of squares is (n-1)*m.
    Eigen::VectorXd explained_y_variance;

    Eigen::Index n_predictors() const { return x_weights.rows(); }
    Eigen::Index n_responses() const { return y_loadings.rows(); }

    double total_y_sum_squares() const {
        return static_cast<double>(n_train - 1) * static_cast<double>(n_responses());
    }
};

namespace detail {

struct NipalsResult {
    Eigen::MatrixXd W, P, Q, T, U;
    Eigen::VectorXd ssy;
    int extracted = 0;
};

/// What to do when the inner power iteration fails to converge: a strict
/// fit treats it as an error; a best-effort fit stops at the previous
/// component, since non-convergence means the residual cross-covariance no
/// longer singles out one direction (e.g. two tied directions remain).
enum class OnNonConvergence { Throw, Stop };

/// One NIPALS pass over already-standardised matrices. Extracts up to
/// `requested` components, stopping early (without error) when the X
/// residual is numerically exhausted.
inline NipalsResult nipals(Eigen::MatrixXd X, Eigen::MatrixXd Y, int requested,
                           OnNonConvergence policy = OnNonConvergence::Throw) {
    constexpr double kConvergeTol = 1e-10;
    constexpr int kMaxIter = 500;
    constexpr double kRankRelTol = 1e-13;

    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    const Eigen::Index m = Y.cols();
    const double x0_norm = X.norm();
    const double y0_norm = Y.norm();

    NipalsResult r;
    r.W.resize(p, requested);
    r.P.resize(p, requested);
    r.Q.resize(m, requested);
    r.T.resize(n, requested);
    r.U.resize(n, requested);
    r.ssy.resize(requested);

    for (int f = 0; f < requested; ++f) {
        if (X.norm() <= kRankRelTol * x0_norm) break;        // X exhausted
        Eigen::Index start_col = 0;
        const double u0 = Y.colwise().squaredNorm().maxCoeff(&start_col);
        if (std::sqrt(u0) <= kRankRelTol * y0_norm) break;   // Y exhausted

        Eigen::VectorXd u = Y.col(start_col);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd t(n);
        bool exhausted = false;
        bool converged = false;
        for (int iter = 0; iter < kMaxIter; ++iter) {
            Eigen::VectorXd w_new = X.transpose() * u;
            const double wn = w_new.norm();
            if (wn <= 1e-300) { exhausted = true; break; }
            w_new /= wn;
            t = X * w_new;
            Eigen::VectorXd c = Y.transpose() * t;
            const double cn = c.norm();
            if (cn <= 1e-300) { w = w_new; converged = true; break; }
            c /= cn;
            u = Y * c;
            if ((w_new - w).norm() < kConvergeTol) { w = w_new; converged = true; break; }
            w = w_new;
        }
        if (exhausted) break;
        if (!converged) {
            if (policy == OnNonConvergence::Throw) {
                throw ConvergenceFailure("NIPALS did not converge within " +
                                         std::to_string(kMaxIter) +
                                         " iterations at component " +
                                         std::to_string(f + 1));
            }
            break;
        }

        // Canonical sign: the largest-magnitude weight entry is positive.
        Eigen::Index imax = 0;
        w.cwiseAbs().maxCoeff(&imax);
        if (w(imax) < 0.0) w = -w;

        t = X * w;
        const double tt = t.squaredNorm();
        if (tt <= 1e-300) break;
        Eigen::VectorXd p_load = X.transpose() * t / tt;
        Eigen::VectorXd q_load = Y.transpose() * t / tt;
        const double qn = q_load.norm();
        Eigen::VectorXd u_final =
            qn > 1e-300 ? Eigen::VectorXd(Y * q_load / qn) : Eigen::VectorXd::Zero(n);

        r.W.col(f) = w;
        r.P.col(f) = p_load;
        r.Q.col(f) = q_load;
        r.T.col(f) = t;
        r.U.col(f) = u_final;
        r.ssy(f) = tt * q_load.squaredNorm();

        X.noalias() -= t * p_load.transpose();
        Y.noalias() -= t * q_load.transpose();
        r.extracted = f + 1;
    }

    r.W.conservativeResize(p, r.extracted);
    r.P.conservativeResize(p, r.extracted);
    r.Q.conservativeResize(m, r.extracted);
    r.T.conservativeResize(n, r.extracted);
    r.U.conservativeResize(n, r.extracted);
    r.ssy.conservativeResize(r.extracted);
    return r;
}

/// Regression coefficients in standardised space: B = W (P^T W)^-1 Q^T.
inline Eigen::MatrixXd nipals_coefficients(const Eigen::MatrixXd& W, const Eigen::MatrixXd& P,
                                           const Eigen::MatrixXd& Q) {
    if (W.cols() == 0) return Eigen::MatrixXd::Zero(W.rows(), Q.rows());
    const Eigen::MatrixXd PtW = P.transpose() * W;
    return W * PtW.householderQr().solve(Q.transpose());
}

/// Assemble a PlsrModel from a NIPALS pass truncated to `k` components.
inline PlsrModel assemble(const NipalsResult& nip, int k, const Standardiser& sx,
                          const Standardiser& sy, long n_train) {
    PlsrModel model;
    model.n_components = k;
    model.n_train = n_train;
    model.x_standardiser = sx;
    model.y_standardiser = sy;
    model.x_weights = nip.W.leftCols(k);
    model.x_loadings = nip.P.leftCols(k);
    model.y_loadings = nip.Q.leftCols(k);
    model.x_scores = nip.T.leftCols(k);
    model.y_scores = nip.U.leftCols(k);
    model.explained_y_variance = nip.ssy.head(k);
    model.coefficients =
        nipals_coefficients(model.x_weights, model.x_loadings, model.y_loadings);
    return model;
}

inline void check_fit_args(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                           int n_components) {
    if (X.rows() != Y.rows()) {
        throw DimensionMismatch("X has " + std::to_string(X.rows()) + " rows, Y has " +
                                std::to_string(Y.rows()));
    }
    if (X.rows() < 2) throw TooFewRows("need at least 2 rows to fit, got " +
                                       std::to_string(X.rows()));
    const long max_comp = std::min<long>(X.rows() - 1, X.cols());
    if (n_components < 1 || n_components > max_comp) {
        throw ComponentOutOfRange("n_components=" + std::to_string(n_components) +
                                  " outside [1, " + std::to_string(max_comp) +
                                  "] for this data shape");
    }
}

}  // namespace detail

/// Fit on raw matrices; both blocks are z-scored internally. Throws
/// RankDeficient if the data cannot support `n_components` components.
inline PlsrModel plsr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          int n_components) {
    detail::check_fit_args(X, Y, n_components);
    const Standardiser sx = fit_standardiser(X);
    const Standardiser sy = fit_standardiser(Y);
    const auto nip = detail::nipals(sx.transform(X), sy.transform(Y), n_components);
    if (nip.extracted < n_components) {
        throw RankDeficient("could only extract " + std::to_string(nip.extracted) +
                            " of " + std::to_string(n_components) +
                            " requested components (X residual exhausted)");
    }
    return detail::assemble(nip, n_components, sx, sy, X.rows());
}

/// Fit extracting as many components as possible up to `max_components`.
/// Never throws on rank exhaustion or on a non-converging late component;
/// the returned model's n_components reports what was actually extracted.
/// Used by cross-validation, where a fold may not support every candidate.
inline PlsrModel plsr_fit_upto(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                               int max_components, const Standardiser& sx,
                               const Standardiser& sy) {
    if (X.rows() != Y.rows()) {
        throw DimensionMismatch("X has " + std::to_string(X.rows()) + " rows, Y has " +
                                std::to_string(Y.rows()));
    }
    const int cap = static_cast<int>(std::min<long>(
        std::min<long>(X.rows() - 1, X.cols()), max_components));
    const auto nip = detail::nipals(sx.transform(X), sy.transform(Y), std::max(cap, 0),
                                    detail::OnNonConvergence::Stop);
    return detail::assemble(nip, nip.extracted, sx, sy, X.rows());
}

inline PlsrModel plsr_fit_upto(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                               int max_components) {
    return plsr_fit_upto(X, Y, max_components, fit_standardiser(X), fit_standardiser(Y));
}

/// Restrict a fitted model to its first `k` components (coefficients are
/// recomputed). k must not exceed what was extracted.
inline PlsrModel with_components(const PlsrModel& model, int k) {
    if (k < 1 || k > model.n_components) {
        throw ComponentOutOfRange("k=" + std::to_string(k) + " outside [1, " +
                                  std::to_string(model.n_components) + "]");
    }
    PlsrModel out = model;
    out.n_components = k;
    out.x_weights = model.x_weights.leftCols(k);
    out.x_loadings = model.x_loadings.leftCols(k);
    out.y_loadings = model.y_loadings.leftCols(k);
    out.x_scores = model.x_scores.leftCols(k);
    out.y_scores = model.y_scores.leftCols(k);
    out.explained_y_variance = model.explained_y_variance.head(k);
    out.coefficients =
        detail::nipals_coefficients(out.x_weights, out.x_loadings, out.y_loadings);
    return out;
}

/// Predict responses in original units for raw predictor rows.
inline Eigen::MatrixXd plsr_predict(const PlsrModel& model, const Eigen::MatrixXd& X) {
    const Eigen::MatrixXd z = model.x_standardiser.transform(X);
    return model.y_standardiser.inverse(z * model.coefficients);
}

/// Predict in standardised response space (for standardised-unit metrics).
inline Eigen::MatrixXd plsr_predict_standardised(const PlsrModel& model,
                                                 const Eigen::MatrixXd& X) {
    return model.x_standardiser.transform(X) * model.coefficients;
}

/// Project raw predictor rows onto the model's score space:
/// T = Z W (P^T W)^-1.
inline Eigen::MatrixXd plsr_scores(const PlsrModel& model, const Eigen::MatrixXd& X) {
    const Eigen::MatrixXd z = model.x_standardiser.transform(X);
    const Eigen::MatrixXd PtW = model.x_loadings.transpose() * model.x_weights;
    return z * model.x_weights *
           Eigen::MatrixXd(PtW.householderQr().solve(
               Eigen::MatrixXd::Identity(PtW.rows(), PtW.cols())));
}

}  // namespace ringpls
