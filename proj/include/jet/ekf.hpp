#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "jet/errors.hpp"

namespace jet {

/**
 * @brief Discrete extended Kalman filter state.
 *
 * x is the state mean, P the estimation-error covariance, Q/R the
 * process/measurement noise covariances. A step never mutates its input:
 * it returns a new instance, so instances can be shared across threads
 * and replayed deterministically.
 */
struct EkfInstance {
    Eigen::VectorXd x;
    Eigen::MatrixXd P;
    Eigen::MatrixXd Q;
    Eigen::MatrixXd R;
    double dt = 0.0;

    void validate() const {
        const auto n = x.size();
        if (P.rows() != n || P.cols() != n || Q.rows() != n || Q.cols() != n)
            throw std::invalid_argument("EkfInstance: dimension mismatch");
        if (R.rows() != R.cols())
            throw std::invalid_argument("EkfInstance: R must be square");
        if (!(dt > 0)) throw std::invalid_argument("EkfInstance: dt must be > 0");
        if (!x.allFinite() || !P.allFinite())
            throw std::invalid_argument("EkfInstance: non-finite state or covariance");
        if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + P.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("EkfInstance: covariance not symmetric");
    }
};

/// Full discrete state transition x_{k+1} = f(x_k, u_k).
using TransitionFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
/// Measurement map y_k = h(x_k).
using MeasurementFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

namespace detail {

/// Central-difference Jacobian, step 1e-6 * max(1, |x_i|) per component.
/// Divides by the actually representable step xp - xm, which keeps the
/// derivative of affine maps exact to rounding.
template <typename Fn>
Eigen::MatrixXd fd_jacobian(const Fn& fn, const Eigen::VectorXd& x) {
    const Eigen::VectorXd y0 = fn(x);
    Eigen::MatrixXd jac(y0.size(), x.size());
    Eigen::VectorXd xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double step = 1e-6 * std::max(1.0, std::abs(x(i)));
        xp(i) = x(i) + step;
        xm(i) = x(i) - step;
        jac.col(i) = (fn(xp) - fn(xm)) / (xp(i) - xm(i));
        xp(i) = x(i);
        xm(i) = x(i);
    }
    return jac;
}

} // namespace detail

/**
 * @brief One EKF predict-update cycle.
 *
 * Prediction propagates the mean through f and the covariance through the
 * central-finite-difference Jacobian of f. The update uses the standard
 * Kalman gain with the Joseph-form covariance update; P is re-symmetrized
 * afterwards. Throws numerical_error when the innovation covariance is
 * not invertible or the state leaves the finite range.
 */
inline EkfInstance ekf_step(const EkfInstance& inst, const TransitionFn& f,
                            const MeasurementFn& h, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& y) {
    inst.validate();
    if (!y.allFinite()) throw std::invalid_argument("ekf_step: non-finite measurement");
    if (y.size() != inst.R.rows())
        throw std::invalid_argument("ekf_step: measurement/R dimension mismatch");

    // Predict.
    auto f_of_x = [&](const Eigen::VectorXd& xx) { return f(xx, u); };
    const Eigen::VectorXd x_pred = f_of_x(inst.x);
    if (!x_pred.allFinite()) throw numerical_error("ekf_step: non-finite predicted state");
    const Eigen::MatrixXd F = detail::fd_jacobian(f_of_x, inst.x);
    Eigen::MatrixXd P_pred = F * inst.P * F.transpose() + inst.Q;
    P_pred = 0.5 * (P_pred + P_pred.transpose());

    // Update.
    const Eigen::VectorXd y_pred = h(x_pred);
    const Eigen::MatrixXd H = detail::fd_jacobian(h, x_pred);
    Eigen::MatrixXd S = H * P_pred * H.transpose() + inst.R;
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const double s_min = es.eigenvalues().minCoeff();
    const double s_max = es.eigenvalues().maxCoeff();
    if (!(s_min > 0.0) || s_max / s_min > 1e14) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "ekf_step: innovation covariance not invertible "
                      "(min eig %.3g, max eig %.3g)",
                      s_min, s_max);
        throw numerical_error(msg);
    }
    const Eigen::MatrixXd K = P_pred * H.transpose() * S.inverse();

    EkfInstance out = inst;
    out.x = x_pred + K * (y - y_pred);
    if (!out.x.allFinite()) throw numerical_error("ekf_step: non-finite updated state");
    const Eigen::MatrixXd A =
        Eigen::MatrixXd::Identity(inst.x.size(), inst.x.size()) - K * H;
    out.P = A * P_pred * A.transpose() + K * inst.R * K.transpose();
    out.P = 0.5 * (out.P + out.P.transpose());
    return out;
}

} // namespace jet
