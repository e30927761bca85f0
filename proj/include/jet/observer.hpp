#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "jet/ekf.hpp"
#include "jet/plant.hpp"
#include "jet/timeseries.hpp"

namespace jet {

/**
 * @brief Tuning of the failure-robust thrust observer.
 *
 * The observer state is [omega, omega_dot, c1]: tracking the idle
 * constant online lets the filter follow flame-out/surge events where the
 * nominal dynamics no longer hold. c1 has first-order pull back to its
 * nominal value with gain k_c1 [1/s].
 *
 * Q entries are per-step covariances at the sample rate. R defaults to
 * the variance of a 0.1 kRPM quantizer (0.1^2/12). freeze_c1 disables the
 * online idle estimation (q_c1 = 0, instant pull to nominal) and exists
 * to measure what the mechanism buys during failures.
 */
struct ObserverConfig {
    double c1_nominal = 0.0;   ///< [kRPM], required
    double k_c1 = 0.05;        ///< [1/s], >= 0
    double q_omega = 0.0;      ///< [kRPM^2] per step
    double q_omega_dot = 2.5e-3; ///< [(kRPM/s)^2] per step
    double q_c1 = 0.01;        ///< [kRPM^2] per step
    double r = 0.1 * 0.1 / 12.0; ///< [kRPM^2]
    double p0_omega = 0.1 * 0.1 / 12.0;
    double p0_omega_dot = 10.0;
    double p0_c1 = 1.0;
    bool freeze_c1 = false;

    void validate() const {
        if (!(c1_nominal > 0))
            throw std::invalid_argument("ObserverConfig: c1_nominal must be > 0");
        if (!(k_c1 >= 0)) throw std::invalid_argument("ObserverConfig: k_c1 must be >= 0");
        if (!(r > 0)) throw std::invalid_argument("ObserverConfig: r must be > 0");
        if (q_omega < 0 || q_omega_dot < 0 || q_c1 < 0)
            throw std::invalid_argument("ObserverConfig: Q entries must be >= 0");
    }
};

/// Per-sample observer output.
struct ObserverOutput {
    double omega = 0.0;       ///< [kRPM]
    double omega_dot = 0.0;   ///< [kRPM/s]
    double c1 = 0.0;          ///< online idle constant [kRPM]
    double thrust = 0.0;      ///< [N]
    double thrust_rate = 0.0; ///< [N/s]
};

/// Three-state transition of the thrust observer, Euler-discretized:
/// [w, wd, c1] + [wd, f(w,wd,u;c1), -k_c1*(c1 - c1_nominal)] * dt.
/// With freeze_c1 the third state snaps to the nominal value.
inline TransitionFn observer_transition(const OmegaUModel& model, const ObserverConfig& config,
                                        double dt) {
    return [&model, config, dt](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        Eigen::VectorXd next(3);
        const double uu = std::clamp(u(0), 0.0, 100.0);
        next(0) = x(0) + x(1) * dt;
        next(1) = x(1) + eval_dynamics(model, x(0), x(1), uu, x(2)) * dt;
        next(2) = config.freeze_c1 ? config.c1_nominal
                                   : x(2) - config.k_c1 * (x(2) - config.c1_nominal) * dt;
        return next;
    };
}

/// Initial filter state from the first quantized measurement:
/// x = [omega_meas, 0, c1_nominal], P = diag(p0).
inline EkfInstance make_observer_state(double omega_meas0, const ObserverConfig& config,
                                       double dt) {
    config.validate();
    EkfInstance inst;
    inst.dt = dt;
    inst.x = Eigen::Vector3d(omega_meas0, 0.0, config.c1_nominal);
    inst.P = Eigen::Vector3d(config.p0_omega, config.p0_omega_dot,
                             config.freeze_c1 ? 0.0 : config.p0_c1)
                 .asDiagonal();
    inst.Q = Eigen::Vector3d(config.q_omega, config.q_omega_dot,
                             config.freeze_c1 ? 0.0 : config.q_c1)
                 .asDiagonal();
    inst.R = Eigen::MatrixXd::Constant(1, 1, config.r);
    return inst;
}

/**
 * @brief One observer cycle: EKF predict-update on the quantized speed
 * measurement, then thrust and thrust rate from the posterior state.
 *
 * The online idle constant is clamped to [1, 2*c1_nominal]. The returned
 * thrust is always thrust(map, omega_hat) of the same sample, never a
 * stale pair.
 */
inline std::pair<EkfInstance, ObserverOutput> observer_step(const EkfInstance& inst, double u,
                                                            double omega_meas,
                                                            const OmegaUModel& model,
                                                            const ThrustMap& map,
                                                            const ObserverConfig& config) {
    if (!(u >= 0.0 && u <= 100.0))
        throw std::invalid_argument("observer_step: u outside [0,100]");
    const TransitionFn f = observer_transition(model, config, inst.dt);
    const MeasurementFn h = [](const Eigen::VectorXd& x) {
        return Eigen::VectorXd::Constant(1, x(0));
    };
    EkfInstance next = ekf_step(inst, f, h, Eigen::VectorXd::Constant(1, u),
                                Eigen::VectorXd::Constant(1, omega_meas));
    next.x(2) = std::clamp(next.x(2), 1.0, 2.0 * config.c1_nominal);

    ObserverOutput out;
    out.omega = next.x(0);
    out.omega_dot = next.x(1);
    out.c1 = next.x(2);
    out.thrust = thrust(map, std::max(out.omega, 1e-9));
    out.thrust_rate = thrust_rate(map, std::max(out.omega, 1e-9), out.omega_dot);
    return {std::move(next), out};
}

/**
 * @brief Observer estimates over a full record.
 *
 * CSV layout:
 * `time,u,omega_meas,omega_hat,omega_dot_hat,c1_hat,thrust_hat,thrust_rate_hat`.
 */
struct EstimateLog {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> u;
    std::vector<double> omega_meas;
    std::vector<double> omega_hat;
    std::vector<double> omega_dot_hat;
    std::vector<double> c1_hat;
    std::vector<double> thrust_hat;
    std::vector<double> thrust_rate_hat;

    std::size_t size() const { return u.size(); }
    double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

/**
 * @brief Streams observer_step over a measurement record.
 *
 * The filter is initialized from the first measurement (omega_hat =
 * omega_meas[0], omega_dot_hat = 0, c1_hat = c1_nominal). An empty record
 * yields an empty log. The input and measurement series must share one
 * uniform grid.
 */
inline EstimateLog run_observer(const TimeSeries& u, const TimeSeries& omega_meas,
                                const OmegaUModel& model, const ThrustMap& map,
                                const ObserverConfig& config) {
    config.validate();
    model.validate();
    map.validate();
    EstimateLog log;
    if (u.empty() && omega_meas.empty()) return log;
    u.validate();
    omega_meas.validate();
    if (!same_grid(u, omega_meas))
        throw std::invalid_argument("run_observer: input and measurement grids differ");

    log.t0 = u.t0;
    log.dt = u.dt;
    const std::size_t n = u.size();
    log.u.reserve(n);
    log.omega_meas.reserve(n);
    log.omega_hat.reserve(n);
    log.omega_dot_hat.reserve(n);
    log.c1_hat.reserve(n);
    log.thrust_hat.reserve(n);
    log.thrust_rate_hat.reserve(n);

    EkfInstance inst = make_observer_state(omega_meas.values.front(), config, u.dt);
    for (std::size_t k = 0; k < n; ++k) {
        auto [next, out] = observer_step(inst, u.values[k], omega_meas.values[k], model, map,
                                         config);
        inst = std::move(next);
        log.u.push_back(u.values[k]);
        log.omega_meas.push_back(omega_meas.values[k]);
        log.omega_hat.push_back(out.omega);
        log.omega_dot_hat.push_back(out.omega_dot);
        log.c1_hat.push_back(out.c1);
        log.thrust_hat.push_back(out.thrust);
        log.thrust_rate_hat.push_back(out.thrust_rate);
    }
    return log;
}

} // namespace jet
