#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "jet/errors.hpp"
#include "jet/signals.hpp"
#include "jet/timeseries.hpp"

namespace jet {

/**
 * @brief Second-order angular-speed model of a small-scale turbojet.
 *
 * Dynamics (omega in kRPM, u dimensionless in [0,100]):
 *
 *   omega_ddot = k_ss * (omega - a1*u^b1 - c1)
 *              + (k_d + k_wd*omega + k_wwd*omega^2) * omega_dot
 *
 * a1, b1, c1 describe the steady-state input map omega_ss = a1*u^b1 + c1;
 * c1 is the idle angular speed (u = 0).
 */
struct OmegaUModel {
    double a1 = 0.0;    ///< [kRPM / u^b1]
    double b1 = 0.0;    ///< dimensionless, in (0,1)
    double c1 = 0.0;    ///< idle angular speed [kRPM]
    double k_ss = 0.0;  ///< [1/s^2], < 0
    double k_d = 0.0;   ///< [1/s]
    double k_wd = 0.0;  ///< [1/(kRPM s)]
    double k_wwd = 0.0; ///< [1/(kRPM^2 s)]

    /// Upper end of the operating envelope: steady speed at full input.
    double omega_envelope_max() const { return a1 * std::pow(100.0, b1) + c1; }

    /// Velocity-coefficient sum k_d + k_wd*w + k_wwd*w^2 at a given speed.
    double damping_at(double omega) const {
        return k_d + k_wd * omega + k_wwd * omega * omega;
    }

    /**
     * Construction-time sanity: a1 > 0, 0 < b1 < 1, c1 > 0, k_ss < 0 and
     * the velocity coefficient negative over [c1, omega at u=100].
     */
    void validate() const {
        if (!(a1 > 0)) throw std::invalid_argument("OmegaUModel: a1 must be > 0");
        if (!(b1 > 0 && b1 < 1)) throw std::invalid_argument("OmegaUModel: b1 must be in (0,1)");
        if (!(c1 > 0)) throw std::invalid_argument("OmegaUModel: c1 must be > 0");
        if (!(k_ss < 0)) throw std::invalid_argument("OmegaUModel: k_ss must be < 0");
        const double w_hi = omega_envelope_max();
        const int kGrid = 256;
        for (int i = 0; i <= kGrid; ++i) {
            const double w = c1 + (w_hi - c1) * static_cast<double>(i) / kGrid;
            if (!(damping_at(w) < 0)) {
                char msg[128];
                std::snprintf(msg, sizeof(msg),
                              "OmegaUModel: non-negative damping %.6g at omega=%.4g kRPM",
                              damping_at(w), w);
                throw std::invalid_argument(msg);
            }
        }
    }
};

/// Empirical thrust map T(omega) = a2 * omega^b2 + c2 [N], omega in kRPM.
struct ThrustMap {
    double a2 = 0.0; ///< [N / kRPM^b2]
    double b2 = 0.0; ///< dimensionless, > 1
    double c2 = 0.0; ///< [N]

    void validate() const {
        if (!(a2 > 0)) throw std::invalid_argument("ThrustMap: a2 must be > 0");
        if (!(b2 > 1)) throw std::invalid_argument("ThrustMap: b2 must be > 1");
    }
};

/// Manufacturer ratings used for ranges and percentage error metrics.
struct EngineSpec {
    double omega_idle = 0.0;  ///< [kRPM]
    double omega_max = 0.0;   ///< [kRPM]
    double thrust_idle = 0.0; ///< [N]
    double thrust_max = 0.0;  ///< [N]
    std::string name;

    void validate() const {
        if (!(omega_idle < omega_max))
            throw std::invalid_argument("EngineSpec: omega_idle must be < omega_max");
        if (!(thrust_idle < thrust_max))
            throw std::invalid_argument("EngineSpec: thrust_idle must be < thrust_max");
    }
};

/**
 * @brief Transient loss of combustion idle support (e.g. air bubbles in
 * the fuel line): the plant's effective idle constant drops by c1_drop
 * over the first 10% of `duration`, holds, then recovers linearly at
 * recovery_rate once the event ends.
 */
struct FailureEvent {
    double t_start = 0.0;       ///< [s]
    double duration = 0.0;      ///< [s]
    double c1_drop = 0.0;       ///< [kRPM], >= 0
    double recovery_rate = 0.0; ///< [kRPM/s], > 0

    void validate() const {
        if (!(c1_drop >= 0)) throw std::invalid_argument("FailureEvent: c1_drop must be >= 0");
        if (!(duration > 0)) throw std::invalid_argument("FailureEvent: duration must be > 0");
        if (!(recovery_rate > 0))
            throw std::invalid_argument("FailureEvent: recovery_rate must be > 0");
    }

    /// Amount subtracted from c1 at time t.
    double drop_at(double t) const {
        if (t <= t_start) return 0.0;
        const double ramp = 0.1 * duration;
        if (t < t_start + ramp) return c1_drop * (t - t_start) / ramp;
        if (t <= t_start + duration) return c1_drop;
        return std::max(0.0, c1_drop - recovery_rate * (t - t_start - duration));
    }
};

/// Effective idle constant at time t under a failure schedule (never < 0).
inline double effective_c1(const OmegaUModel& model, const std::vector<FailureEvent>& failures,
                           double t) {
    double drop = 0.0;
    for (const auto& ev : failures) drop = std::max(drop, ev.drop_at(t));
    return std::max(0.0, model.c1 - drop);
}

/**
 * @brief Angular acceleration [kRPM/s^2] of the model at a given state.
 *
 * c1_override substitutes the idle constant (used by the failure-robust
 * observer and the failing plant); pass model.c1 for the nominal dynamics.
 * u = 0 is evaluated with 0^b1 = 0.
 */
inline double eval_dynamics(const OmegaUModel& model, double omega, double omega_dot, double u,
                            double c1_override) {
    if (!(u >= 0.0 && u <= 100.0))
        throw std::invalid_argument("eval_dynamics: u outside [0,100]");
    const double u_pow = u == 0.0 ? 0.0 : std::pow(u, model.b1);
    return model.k_ss * (omega - model.a1 * u_pow - c1_override) +
           (model.k_d + model.k_wd * omega + model.k_wwd * omega * omega) * omega_dot;
}

inline double eval_dynamics(const OmegaUModel& model, double omega, double omega_dot, double u) {
    return eval_dynamics(model, omega, omega_dot, u, model.c1);
}

/// Equilibrium angular speed a1*u^b1 + c1 [kRPM] for a held input.
inline double steady_state_omega(const OmegaUModel& model, double u) {
    if (!(u >= 0.0 && u <= 100.0))
        throw std::invalid_argument("steady_state_omega: u outside [0,100]");
    const double u_pow = u == 0.0 ? 0.0 : std::pow(u, model.b1);
    return model.a1 * u_pow + model.c1;
}

/// Thrust [N] at a given angular speed [kRPM].
inline double thrust(const ThrustMap& map, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("thrust: omega must be > 0");
    return map.a2 * std::pow(omega, map.b2) + map.c2;
}

/// Thrust rate [N/s] by the chain rule: dT/dt = a2*b2*omega^(b2-1)*omega_dot.
inline double thrust_rate(const ThrustMap& map, double omega, double omega_dot) {
    if (!(omega > 0.0)) throw std::invalid_argument("thrust_rate: omega must be > 0");
    return map.a2 * map.b2 * std::pow(omega, map.b2 - 1.0) * omega_dot;
}

/**
 * @brief One synthetic test-bench run.
 *
 * All channels share the input grid. CSV layout:
 * `time,u,omega_true,omega_dot_true,omega_meas,thrust_true`.
 * omega_ddot_true is kept in memory for identification work but is not
 * part of the CSV contract.
 */
struct SimulationLog {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> u;
    std::vector<double> omega;       ///< true angular speed [kRPM]
    std::vector<double> omega_dot;   ///< [kRPM/s]
    std::vector<double> omega_ddot;  ///< [kRPM/s^2]
    std::vector<double> omega_meas;  ///< quantized measurement [kRPM]
    std::vector<double> thrust;      ///< true thrust [N]
    std::vector<double> c1_eff;      ///< effective idle constant [kRPM]

    std::size_t size() const { return u.size(); }
    double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }

    TimeSeries series(const std::vector<double>& column, const std::string& name) const {
        return TimeSeries{t0, dt, column, name};
    }
};

namespace detail {

struct PlantState {
    double omega;
    double omega_dot;
};

inline PlantState rk4_step(const OmegaUModel& model, const std::vector<FailureEvent>& failures,
                           PlantState s, double u, double t, double h) {
    auto accel = [&](const PlantState& st, double tt) {
        return eval_dynamics(model, st.omega, st.omega_dot, u, effective_c1(model, failures, tt));
    };
    const double k1w = s.omega_dot;
    const double k1v = accel(s, t);
    const PlantState s2{s.omega + 0.5 * h * k1w, s.omega_dot + 0.5 * h * k1v};
    const double k2w = s2.omega_dot;
    const double k2v = accel(s2, t + 0.5 * h);
    const PlantState s3{s.omega + 0.5 * h * k2w, s.omega_dot + 0.5 * h * k2v};
    const double k3w = s3.omega_dot;
    const double k3v = accel(s3, t + 0.5 * h);
    const PlantState s4{s.omega + h * k3w, s.omega_dot + h * k3v};
    const double k4w = s4.omega_dot;
    const double k4v = accel(s4, t + h);
    return PlantState{s.omega + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
                      s.omega_dot + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

} // namespace detail

/**
 * @brief Integrates the plant over an input record.
 *
 * Classical RK4 at integrator_dt with zero-order hold on u between input
 * samples; output channels are logged on the input grid. The initial
 * state is the steady state for u(0). The measurement channel is the true
 * speed quantized to quantization_step (default 0.1 kRPM).
 *
 * Aborts with a diagnostic if the state leaves 10x the operating envelope
 * or becomes non-finite.
 */
inline SimulationLog simulate(const OmegaUModel& model, const ThrustMap& map,
                              const TimeSeries& input, const std::vector<FailureEvent>& failures,
                              double integrator_dt, double quantization_step = 0.1) {
    model.validate();
    map.validate();
    input.validate();
    if (!(integrator_dt > 0.0 && integrator_dt <= input.dt))
        throw std::invalid_argument("simulate: integrator_dt must be in (0, input.dt]");
    if (!(quantization_step > 0.0))
        throw std::invalid_argument("simulate: quantization_step must be > 0");
    for (double u : input.values)
        if (!(u >= 0.0 && u <= 100.0))
            throw std::invalid_argument("simulate: input outside [0,100]");
    for (const auto& ev : failures) ev.validate();

    const int substeps = std::max(1, static_cast<int>(std::llround(input.dt / integrator_dt)));
    const double h = input.dt / substeps;
    const double omega_limit = 10.0 * std::max(model.omega_envelope_max(), model.c1);

    SimulationLog log;
    log.t0 = input.t0;
    log.dt = input.dt;
    const std::size_t n = input.size();
    log.u.reserve(n);
    log.omega.reserve(n);
    log.omega_dot.reserve(n);
    log.omega_ddot.reserve(n);
    log.omega_meas.reserve(n);
    log.thrust.reserve(n);
    log.c1_eff.reserve(n);

    detail::PlantState state{steady_state_omega(model, input.values.front()), 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const double t = input.time_at(k);
        const double u = input.values[k];
        const double c1_now = effective_c1(model, failures, t);
        if (!std::isfinite(state.omega) || !std::isfinite(state.omega_dot) ||
            std::abs(state.omega) > omega_limit) {
            char msg[160];
            std::snprintf(msg, sizeof(msg),
                          "simulate: diverged at t=%.3f s (omega=%.6g kRPM, limit %.6g)", t,
                          state.omega, omega_limit);
            throw numerical_error(msg);
        }
        log.u.push_back(u);
        log.omega.push_back(state.omega);
        log.omega_dot.push_back(state.omega_dot);
        log.omega_ddot.push_back(eval_dynamics(model, state.omega, state.omega_dot, u, c1_now));
        log.omega_meas.push_back(quantize_value(state.omega, quantization_step));
        log.thrust.push_back(thrust(map, std::max(state.omega, 1e-9)));
        log.c1_eff.push_back(c1_now);

        if (k + 1 < n) {
            double tt = t;
            for (int s = 0; s < substeps; ++s) {
                state = detail::rk4_step(model, failures, state, u, tt, h);
                tt += h;
            }
        }
    }
    return log;
}

/**
 * @brief Speed-only integration used for model validation: same RK4 core,
 * no quantization or thrust channel. Starts from the steady state at u(0).
 */
inline TimeSeries simulate_omega(const OmegaUModel& model, const TimeSeries& input,
                                 double integrator_dt) {
    model.validate();
    input.validate();
    if (!(integrator_dt > 0.0 && integrator_dt <= input.dt))
        throw std::invalid_argument("simulate_omega: integrator_dt must be in (0, input.dt]");
    const int substeps = std::max(1, static_cast<int>(std::llround(input.dt / integrator_dt)));
    const double h = input.dt / substeps;
    const double omega_limit = 10.0 * std::max(model.omega_envelope_max(), model.c1);

    TimeSeries out = input;
    out.name = "omega";
    detail::PlantState state{steady_state_omega(model, input.values.front()), 0.0};
    const std::vector<FailureEvent> no_failures;
    for (std::size_t k = 0; k < input.size(); ++k) {
        if (!std::isfinite(state.omega) || std::abs(state.omega) > omega_limit) {
            char msg[128];
            std::snprintf(msg, sizeof(msg), "simulate_omega: diverged at t=%.3f s",
                          input.time_at(k));
            throw numerical_error(msg);
        }
        out.values[k] = state.omega;
        if (k + 1 < input.size()) {
            double tt = input.time_at(k);
            for (int s = 0; s < substeps; ++s) {
                state = detail::rk4_step(model, no_failures, state, input.values[k], tt, h);
                tt += h;
            }
        }
    }
    return out;
}

} // namespace jet
