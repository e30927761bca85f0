#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jet/ekf.hpp"
#include "jet/plant.hpp"
#include "jet/timeseries.hpp"

namespace jet {

/**
 * @brief Tuning of the parameter-refinement filter.
 *
 * The augmented state is [omega, omega_dot, k_ss, k_d, k_wd, k_wwd]; the
 * parameters are random walks driven by artificial process noise so the
 * filter can move them. Parameter noise is sized relative to the initial
 * coefficient magnitudes (q_i = (q_param_rel * max(|K_i|, 0.01))^2 per
 * step) since the four coefficients span four orders of magnitude.
 * Q(0,0) is fixed to zero: the speed state is pure integration.
 */
struct RefineConfig {
    double r = 0.1 * 0.1 / 12.0;  ///< measurement noise [kRPM^2]
    double q_omega_dot = 1e-2;    ///< [(kRPM/s)^2] per step
    double q_param_rel = 1e-3;    ///< relative random-walk scale
    double p0_omega = 0.1 * 0.1 / 12.0;
    double p0_omega_dot = 10.0;
    double p0_param_rel = 0.05;   ///< initial parameter std, relative
    int max_passes = 8;
    double integrator_dt = 1e-3;  ///< for the per-pass validation runs
    double param_limit = 1e4;     ///< divergence guard on |K|

    void validate() const {
        if (!(r > 0)) throw std::invalid_argument("RefineConfig: r must be > 0");
        if (q_omega_dot < 0 || q_param_rel < 0)
            throw std::invalid_argument("RefineConfig: noise terms must be >= 0");
        if (max_passes < 1) throw std::invalid_argument("RefineConfig: max_passes must be >= 1");
    }
};

struct RefineDiagnostics {
    std::vector<double> pass_mae;     ///< [kRPM], one entry per completed pass
    std::vector<double> pass_max_err; ///< [kRPM]
    int best_pass = -1;               ///< 0-based index into pass_mae, -1 = model0
    double best_mae = 0.0;            ///< [kRPM], for the returned model
    double best_max_err = 0.0;        ///< [kRPM]
    bool converged = false;           ///< stopped because MAE stopped decreasing
    std::vector<std::string> warnings;
};

namespace detail {

/// MAE / max error of the model re-simulated over the dataset input
/// against the measured speed. Infinite when the candidate is unstable.
inline std::pair<double, double> resimulation_error(const OmegaUModel& candidate,
                                                    const TimeSeries& u,
                                                    const TimeSeries& omega_meas,
                                                    double integrator_dt) {
    try {
        const TimeSeries sim = simulate_omega(candidate, u, integrator_dt);
        double abs_sum = 0.0, abs_max = 0.0;
        for (std::size_t i = 0; i < sim.size(); ++i) {
            const double e = std::abs(sim.values[i] - omega_meas.values[i]);
            abs_sum += e;
            abs_max = std::max(abs_max, e);
        }
        return {abs_sum / static_cast<double>(sim.size()), abs_max};
    } catch (const std::exception&) {
        return {std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
    }
}

} // namespace detail

/**
 * @brief Fine-tunes the four dynamic coefficients with an augmented EKF.
 *
 * Runs the 6-state filter over the identification dataset repeatedly.
 * After each pass, the plant is re-simulated with the pass-final
 * coefficients and scored (MAE, max error) against the measured speed;
 * passes continue while the MAE decreases (up to max_passes) and the best
 * model seen is returned. A parameter exceeding the divergence guard
 * aborts the pass and returns the last stable model.
 *
 * The steady-state constants a1, b1, c1 of model0 are held fixed.
 */
inline std::pair<OmegaUModel, RefineDiagnostics> refine_parameters(const OmegaUModel& model0,
                                                                   const TimeSeries& u,
                                                                   const TimeSeries& omega_meas,
                                                                   const RefineConfig& config) {
    config.validate();
    model0.validate();
    u.validate();
    omega_meas.validate();
    if (!same_grid(u, omega_meas))
        throw std::invalid_argument("refine_parameters: input and measurement grids differ");

    RefineDiagnostics diag;
    OmegaUModel best = model0;
    auto [best_mae, best_max] =
        detail::resimulation_error(model0, u, omega_meas, config.integrator_dt);

    Eigen::Vector4d params(model0.k_ss, model0.k_d, model0.k_wd, model0.k_wwd);
    const double dt = u.dt;

    // Process noise: zero on omega, fixed on omega_dot, relative on params.
    Eigen::VectorXd q_diag(6);
    q_diag(0) = 0.0;
    q_diag(1) = config.q_omega_dot;
    for (int i = 0; i < 4; ++i) {
        const double s = config.q_param_rel * std::max(std::abs(params(i)), 0.01);
        q_diag(2 + i) = s * s;
    }

    const MeasurementFn h = [](const Eigen::VectorXd& x) {
        return Eigen::VectorXd::Constant(1, x(0));
    };

    double prev_mae = best_mae;
    for (int pass = 0; pass < config.max_passes; ++pass) {
        OmegaUModel pass_model = model0;
        pass_model.k_ss = params(0);
        pass_model.k_d = params(1);
        pass_model.k_wd = params(2);
        pass_model.k_wwd = params(3);

        const TransitionFn f = [&pass_model, dt](const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& uu) {
            OmegaUModel m = pass_model;
            m.k_ss = x(2);
            m.k_d = x(3);
            m.k_wd = x(4);
            m.k_wwd = x(5);
            const double u_now = std::clamp(uu(0), 0.0, 100.0);
            Eigen::VectorXd next(6);
            next(0) = x(0) + x(1) * dt;
            next(1) = x(1) + eval_dynamics(m, x(0), x(1), u_now, m.c1) * dt;
            next.tail<4>() = x.tail<4>();
            return next;
        };

        EkfInstance inst;
        inst.dt = dt;
        inst.x.resize(6);
        inst.x << omega_meas.values.front(), 0.0, params(0), params(1), params(2), params(3);
        Eigen::VectorXd p_diag(6);
        p_diag(0) = config.p0_omega;
        p_diag(1) = config.p0_omega_dot;
        for (int i = 0; i < 4; ++i) {
            const double s = config.p0_param_rel * std::max(std::abs(params(i)), 0.01);
            p_diag(2 + i) = s * s;
        }
        inst.P = p_diag.asDiagonal();
        inst.Q = q_diag.asDiagonal();
        inst.R = Eigen::MatrixXd::Constant(1, 1, config.r);

        bool aborted = false;
        for (std::size_t k = 0; k < u.size(); ++k) {
            inst = ekf_step(inst, f, h, Eigen::VectorXd::Constant(1, u.values[k]),
                            Eigen::VectorXd::Constant(1, omega_meas.values[k]));
            if (inst.x.tail<4>().cwiseAbs().maxCoeff() > config.param_limit) {
                diag.warnings.push_back("pass " + std::to_string(pass + 1) +
                                        ": parameter divergence at t=" +
                                        std::to_string(u.time_at(k)) +
                                        " s; keeping last stable model");
                aborted = true;
                break;
            }
        }
        if (aborted) break;

        const Eigen::Vector4d pass_params = inst.x.tail<4>();
        OmegaUModel candidate = model0;
        candidate.k_ss = pass_params(0);
        candidate.k_d = pass_params(1);
        candidate.k_wd = pass_params(2);
        candidate.k_wwd = pass_params(3);
        auto [mae, max_err] =
            detail::resimulation_error(candidate, u, omega_meas, config.integrator_dt);
        diag.pass_mae.push_back(mae);
        diag.pass_max_err.push_back(max_err);
        if (mae < best_mae) {
            best_mae = mae;
            best_max = max_err;
            best = candidate;
            diag.best_pass = pass;
        }
        if (mae >= prev_mae) {
            diag.converged = true;
            break;
        }
        prev_mae = mae;
        params = pass_params;
    }

    diag.best_mae = best_mae;
    diag.best_max_err = best_max;
    return {best, diag};
}

} // namespace jet
