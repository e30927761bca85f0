/**
 * @file pipeline_demo.cpp
 * @brief End-to-end walkthrough: synthetic plant, grey-box identification
 * and failure-robust thrust estimation.
 *
 * Runs the whole loop for the P220 preset and prints the intermediate
 * results. Useful as a smoke test and as a usage reference for the
 * library API.
 */

#include <cstdio>

#include "jet/jet.hpp"

#ifndef JETBOX_ENGINE_DIR
#define JETBOX_ENGINE_DIR "data/engines"
#endif

using namespace jet;

int main() {
    const EnginePreset engine = load_engine("P220", JETBOX_ENGINE_DIR);
    std::printf("=== Grey-box turbojet pipeline (P220) ===\n\n");

    // 1. Synthetic test-bench run with quantized speed measurements.
    const TimeSeries u = generate_schedule(default_identification_schedule(), 0.01);
    const SimulationLog log = simulate(engine.model, engine.map, u, {}, 1e-3, 0.1);
    std::printf("plant run: %zu samples over %.0f s, omega %.1f..%.1f kRPM\n", log.size(),
                u.back_time(), *std::min_element(log.omega.begin(), log.omega.end()),
                *std::max_element(log.omega.begin(), log.omega.end()));

    // 2. Identification: steady-state map, sparse dynamics, EKF refinement.
    const IdentifyResult res = identify(u, log.series(log.omega_meas, "omega"), {});
    std::printf("steady map: omega_ss = %.4g u^%.4g + %.4g  (R^2 %.6f)\n", res.steady_fit.a,
                res.steady_fit.b, res.steady_fit.c, res.steady_fit.r_squared);
    std::printf("dynamics:   k_ss=%.5g k_d=%.5g k_wd=%.5g k_wwd=%.6g\n", res.model.k_ss,
                res.model.k_d, res.model.k_wd, res.model.k_wwd);
    std::printf("refinement: %zu passes, re-simulation MAE %.4g kRPM\n\n",
                res.refine.pass_mae.size(), res.refine.best_mae);

    // 3. Validate on a held-out schedule.
    const TimeSeries u_val = generate_schedule(default_validation_schedule(), 0.01);
    const SimulationLog val = simulate(engine.model, engine.map, u_val, {}, 1e-3, 0.1);
    const MetricsReport speed = validate_model(res.model, u_val,
                                               val.series(val.omega_meas, "omega"));
    std::printf("held-out speed: MAE %.0f RPM (%.3g%% of range)\n", speed.mae * 1000.0,
                speed.mae_pct);

    // 4. Thrust observer on the validation run, scored against the truth.
    ObserverConfig cfg;
    cfg.c1_nominal = res.model.c1;
    const EstimateLog est = run_observer(u_val, val.series(val.omega_meas, "omega_meas"),
                                         res.model, engine.map, cfg);
    const MetricsReport thrust_err =
        score(val.thrust, est.thrust_hat, engine.spec.thrust_max, "N");
    std::printf("thrust estimate: MAE %.3g N (%.3g%% of rated %g N)\n\n", thrust_err.mae,
                thrust_err.mae_pct, engine.spec.thrust_max);

    // 5. Failure event: the online idle constant absorbs the drop.
    SignalSpec hold;
    hold.kind = SignalKind::hold;
    hold.level = 30.0;
    hold.duration = 30.0;
    const TimeSeries u_fail = generate(hold, 0.01);
    FailureEvent ev;
    ev.t_start = 10.0;
    ev.duration = 8.0;
    ev.c1_drop = 10.0;
    ev.recovery_rate = 2.0;
    const SimulationLog fail = simulate(engine.model, engine.map, u_fail, {ev}, 1e-3, 0.1);
    const EstimateLog fest = run_observer(u_fail, fail.series(fail.omega_meas, "omega_meas"),
                                          res.model, engine.map, cfg);
    double worst_c1 = 0.0;
    for (std::size_t i = 0; i < fest.size(); ++i)
        if (fest.time_at(i) >= 13.0)
            worst_c1 = std::max(worst_c1, std::abs(fest.c1_hat[i] - fail.c1_eff[i]));
    std::printf("failure run: 10 kRPM idle drop at t=10 s, c1_hat tracks within %.2f kRPM\n",
                worst_c1);
    return 0;
}
