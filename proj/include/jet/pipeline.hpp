#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jet/metrics.hpp"
#include "jet/observer.hpp"
#include "jet/plant.hpp"
#include "jet/refine.hpp"
#include "jet/regress.hpp"
#include "jet/signals.hpp"
#include "jet/sindy.hpp"
#include "jet/spline.hpp"
#include "jet/timeseries.hpp"

namespace jet {

/// One settled operating point extracted from held input segments.
struct SteadyPoint {
    double u = 0.0;
    double omega = 0.0; ///< mean measured speed over the settled tail [kRPM]
    int samples = 0;
};

struct SteadyExtractionOptions {
    double min_hold_s = 6.0;   ///< minimum constant-input dwell
    double tail_s = 3.0;       ///< averaging window at the end of a dwell
    double settle_band = 0.3;  ///< max speed excursion over the tail [kRPM]
    double u_tol = 1e-9;       ///< input equality tolerance
};

/**
 * @brief Finds constant-input holds long enough to have settled and
 * averages the measured speed over their tails. Duplicated input levels
 * are averaged together.
 */
inline std::vector<SteadyPoint> extract_steady_points(const TimeSeries& u,
                                                      const TimeSeries& omega,
                                                      const SteadyExtractionOptions& opts = {}) {
    u.validate();
    omega.validate();
    if (!same_grid(u, omega))
        throw std::invalid_argument("extract_steady_points: grids differ");
    const auto min_hold = static_cast<std::size_t>(std::llround(opts.min_hold_s / u.dt));
    const auto tail = static_cast<std::size_t>(std::llround(opts.tail_s / u.dt));
    if (tail < 2 || min_hold < tail)
        throw std::invalid_argument("extract_steady_points: window options too short");

    std::vector<SteadyPoint> raw;
    std::size_t run_start = 0;
    auto flush = [&](std::size_t run_end) { // [run_start, run_end)
        if (run_end - run_start < min_hold) return;
        const std::size_t t0 = run_end - tail;
        double lo = omega.values[t0], hi = omega.values[t0], sum = 0.0;
        for (std::size_t i = t0; i < run_end; ++i) {
            lo = std::min(lo, omega.values[i]);
            hi = std::max(hi, omega.values[i]);
            sum += omega.values[i];
        }
        if (hi - lo > opts.settle_band) return;
        raw.push_back(SteadyPoint{u.values[run_start], sum / static_cast<double>(tail),
                                  static_cast<int>(tail)});
    };
    for (std::size_t i = 1; i < u.size(); ++i) {
        if (std::abs(u.values[i] - u.values[run_start]) > opts.u_tol) {
            flush(i);
            run_start = i;
        }
    }
    flush(u.size());

    // Merge points at the same input level.
    std::vector<SteadyPoint> merged;
    for (const auto& p : raw) {
        bool found = false;
        for (auto& m : merged) {
            if (std::abs(m.u - p.u) <= opts.u_tol) {
                const double w = static_cast<double>(m.samples + p.samples);
                m.omega = (m.omega * m.samples + p.omega * p.samples) / w;
                m.samples += p.samples;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(p);
    }
    std::sort(merged.begin(), merged.end(),
              [](const SteadyPoint& a, const SteadyPoint& b) { return a.u < b.u; });
    return merged;
}

/**
 * @brief Identification pipeline settings. Defaults reproduce the
 * reference workflow: spline smoothing chosen so the fit residual matches
 * the quantization noise RMS, anchored library of degree 3, STLSQ
 * threshold 0.05 on unit-RMS columns, then EKF parameter refinement.
 */
struct IdentifyOptions {
    double quantization_step = 0.1;        ///< [kRPM]; 0 = noise-free data
    std::optional<double> spline_smoothing; ///< override; default by discrepancy rule
    int library_degree = 3;
    double stlsq_threshold = 0.05;
    double edge_trim_s = 0.5;              ///< rows dropped at each end before regression
    SteadyExtractionOptions steady;
    RefineConfig refine;
    bool run_refinement = true;
};

struct IdentifyResult {
    OmegaUModel model;          ///< final (refined) model
    OmegaUModel sindy_model;    ///< model before EKF refinement
    PowerLawFit steady_fit;     ///< a1, b1 regression (c fixed to idle)
    std::vector<SteadyPoint> steady_points;
    SparseModel sparse;
    RefineDiagnostics refine;
    double spline_smoothing = 0.0;
};

/**
 * @brief Full grey-box identification from an input/measured-speed record.
 *
 * Steps: extract settled operating points and fit the steady-state map
 * (c1 anchored to the measured idle speed), smooth and differentiate the
 * speed with the smoothing spline, run STLSQ over the anchored candidate
 * library, assemble the second-order model, and refine its coefficients
 * with the augmented EKF.
 *
 * The record must contain an idle hold (u = 0) and at least four distinct
 * settled input levels.
 */
inline IdentifyResult identify(const TimeSeries& u, const TimeSeries& omega_meas,
                               const IdentifyOptions& opts = {}) {
    u.validate();
    omega_meas.validate();
    if (!same_grid(u, omega_meas)) throw std::invalid_argument("identify: grids differ");

    IdentifyResult result;

    // Steady-state map from settled holds; c1 is the measured idle speed.
    result.steady_points = extract_steady_points(u, omega_meas, opts.steady);
    if (result.steady_points.size() < 4)
        throw std::invalid_argument("identify: need at least 4 settled input levels, found " +
                                    std::to_string(result.steady_points.size()));
    const auto idle = std::find_if(result.steady_points.begin(), result.steady_points.end(),
                                   [](const SteadyPoint& p) { return p.u == 0.0; });
    if (idle == result.steady_points.end())
        throw std::invalid_argument("identify: record has no settled idle (u = 0) hold");
    const double c1 = idle->omega;
    std::vector<double> su, sw;
    for (const auto& p : result.steady_points) {
        su.push_back(p.u);
        sw.push_back(p.omega);
    }
    result.steady_fit = fit_power_law(su, sw, c1);
    const double a1 = result.steady_fit.a;
    const double b1 = result.steady_fit.b;

    // Spline smoothing by the discrepancy rule: residual RMS at the
    // quantization noise level step/sqrt(12).
    const double target_rms = opts.quantization_step / std::sqrt(12.0);
    result.spline_smoothing = opts.spline_smoothing
                              ? *opts.spline_smoothing
                              : choose_spline_smoothing(omega_meas, target_rms);
    const SplineDerivatives d = smooth_spline_derivatives(omega_meas, result.spline_smoothing);

    // Regression rows, trimming spline boundary samples.
    const auto trim = static_cast<std::size_t>(std::llround(opts.edge_trim_s / u.dt));
    if (u.size() <= 2 * trim + 10) throw std::invalid_argument("identify: record too short");
    std::vector<double> w, wd, uu, wdd;
    for (std::size_t i = trim; i + trim < u.size(); ++i) {
        w.push_back(d.smooth.values[i]);
        wd.push_back(d.deriv1.values[i]);
        wdd.push_back(d.deriv2.values[i]);
        uu.push_back(u.values[i]);
    }

    const CandidateLibrary lib = build_library_B(a1, b1, c1, opts.library_degree);
    result.sparse = stlsq(lib, w, wd, uu, wdd, opts.stlsq_threshold);
    result.sindy_model = assemble_omega_u_model(result.sparse, lib, a1, b1, c1);

    if (opts.run_refinement) {
        auto [refined, diag] = refine_parameters(result.sindy_model, u, omega_meas, opts.refine);
        result.model = refined;
        result.refine = diag;
    } else {
        result.model = result.sindy_model;
    }
    return result;
}

/// Re-simulates a model over a validation input and scores the speed
/// against the recorded measurement. reference_range defaults to the
/// model's own envelope span (omega at u=100 minus idle).
inline MetricsReport validate_model(const OmegaUModel& model, const TimeSeries& u,
                                    const TimeSeries& omega_ref, double integrator_dt = 1e-3,
                                    double reference_range = 0.0) {
    if (!same_grid(u, omega_ref))
        throw std::invalid_argument("validate_model: grids differ");
    const TimeSeries sim = simulate_omega(model, u, integrator_dt);
    const double range = reference_range > 0.0
                             ? reference_range
                             : model.omega_envelope_max() - model.c1;
    return score(omega_ref.values, sim.values, range, "kRPM");
}

/// Default identification schedule: idle hold, staircase over the
/// envelope, large steps, sinusoids at three operating points, chirps in
/// both sweep directions and a ramp. About 430 s; settled holds at nine
/// input levels including idle. The mixed offsets and rates decorrelate
/// u from omega so the sparse regression can tell the input-carrying
/// candidate terms from the physical ones.
inline std::vector<SignalSpec> default_identification_schedule() {
    std::vector<SignalSpec> sched;
    auto hold = [](double level, double dur) {
        SignalSpec s;
        s.kind = SignalKind::hold;
        s.level = level;
        s.duration = dur;
        return s;
    };
    sched.push_back(hold(0.0, 20.0));
    for (double level : {10.0, 20.0, 30.0, 45.0, 60.0, 75.0, 90.0, 100.0})
        sched.push_back(hold(level, 12.0));
    for (double level : {60.0, 30.0}) sched.push_back(hold(level, 12.0));
    {
        SignalSpec s;
        s.kind = SignalKind::step;
        s.from = 20.0;
        s.to = 80.0;
        s.t_step = 2.0;
        s.duration = 10.0;
        sched.push_back(s);
        s.from = 80.0;
        s.to = 20.0;
        sched.push_back(s);
    }
    {
        SignalSpec s;
        s.kind = SignalKind::sine;
        s.offset = 50.0;
        s.amplitude = 30.0;
        s.freq_hz = 0.2;
        s.duration = 40.0;
        sched.push_back(s);
    }
    {
        SignalSpec s;
        s.kind = SignalKind::chirp;
        s.offset = 50.0;
        s.amplitude = 25.0;
        s.f0 = 0.05;
        s.f1 = 0.5;
        s.duration = 80.0;
        sched.push_back(s);
    }
    {
        SignalSpec s;
        s.kind = SignalKind::sine;
        s.offset = 35.0;
        s.amplitude = 20.0;
        s.freq_hz = 0.35;
        s.duration = 30.0;
        sched.push_back(s);
        s.offset = 70.0;
        s.amplitude = 25.0;
        s.freq_hz = 0.1;
        sched.push_back(s);
    }
    {
        SignalSpec s;
        s.kind = SignalKind::chirp;
        s.offset = 40.0;
        s.amplitude = 30.0;
        s.f0 = 0.5;
        s.f1 = 0.05;
        s.duration = 60.0;
        sched.push_back(s);
    }
    {
        SignalSpec s;
        s.kind = SignalKind::ramp;
        s.from = 20.0;
        s.to = 90.0;
        s.duration = 20.0;
        sched.push_back(s);
        sched.push_back(hold(90.0, 4.0));
        s.from = 90.0;
        s.to = 20.0;
        s.duration = 10.0;
        sched.push_back(s);
    }
    return sched;
}

/// Held-out validation schedule: different levels, frequencies and sweep
/// from the identification schedule. About 140 s.
inline std::vector<SignalSpec> default_validation_schedule() {
    std::vector<SignalSpec> sched;
    SignalSpec s;
    s.kind = SignalKind::hold;
    s.level = 30.0;
    s.duration = 10.0;
    sched.push_back(s);
    s = SignalSpec{};
    s.kind = SignalKind::step;
    s.from = 30.0;
    s.to = 70.0;
    s.t_step = 2.0;
    s.duration = 12.0;
    sched.push_back(s);
    s = SignalSpec{};
    s.kind = SignalKind::sine;
    s.offset = 55.0;
    s.amplitude = 35.0;
    s.freq_hz = 0.15;
    s.duration = 30.0;
    sched.push_back(s);
    s = SignalSpec{};
    s.kind = SignalKind::chirp;
    s.offset = 45.0;
    s.amplitude = 30.0;
    s.f0 = 0.1;
    s.f1 = 0.4;
    s.duration = 50.0;
    sched.push_back(s);
    s = SignalSpec{};
    s.kind = SignalKind::step;
    s.from = 70.0;
    s.to = 25.0;
    s.t_step = 2.0;
    s.duration = 12.0;
    sched.push_back(s);
    s = SignalSpec{};
    s.kind = SignalKind::ramp;
    s.from = 25.0;
    s.to = 95.0;
    s.duration = 15.0;
    sched.push_back(s);
    s = SignalSpec{};
    s.kind = SignalKind::hold;
    s.level = 95.0;
    s.duration = 6.0;
    sched.push_back(s);
    return sched;
}

} // namespace jet
