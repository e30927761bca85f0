#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "jet/timeseries.hpp"

namespace jet {

enum class SignalKind { hold, step, staircase, sine, chirp, ramp };

inline const char* to_string(SignalKind k) {
    switch (k) {
        case SignalKind::hold: return "hold";
        case SignalKind::step: return "step";
        case SignalKind::staircase: return "staircase";
        case SignalKind::sine: return "sine";
        case SignalKind::chirp: return "chirp";
        case SignalKind::ramp: return "ramp";
    }
    return "?";
}

inline SignalKind signal_kind_from_string(const std::string& s) {
    if (s == "hold") return SignalKind::hold;
    if (s == "step") return SignalKind::step;
    if (s == "staircase") return SignalKind::staircase;
    if (s == "sine") return SignalKind::sine;
    if (s == "chirp") return SignalKind::chirp;
    if (s == "ramp") return SignalKind::ramp;
    throw std::invalid_argument("unknown signal kind: " + s);
}

/**
 * @brief One segment of an input-signal schedule.
 *
 * Field use per kind:
 *  - hold:      level, duration
 *  - step:      from, to, t_step (switch time within the segment), duration
 *  - staircase: from, to, n_steps (>= 2 equal dwells), duration
 *  - sine:      offset, amplitude, freq_hz, phase, duration
 *  - chirp:     offset, amplitude, f0 -> f1 linear sweep, phase, duration
 *  - ramp:      from, to, duration
 *
 * Generated values are clamped to the input range [0, 100].
 */
struct SignalSpec {
    SignalKind kind = SignalKind::hold;
    double duration = 0.0;   ///< segment length [s]
    double level = 0.0;
    double from = 0.0;
    double to = 0.0;
    double t_step = 0.0;
    int n_steps = 0;
    double offset = 0.0;
    double amplitude = 0.0;
    double freq_hz = 0.0;
    double f0 = 0.0;
    double f1 = 0.0;
    double phase = 0.0;
    double chirp_fmin = 0.05;  ///< allowed chirp band [Hz]
    double chirp_fmax = 0.5;

    void validate(double dt) const {
        if (!(dt > 0)) throw std::invalid_argument("SignalSpec: dt must be > 0");
        if (!(duration > 0))
            throw std::invalid_argument("SignalSpec: duration must be > 0");
        const double nyquist = 0.5 / dt;
        switch (kind) {
            case SignalKind::sine:
                if (!(freq_hz > 0) || freq_hz > nyquist)
                    throw std::invalid_argument("sine: frequency outside (0, Nyquist]");
                break;
            case SignalKind::chirp:
                if (!(f0 > 0) || !(f1 > 0) || f0 > nyquist || f1 > nyquist)
                    throw std::invalid_argument("chirp: frequency outside (0, Nyquist]");
                if (f0 < chirp_fmin || f0 > chirp_fmax || f1 < chirp_fmin || f1 > chirp_fmax)
                    throw std::invalid_argument("chirp: sweep outside configured band");
                break;
            case SignalKind::staircase:
                if (n_steps < 2) throw std::invalid_argument("staircase: n_steps must be >= 2");
                break;
            default:
                break;
        }
    }

    /// Signal value at time t within [0, duration), before clamping.
    double raw_value(double t) const {
        using std::numbers::pi;
        switch (kind) {
            case SignalKind::hold: return level;
            case SignalKind::step: return t < t_step ? from : to;
            case SignalKind::staircase: {
                int k = static_cast<int>(std::floor(t / duration * n_steps));
                k = std::clamp(k, 0, n_steps - 1);
                return from + (to - from) * static_cast<double>(k) /
                                  static_cast<double>(n_steps - 1);
            }
            case SignalKind::sine:
                return offset + amplitude * std::sin(2.0 * pi * freq_hz * t + phase);
            case SignalKind::chirp: {
                const double ph =
                    2.0 * pi * (f0 * t + 0.5 * (f1 - f0) * t * t / duration) + phase;
                return offset + amplitude * std::sin(ph);
            }
            case SignalKind::ramp: return from + (to - from) * t / duration;
        }
        return 0.0;
    }
};

/**
 * @brief Generates one schedule segment sampled at dt.
 *
 * The segment covers [0, duration): n = round(duration/dt) samples, so
 * consecutive segments concatenate onto one uniform grid. Values are
 * clamped to [0, 100]. Deterministic for identical inputs.
 */
inline TimeSeries generate(const SignalSpec& spec, double dt, const std::string& name = "u") {
    spec.validate(dt);
    const auto n = static_cast<std::size_t>(std::llround(spec.duration / dt));
    if (n == 0) throw std::invalid_argument("SignalSpec: duration shorter than dt");
    TimeSeries s;
    s.t0 = 0.0;
    s.dt = dt;
    s.name = name;
    s.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = spec.raw_value(static_cast<double>(i) * dt);
        s.values[i] = std::clamp(v, 0.0, 100.0);
    }
    return s;
}

/// Concatenates schedule segments into one series starting at t = 0.
inline TimeSeries generate_schedule(const std::vector<SignalSpec>& schedule, double dt,
                                    const std::string& name = "u") {
    if (schedule.empty()) throw std::invalid_argument("empty signal schedule");
    TimeSeries out;
    out.t0 = 0.0;
    out.dt = dt;
    out.name = name;
    for (const auto& spec : schedule) {
        TimeSeries seg = generate(spec, dt, name);
        out.values.insert(out.values.end(), seg.values.begin(), seg.values.end());
    }
    return out;
}

/**
 * @brief Rounds a value to the nearest multiple of `step`, ties away from zero.
 *
 * Candidate grid points are compared through exact distances in value space
 * so that decimal ties (e.g. 35.05 on a 0.1 grid) resolve as intended
 * despite binary floating point.
 */
inline double quantize_value(double value, double step) {
    if (!(step > 0)) throw std::invalid_argument("quantize: step must be > 0");
    const double q = value / step;
    double k = std::floor(q);
    double lo = k * step;
    double hi = (k + 1.0) * step;
    const double dlo = value - lo;
    const double dhi = hi - value;
    const double tol = 8.0 * std::numeric_limits<double>::epsilon() *
                       std::max({std::abs(value), std::abs(lo), std::abs(hi), step});
    if (std::abs(dlo - dhi) <= tol) return value >= 0.0 ? hi : lo;
    return dlo < dhi ? lo : hi;
}

/// Per-sample quantization of a series; |out - in| <= step/2.
inline TimeSeries quantize(const TimeSeries& series, double step) {
    if (!(step > 0)) throw std::invalid_argument("quantize: step must be > 0");
    series.validate();
    TimeSeries out = series;
    for (double& v : out.values) v = quantize_value(v, step);
    return out;
}

} // namespace jet
