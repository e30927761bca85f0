#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jet {

/**
 * @brief Uniformly sampled scalar channel.
 *
 * The time axis is implicit: sample i lives at t0 + i*dt. Units of the
 * values are whatever the channel carries (u is dimensionless in [0,100],
 * angular speed is in kRPM, thrust in N).
 */
struct TimeSeries {
    double t0 = 0.0;                 ///< time of the first sample [s]
    double dt = 0.0;                 ///< sample period [s], > 0
    std::vector<double> values;
    std::string name = "y";

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    double back_time() const { return time_at(values.empty() ? 0 : values.size() - 1); }

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    /// Enforces dt > 0, non-empty, all samples finite.
    void validate() const {
        if (!(dt > 0.0))
            throw std::invalid_argument("TimeSeries '" + name + "': dt must be > 0");
        if (values.empty())
            throw std::invalid_argument("TimeSeries '" + name + "': no samples");
        for (double v : values)
            if (!std::isfinite(v))
                throw std::invalid_argument("TimeSeries '" + name + "': non-finite sample");
    }
};

/// Two series live on the same grid if t0, dt and length agree to 1e-9.
inline bool same_grid(const TimeSeries& a, const TimeSeries& b) {
    return a.size() == b.size() && std::abs(a.t0 - b.t0) <= 1e-9 &&
           std::abs(a.dt - b.dt) <= 1e-9;
}

} // namespace jet
