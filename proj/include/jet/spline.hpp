#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "jet/errors.hpp"
#include "jet/timeseries.hpp"

namespace jet {

/// Smoothing-spline fit of a series together with its first and second
/// analytic derivatives, all on the input time grid.
struct SplineDerivatives {
    TimeSeries smooth;
    TimeSeries deriv1;
    TimeSeries deriv2;
};

namespace detail {

/// Solves the natural smoothing-spline normal equations
/// (R + lambda Q^T Q) gamma = Q^T y for the interior second derivatives,
/// then recovers the fitted knot values f = y - lambda Q gamma.
/// lambda = 0 reproduces the interpolating natural cubic spline.
inline void smoothing_spline_knots(const std::vector<double>& y, double h, double lambda,
                                   std::vector<double>& f, std::vector<double>& m2) {
    const int n = static_cast<int>(y.size());
    const int m = n - 2;
    Eigen::VectorXd qty(m);
    for (int j = 0; j < m; ++j) qty(j) = (y[j] - 2.0 * y[j + 1] + y[j + 2]) / h;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(5 * m));
    const double d0 = 2.0 * h / 3.0 + lambda * 6.0 / (h * h);
    const double d1 = h / 6.0 - lambda * 4.0 / (h * h);
    const double d2 = lambda / (h * h);
    for (int j = 0; j < m; ++j) {
        trip.emplace_back(j, j, d0);
        if (j + 1 < m) {
            trip.emplace_back(j, j + 1, d1);
            trip.emplace_back(j + 1, j, d1);
        }
        if (j + 2 < m && lambda > 0.0) {
            trip.emplace_back(j, j + 2, d2);
            trip.emplace_back(j + 2, j, d2);
        }
    }
    Eigen::SparseMatrix<double> mat(m, m);
    mat.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(mat);
    if (solver.info() != Eigen::Success)
        throw numerical_error("smoothing spline: factorization failed");
    Eigen::VectorXd gamma = solver.solve(qty);

    f.assign(y.begin(), y.end());
    if (lambda > 0.0) {
        for (int i = 0; i < n; ++i) {
            double qg = 0.0;
            if (i <= n - 3) qg += gamma(i);
            if (i >= 1 && i <= n - 2) qg -= 2.0 * gamma(i - 1);
            if (i >= 2) qg += gamma(i - 2);
            f[i] -= lambda * qg / h;
        }
    }
    m2.assign(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < m; ++j) m2[j + 1] = gamma(j);
}

} // namespace detail

/**
 * @brief Fits a natural smoothing cubic spline and differentiates it.
 *
 * Minimizes sum (y_i - f_i)^2 + smoothing * integral f''^2. With
 * smoothing = 0 the spline interpolates the samples exactly. The returned
 * first/second derivatives are the analytic derivatives of the fitted
 * piecewise cubic evaluated at the sample times.
 *
 * Requires at least 8 samples.
 */
inline SplineDerivatives smooth_spline_derivatives(const TimeSeries& series, double smoothing) {
    series.validate();
    if (series.size() < 8)
        throw std::invalid_argument("smooth_spline_derivatives: need at least 8 samples");
    if (!(smoothing >= 0.0))
        throw std::invalid_argument("smooth_spline_derivatives: smoothing must be >= 0");

    const int n = static_cast<int>(series.size());
    const double h = series.dt;
    std::vector<double> f, m2;
    detail::smoothing_spline_knots(series.values, h, smoothing, f, m2);

    SplineDerivatives out;
    out.smooth = series;
    out.smooth.values = f;
    out.deriv1 = series;
    out.deriv1.name = series.name + "_dot";
    out.deriv2 = series;
    out.deriv2.name = series.name + "_ddot";
    out.deriv2.values = m2;
    for (int i = 0; i < n - 1; ++i)
        out.deriv1.values[i] = (f[i + 1] - f[i]) / h - h * (2.0 * m2[i] + m2[i + 1]) / 6.0;
    out.deriv1.values[n - 1] =
        (f[n - 1] - f[n - 2]) / h + h * (m2[n - 2] + 2.0 * m2[n - 1]) / 6.0;
    return out;
}

/**
 * @brief Picks the spline smoothing parameter by the discrepancy principle.
 *
 * Bisects (in log space) for the smoothing value whose fit residual RMS
 * matches target_residual_rms — typically the known measurement noise
 * level, e.g. quantization_step / sqrt(12). Returns 0 when the target is
 * not positive (interpolation).
 */
inline double choose_spline_smoothing(const TimeSeries& series, double target_residual_rms) {
    series.validate();
    if (series.size() < 8)
        throw std::invalid_argument("choose_spline_smoothing: need at least 8 samples");
    if (!(target_residual_rms > 0.0)) return 0.0;

    const double h = series.dt;
    auto residual_rms = [&](double lambda) {
        std::vector<double> f, m2;
        detail::smoothing_spline_knots(series.values, h, lambda, f, m2);
        double ss = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double r = series.values[i] - f[i];
            ss += r * r;
        }
        return std::sqrt(ss / static_cast<double>(f.size()));
    };

    double lo = -10.0, hi = 12.0;
    if (residual_rms(std::pow(10.0, hi)) <= target_residual_rms) return std::pow(10.0, hi);
    if (residual_rms(std::pow(10.0, lo)) >= target_residual_rms) return std::pow(10.0, lo);
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (residual_rms(std::pow(10.0, mid)) < target_residual_rms) lo = mid;
        else hi = mid;
    }
    return std::pow(10.0, 0.5 * (lo + hi));
}

} // namespace jet
