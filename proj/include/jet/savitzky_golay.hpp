#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "jet/timeseries.hpp"

namespace jet {

namespace detail {

/// Least-squares polynomial filter row for a window of `window` samples,
/// evaluating the deriv-th derivative of the fit at offset `eval` within
/// the window. Positions are centered on the evaluation point, so the
/// requested derivative is factorial(deriv) * beta[deriv].
inline Eigen::RowVectorXd sg_row(int window, int degree, int deriv, int eval) {
    Eigen::MatrixXd a(window, degree + 1);
    for (int r = 0; r < window; ++r) {
        const double x = static_cast<double>(r - eval);
        double p = 1.0;
        for (int k = 0; k <= degree; ++k) {
            a(r, k) = p;
            p *= x;
        }
    }
    Eigen::MatrixXd ata = a.transpose() * a;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(degree + 1);
    e(deriv) = 1.0;
    Eigen::VectorXd z = ata.ldlt().solve(e);
    double fact = 1.0;
    for (int k = 2; k <= deriv; ++k) fact *= static_cast<double>(k);
    return fact * (a * z).transpose();
}

} // namespace detail

/**
 * @brief Savitzky-Golay smoothing / differentiation filter.
 *
 * Fits a polynomial of the given degree over a sliding window and returns
 * the deriv_order-th derivative of the fit (0 = smoothed signal).
 * Boundary samples are produced by a one-sided fit over the first/last
 * full window, so the output has the same length as the input. Derivative
 * outputs are scaled by 1/dt^deriv_order.
 *
 * Requirements: window odd, window > degree >= deriv_order,
 * deriv_order in {0,1,2}, window <= series length.
 */
inline TimeSeries savitzky_golay(const TimeSeries& series, int window, int degree,
                                 int deriv_order) {
    series.validate();
    if (window % 2 == 0) throw std::invalid_argument("savitzky_golay: window must be odd");
    if (deriv_order < 0 || deriv_order > 2)
        throw std::invalid_argument("savitzky_golay: deriv_order must be 0, 1 or 2");
    if (!(window > degree && degree >= deriv_order))
        throw std::invalid_argument("savitzky_golay: need window > degree >= deriv_order");
    const int n = static_cast<int>(series.size());
    if (window > n) throw std::invalid_argument("savitzky_golay: window longer than series");

    const int half = window / 2;
    std::vector<Eigen::RowVectorXd> rows(window);
    for (int e = 0; e < window; ++e) rows[e] = detail::sg_row(window, degree, deriv_order, e);

    const double scale = 1.0 / std::pow(series.dt, deriv_order);
    TimeSeries out = series;
    for (int i = 0; i < n; ++i) {
        int start = i - half;
        if (start < 0) start = 0;
        if (start > n - window) start = n - window;
        const int eval = i - start;
        double acc = 0.0;
        const Eigen::RowVectorXd& row = rows[eval];
        for (int r = 0; r < window; ++r) acc += row(r) * series.values[start + r];
        out.values[i] = acc * scale;
    }
    return out;
}

} // namespace jet
