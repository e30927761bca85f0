#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "jet/errors.hpp"

namespace jet {

/// Result of a y = a*x^b + c least-squares fit.
struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double rmse = 0.0;
    double r_squared = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> sse_trail; ///< SSE after each accepted step
};

struct GoodnessStats {
    double rmse = 0.0;
    double r_squared = 0.0;
    double mae = 0.0;
    double max_err = 0.0;
};

/// Standard error metrics between a reference and a prediction.
/// R^2 = 1 - SSres/SStot with SStot floored at 1e-30.
inline GoodnessStats goodness(const std::vector<double>& y, const std::vector<double>& y_hat) {
    if (y.size() != y_hat.size())
        throw std::invalid_argument("goodness: length mismatch");
    if (y.empty()) throw std::invalid_argument("goodness: empty input");
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double ss_res = 0.0, ss_tot = 0.0, abs_sum = 0.0, abs_max = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - y_hat[i];
        ss_res += e * e;
        abs_sum += std::abs(e);
        abs_max = std::max(abs_max, std::abs(e));
        const double d = y[i] - mean;
        ss_tot += d * d;
    }
    GoodnessStats g;
    g.rmse = std::sqrt(ss_res / n);
    g.r_squared = 1.0 - ss_res / std::max(ss_tot, 1e-30);
    g.mae = abs_sum / n;
    g.max_err = abs_max;
    return g;
}

namespace detail {

inline double power_term(double x, double b) { return x == 0.0 ? 0.0 : std::pow(x, b); }

struct PowerLawProblem {
    const std::vector<double>& x;
    const std::vector<double>& y;
    bool c_fixed;
    double c_value;

    int params() const { return c_fixed ? 2 : 3; }

    double sse(const Eigen::VectorXd& theta) const {
        const double a = theta(0), b = theta(1);
        const double c = c_fixed ? c_value : theta(2);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - a * power_term(x[i], b) - c;
            s += r * r;
        }
        return s;
    }

    void residual_jacobian(const Eigen::VectorXd& theta, Eigen::VectorXd& r,
                           Eigen::MatrixXd& jac) const {
        const double a = theta(0), b = theta(1);
        const double c = c_fixed ? c_value : theta(2);
        const auto n = static_cast<Eigen::Index>(x.size());
        r.resize(n);
        jac.resize(n, params());
        for (Eigen::Index i = 0; i < n; ++i) {
            const double xi = x[static_cast<std::size_t>(i)];
            const double pw = power_term(xi, b);
            r(i) = y[static_cast<std::size_t>(i)] - a * pw - c;
            jac(i, 0) = -pw;
            jac(i, 1) = xi == 0.0 ? 0.0 : -a * pw * std::log(xi);
            if (!c_fixed) jac(i, 2) = -1.0;
        }
    }
};

/// Log-log linear regression of (x, y - c0) over points with positive
/// abscissa and shifted ordinate; seeds the Gauss-Newton iteration.
inline void log_log_init(const std::vector<double>& x, const std::vector<double>& y, double c0,
                         double& a0, double& b0) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] - c0 <= 0.0) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i] - c0);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n >= 2 && sxx * n - sx * sx > 1e-12) {
        b0 = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        a0 = std::exp((sy - b0 * sx) / n);
    } else {
        a0 = 1.0;
        b0 = 1.0;
    }
    if (!std::isfinite(a0) || a0 <= 0.0) a0 = 1.0;
    if (!std::isfinite(b0)) b0 = 1.0;
    b0 = std::clamp(b0, 0.05, 10.0);
}

} // namespace detail

/**
 * @brief Fits y = a*x^b + c by damped Gauss-Newton (Levenberg damping).
 *
 * The initial guess comes from a log-log linear regression on
 * (x, y - c0), c0 = fix_c or min(y) minus a small margin. Convergence:
 * relative step below 1e-10 or 200 iterations (the fit is then returned
 * with converged = false). With fix_c set, c is held at that value.
 *
 * Requires >= 4 points, x >= 0, and non-degenerate x.
 */
inline PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                                 std::optional<double> fix_c = std::nullopt) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: length mismatch");
    if (x.size() < 4) throw std::invalid_argument("fit_power_law: need at least 4 points");
    for (double xi : x)
        if (!(xi >= 0.0)) throw std::invalid_argument("fit_power_law: x must be >= 0");
    const double x_min = *std::min_element(x.begin(), x.end());
    const double x_max = *std::max_element(x.begin(), x.end());
    if (!(x_max > x_min)) throw std::invalid_argument("fit_power_law: degenerate x (all equal)");

    const double y_min = *std::min_element(y.begin(), y.end());
    const double y_max = *std::max_element(y.begin(), y.end());
    const double y_range = y_max - y_min;

    PowerLawFit fit;
    if (y_range == 0.0) {
        // Constant target: nothing for the power term to explain.
        fit.a = 0.0;
        fit.b = 1.0;
        fit.c = fix_c.value_or(y_min);
        const double res = fit.c - y_min;
        fit.rmse = std::abs(res);
        fit.r_squared = 0.0;
        fit.converged = true;
        return fit;
    }

    detail::PowerLawProblem prob{x, y, fix_c.has_value(), fix_c.value_or(0.0)};
    const double c0 = fix_c.value_or(y_min - 1e-3 * y_range);
    double a0, b0;
    detail::log_log_init(x, y, c0, a0, b0);

    Eigen::VectorXd theta(prob.params());
    theta(0) = a0;
    theta(1) = b0;
    if (!fix_c) theta(2) = c0;

    double sse = prob.sse(theta);
    double lambda = 1e-3;
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    fit.converged = false;
    fit.sse_trail.push_back(sse);
    int it = 0;
    for (; it < 200; ++it) {
        prob.residual_jacobian(theta, r, jac);
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd g = -jac.transpose() * r;
        bool stepped = false;
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (int d = 0; d < damped.rows(); ++d)
                damped(d, d) += lambda * std::max(jtj(d, d), 1e-30);
            Eigen::VectorXd delta = damped.ldlt().solve(g);
            Eigen::VectorXd cand = theta + delta;
            const double cand_sse = prob.sse(cand);
            if (std::isfinite(cand_sse) && cand_sse <= sse) {
                const double rel = delta.norm() / (theta.norm() + 1e-30);
                theta = cand;
                sse = cand_sse;
                fit.sse_trail.push_back(sse);
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (rel < 1e-10) fit.converged = true;
                break;
            }
            lambda *= 4.0;
        }
        if (fit.converged) break;
        if (!stepped) {
            // No damping level yields a decrease: at a numerical minimum.
            fit.converged = true;
            break;
        }
    }

    fit.a = theta(0);
    fit.b = theta(1);
    fit.c = fix_c ? *fix_c : theta(2);
    fit.iterations = it + 1;
    std::vector<double> y_hat(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y_hat[i] = fit.a * detail::power_term(x[i], fit.b) + fit.c;
    const GoodnessStats g = goodness(y, y_hat);
    fit.rmse = g.rmse;
    fit.r_squared = g.r_squared;
    return fit;
}

} // namespace jet
