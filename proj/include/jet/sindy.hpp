#pragma once

#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jet/errors.hpp"
#include "jet/plant.hpp"

namespace jet {

/// One candidate function of the state (omega [kRPM], omega_dot [kRPM/s],
/// u [0,100]).
struct Feature {
    std::string name;
    std::function<double(double, double, double)> eval;
};

/// Ordered set of candidate functions for sparse identification.
struct CandidateLibrary {
    std::vector<Feature> features;

    std::size_t size() const { return features.size(); }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(features.size());
        for (const auto& f : features) out.push_back(f.name);
        return out;
    }

    int find(const std::string& name) const {
        for (std::size_t i = 0; i < features.size(); ++i)
            if (features[i].name == name) return static_cast<int>(i);
        return -1;
    }

    /// Feature matrix: one row per sample, one column per feature.
    Eigen::MatrixXd evaluate(const std::vector<double>& omega,
                             const std::vector<double>& omega_dot,
                             const std::vector<double>& u) const {
        if (omega.size() != omega_dot.size() || omega.size() != u.size())
            throw std::invalid_argument("CandidateLibrary: input length mismatch");
        Eigen::MatrixXd phi(static_cast<Eigen::Index>(omega.size()),
                            static_cast<Eigen::Index>(features.size()));
        for (std::size_t i = 0; i < omega.size(); ++i)
            for (std::size_t j = 0; j < features.size(); ++j)
                phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    features[j].eval(omega[i], omega_dot[i], u[i]);
        return phi;
    }

    void validate() const {
        std::set<std::string> seen;
        for (const auto& f : features) {
            if (!f.eval) throw std::invalid_argument("CandidateLibrary: null evaluator");
            if (!seen.insert(f.name).second)
                throw std::invalid_argument("CandidateLibrary: duplicate feature name " + f.name);
        }
    }
};

namespace detail {

inline Feature monomial_feature(int pw, int pu, int pd) {
    std::string name;
    auto append = [&name](const char* sym, int p) {
        if (p == 0) return;
        if (!name.empty()) name += "*";
        name += sym;
        if (p > 1) name += "^" + std::to_string(p);
    };
    append("omega", pw);
    append("u", pu);
    append("omega_dot", pd);
    if (name.empty()) name = "1";
    return Feature{name, [pw, pu, pd](double w, double wd, double u) {
                       double v = 1.0;
                       for (int i = 0; i < pw; ++i) v *= w;
                       for (int i = 0; i < pu; ++i) v *= u;
                       for (int i = 0; i < pd; ++i) v *= wd;
                       return v;
                   }};
}

/// Degree-k monomials in {omega, u}: pure omega power first, then pure u
/// power, then mixed terms by descending omega power. k = 0 yields {1}.
inline std::vector<std::pair<int, int>> omega_u_monomials(int k) {
    std::vector<std::pair<int, int>> out;
    if (k == 0) {
        out.emplace_back(0, 0);
        return out;
    }
    out.emplace_back(k, 0);
    out.emplace_back(0, k);
    for (int pw = k - 1; pw >= 1; --pw) out.emplace_back(pw, k - pw);
    return out;
}

} // namespace detail

/**
 * @brief Physics-anchored candidate library for the omega-u dynamics.
 *
 * Feature 0 is the steady-state constraint f_ss(omega,u) =
 * omega - a1*u^b1 - c1, which vanishes on the engine's equilibrium
 * manifold. It is followed, degree by degree, by the omega_dot-carrying
 * monomials: every {omega,u}-monomial of degree d-1 multiplied by
 * omega_dot (pure omega power, pure u power, then mixed terms by
 * descending omega power), then omega_dot^d. Any model built from this
 * library satisfies omega_ddot = 0 wherever omega_dot = 0 and f_ss = 0,
 * so the identified dynamics keep the steady-state map by construction.
 */
inline CandidateLibrary build_library_B(double a1, double b1, double c1, int max_degree) {
    if (max_degree < 1) throw std::invalid_argument("build_library_B: max_degree must be >= 1");
    CandidateLibrary lib;
    lib.features.push_back(Feature{"f_ss", [a1, b1, c1](double w, double /*wd*/, double u) {
                                       const double up = u == 0.0 ? 0.0 : std::pow(u, b1);
                                       return w - a1 * up - c1;
                                   }});
    for (int d = 1; d <= max_degree; ++d) {
        for (const auto& [pw, pu] : detail::omega_u_monomials(d - 1))
            lib.features.push_back(detail::monomial_feature(pw, pu, 1));
        if (d >= 2) lib.features.push_back(detail::monomial_feature(0, 0, d));
    }
    lib.validate();
    return lib;
}

/**
 * @brief Plain polynomial library (all monomials in {omega, omega_dot, u}
 * up to max_degree, constant included). No steady-state anchor; kept for
 * comparison against the anchored library, not as an identification path.
 */
inline CandidateLibrary build_library_A(int max_degree) {
    if (max_degree < 1) throw std::invalid_argument("build_library_A: max_degree must be >= 1");
    CandidateLibrary lib;
    for (int d = 0; d <= max_degree; ++d)
        for (int pw = d; pw >= 0; --pw)
            for (int pu = d - pw; pu >= 0; --pu)
                lib.features.push_back(detail::monomial_feature(pw, pu, d - pw - pu));
    lib.validate();
    return lib;
}

/**
 * @brief Sparse regression result. Coefficients are in physical units;
 * normalized holds the unit-RMS-column coefficients the threshold was
 * applied to (|normalized[i]| >= threshold_used on the active set).
 * threshold_used is the absolute cutoff of the final iteration:
 * threshold_ratio * max |normalized coefficient|.
 */
struct SparseModel {
    std::vector<double> coefficients;
    std::vector<double> normalized;
    std::vector<int> active_set;
    double threshold_used = 0.0;
    double residual_rms = 0.0;
    std::vector<std::string> warnings;
};

/**
 * @brief Sequentially thresholded least squares.
 *
 * Columns are normalized to unit RMS, then ordinary least squares on the
 * active set alternates with pruning of small coefficients until the
 * active set is stable. The absolute cutoff is fixed up front as
 * threshold * max |coefficient| of the initial full solve, which makes
 * one setting serve targets of any scale; threshold = 0 reduces to plain
 * least squares. Rank-deficient active sets drop the dependent column
 * (smallest-singular-value criterion, cutoff 1e-10 relative) with a
 * recorded warning. Requires at least 10 rows per feature.
 */
inline SparseModel stlsq(const CandidateLibrary& lib, const std::vector<double>& omega,
                         const std::vector<double>& omega_dot, const std::vector<double>& u,
                         const std::vector<double>& target, double threshold,
                         int max_iters = 25) {
    lib.validate();
    if (!(threshold >= 0.0)) throw std::invalid_argument("stlsq: threshold must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("stlsq: max_iters must be >= 1");
    if (target.size() != omega.size())
        throw std::invalid_argument("stlsq: target length mismatch");
    const auto m = static_cast<Eigen::Index>(lib.size());
    const auto n = static_cast<Eigen::Index>(target.size());
    if (n < 10 * m)
        throw std::invalid_argument("stlsq: need at least 10 rows per feature (" +
                                    std::to_string(10 * m) + ", got " + std::to_string(n) + ")");

    Eigen::MatrixXd phi = lib.evaluate(omega, omega_dot, u);
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(target.data(), n);
    const double target_rms = std::sqrt(b.squaredNorm() / static_cast<double>(n));

    SparseModel model;
    model.threshold_used = threshold;
    model.coefficients.assign(lib.size(), 0.0);
    model.normalized.assign(lib.size(), 0.0);

    // Unit-RMS column scaling so one threshold serves all feature scales.
    Eigen::VectorXd scale(m);
    std::vector<int> active;
    for (Eigen::Index j = 0; j < m; ++j) {
        scale(j) = std::sqrt(phi.col(j).squaredNorm() / static_cast<double>(n));
        if (scale(j) > 0.0) {
            phi.col(j) /= scale(j);
            active.push_back(static_cast<int>(j));
        } else {
            model.warnings.push_back("feature '" + lib.features[static_cast<std::size_t>(j)].name +
                                     "' is identically zero on the data; excluded");
        }
    }

    // Least squares on the active columns, dropping dependent ones by the
    // smallest-singular-value criterion (cutoff 1e-10 relative).
    auto solve_active = [&](std::vector<int>& act) {
        Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(act.size()));
        for (std::size_t j = 0; j < act.size(); ++j)
            sub.col(static_cast<Eigen::Index>(j)) = phi.col(act[j]);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
        while (act.size() > 1 &&
               svd.singularValues()(svd.singularValues().size() - 1) <
                   1e-10 * svd.singularValues()(0)) {
            const Eigen::VectorXd null_dir = svd.matrixV().col(svd.matrixV().cols() - 1);
            Eigen::Index worst;
            null_dir.cwiseAbs().maxCoeff(&worst);
            model.warnings.push_back(
                "dropped linearly dependent feature '" +
                lib.features[static_cast<std::size_t>(act[static_cast<std::size_t>(worst)])].name +
                "'");
            act.erase(act.begin() + static_cast<std::ptrdiff_t>(worst));
            sub.resize(n, static_cast<Eigen::Index>(act.size()));
            for (std::size_t j = 0; j < act.size(); ++j)
                sub.col(static_cast<Eigen::Index>(j)) = phi.col(act[j]);
            svd.compute(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
        }
        return Eigen::VectorXd(svd.solve(b));
    };

    if (!active.empty()) {
        Eigen::VectorXd beta = solve_active(active);
        const double beta_max = beta.cwiseAbs().maxCoeff();
        const double cutoff = threshold * beta_max;
        model.threshold_used = cutoff;
        if (beta_max > 0.0) {
            for (int iter = 0; iter < max_iters && !active.empty(); ++iter) {
                std::vector<int> kept;
                for (std::size_t j = 0; j < active.size(); ++j)
                    if (std::abs(beta(static_cast<Eigen::Index>(j))) >= cutoff)
                        kept.push_back(active[j]);
                if (kept.empty()) break;
                const bool stable = kept.size() == active.size();
                if (!stable) beta = solve_active(kept);
                active = kept;
                if (stable || iter + 1 == max_iters) {
                    for (std::size_t j = 0; j < active.size(); ++j) {
                        const int col = active[j];
                        model.normalized[static_cast<std::size_t>(col)] =
                            beta(static_cast<Eigen::Index>(j));
                        model.coefficients[static_cast<std::size_t>(col)] =
                            beta(static_cast<Eigen::Index>(j)) / scale(col);
                    }
                    model.active_set = active;
                    break;
                }
            }
        }
    }

    if (model.active_set.empty() && target_rms > 0.0)
        throw numerical_error("stlsq: threshold too aggressive, no features survive");

    // Residual of the returned (unnormalized) model.
    Eigen::VectorXd coef = Eigen::Map<const Eigen::VectorXd>(model.normalized.data(), m);
    Eigen::VectorXd resid = b - phi * coef;
    model.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
    return model;
}

/**
 * @brief Maps a sparse regression on library B into an OmegaUModel.
 *
 * The active set must lie inside {f_ss, omega_dot, omega*omega_dot,
 * omega^2*omega_dot}; anything else is rejected by name. Features absent
 * from the active set contribute zero. The assembled model is validated
 * (sign and damping invariants) before being returned.
 */
inline OmegaUModel assemble_omega_u_model(const SparseModel& sparse, const CandidateLibrary& lib,
                                          double a1, double b1, double c1) {
    if (sparse.coefficients.size() != lib.size())
        throw std::invalid_argument("assemble_omega_u_model: model/library size mismatch");
    if (sparse.active_set.empty())
        throw numerical_error("assemble_omega_u_model: empty active set, no model identified");

    static const std::vector<std::string> allowed = {"f_ss", "omega_dot", "omega*omega_dot",
                                                     "omega^2*omega_dot"};
    std::string offending;
    for (int idx : sparse.active_set) {
        const std::string& name = lib.features[static_cast<std::size_t>(idx)].name;
        bool ok = false;
        for (const auto& a : allowed) ok = ok || a == name;
        if (!ok) offending += (offending.empty() ? "" : ", ") + name;
    }
    if (!offending.empty())
        throw numerical_error(
            "assemble_omega_u_model: identified terms outside the supported second-order "
            "structure: " + offending);

    auto coef_of = [&](const std::string& name) {
        const int i = lib.find(name);
        return i < 0 ? 0.0 : sparse.coefficients[static_cast<std::size_t>(i)];
    };
    OmegaUModel model;
    model.a1 = a1;
    model.b1 = b1;
    model.c1 = c1;
    model.k_ss = coef_of("f_ss");
    model.k_d = coef_of("omega_dot");
    model.k_wd = coef_of("omega*omega_dot");
    model.k_wwd = coef_of("omega^2*omega_dot");
    model.validate();
    return model;
}

} // namespace jet
