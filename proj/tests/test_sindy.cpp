// Candidate libraries, sequentially thresholded least squares and model
// assembly.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "jet/engine.hpp"
#include "jet/sindy.hpp"

using namespace jet;

namespace {

EnginePreset p220() { return load_engine("P220", JET_ENGINE_DIR); }

struct Rows {
    std::vector<double> w, wd, u, target;
};

/// Random envelope states with the target evaluated from the reference
/// dynamics: every row satisfies the model exactly.
Rows model_rows(const OmegaUModel& m, int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> w_dist(m.c1, m.omega_envelope_max());
    std::uniform_real_distribution<double> wd_dist(-30.0, 30.0);
    std::uniform_real_distribution<double> u_dist(0.0, 100.0);
    Rows r;
    for (int i = 0; i < n; ++i) {
        const double w = w_dist(rng), wd = wd_dist(rng), u = u_dist(rng);
        r.w.push_back(w);
        r.wd.push_back(wd);
        r.u.push_back(u);
        r.target.push_back(eval_dynamics(m, w, wd, u));
    }
    return r;
}

} // namespace

TEST(LibraryB, Degree3ContentsAndOrder) {
    const CandidateLibrary lib = build_library_B(17.68, 0.3332, 35.0, 3);
    const std::vector<std::string> expected = {
        "f_ss",          "omega_dot",         "omega*omega_dot",
        "u*omega_dot",   "omega_dot^2",       "omega^2*omega_dot",
        "u^2*omega_dot", "omega*u*omega_dot", "omega_dot^3"};
    EXPECT_EQ(lib.names(), expected);
}

TEST(LibraryB, Degree1IsAnchorPlusVelocity) {
    const CandidateLibrary lib = build_library_B(17.68, 0.3332, 35.0, 1);
    EXPECT_EQ(lib.names(), (std::vector<std::string>{"f_ss", "omega_dot"}));
}

TEST(LibraryB, AnchorVanishesAtIdle) {
    const CandidateLibrary lib = build_library_B(17.68, 0.3332, 35.0, 3);
    EXPECT_EQ(lib.features[0].eval(35.0, 123.0, 0.0), 0.0);
}

TEST(LibraryB, EveryFeatureVanishesOnManifoldAtRest) {
    // omega_ddot = 0 wherever omega_dot = 0 and f_ss = 0 holds for any
    // coefficients because every feature vanishes there.
    const EnginePreset e = p220();
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u_dist(0.0, 100.0);
    for (int i = 0; i < 100; ++i) {
        const double u = u_dist(rng);
        const double w = steady_state_omega(e.model, u);
        for (const auto& f : lib.features)
            EXPECT_NEAR(f.eval(w, 0.0, u), 0.0, 1e-10) << f.name;
        EXPECT_NEAR(eval_dynamics(e.model, w, 0.0, u), 0.0, 1e-10);
    }
}

TEST(LibraryA, PolynomialLibraryHasAllMonomials) {
    const CandidateLibrary lib = build_library_A(2);
    // 1 + 3 linear + 6 quadratic monomials in three variables.
    EXPECT_EQ(lib.size(), 10u);
    EXPECT_EQ(lib.features[0].name, "1");
    lib.validate();
}

TEST(Stlsq, RecoversReferenceCoefficientsFromExactRows) {
    const EnginePreset e = p220();
    const Rows r = model_rows(e.model, 2000, 11);
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    const SparseModel m = stlsq(lib, r.w, r.wd, r.u, r.target, 1e-4);

    EXPECT_EQ(m.active_set, (std::vector<int>{0, 1, 2, 5}));
    EXPECT_NEAR(m.coefficients[0], e.model.k_ss, 1e-3 * std::abs(e.model.k_ss));
    EXPECT_NEAR(m.coefficients[1], e.model.k_d, 1e-3 * std::abs(e.model.k_d));
    EXPECT_NEAR(m.coefficients[2], e.model.k_wd, 1e-3 * std::abs(e.model.k_wd));
    EXPECT_NEAR(m.coefficients[5], e.model.k_wwd, 1e-3 * std::abs(e.model.k_wwd));
    for (int inactive : {3, 4, 6, 7, 8}) EXPECT_EQ(m.coefficients[inactive], 0.0);
    EXPECT_LT(m.residual_rms, 1e-8);
}

TEST(Stlsq, ZeroTargetGivesZeroModelWithoutError) {
    const EnginePreset e = p220();
    Rows r = model_rows(e.model, 500, 13);
    std::fill(r.target.begin(), r.target.end(), 0.0);
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    const SparseModel m = stlsq(lib, r.w, r.wd, r.u, r.target, 0.05);
    for (double c : m.coefficients) EXPECT_EQ(c, 0.0);
}

TEST(Stlsq, ZeroThresholdIsPlainLeastSquares) {
    const EnginePreset e = p220();
    Rows r = model_rows(e.model, 1000, 17);
    // Perturb the target so no exact sparse solution exists.
    std::mt19937 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& t : r.target) t += gauss(rng);
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    const SparseModel full = stlsq(lib, r.w, r.wd, r.u, r.target, 0.0);
    EXPECT_EQ(full.active_set.size(), lib.size());
    for (double thr : {0.01, 0.05, 0.2}) {
        const SparseModel sparse = stlsq(lib, r.w, r.wd, r.u, r.target, thr);
        EXPECT_GE(sparse.residual_rms, full.residual_rms - 1e-12);
    }
}

TEST(Stlsq, FixpointOnOwnActiveSet) {
    const EnginePreset e = p220();
    Rows r = model_rows(e.model, 1000, 19);
    std::mt19937 rng(4);
    std::normal_distribution<double> gauss(0.0, 0.5);
    for (double& t : r.target) t += gauss(rng);
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    const SparseModel first = stlsq(lib, r.w, r.wd, r.u, r.target, 0.05);

    CandidateLibrary sub;
    for (int idx : first.active_set) sub.features.push_back(lib.features[idx]);
    const SparseModel second = stlsq(sub, r.w, r.wd, r.u, r.target, 0.05);
    ASSERT_EQ(second.active_set.size(), first.active_set.size());
    for (std::size_t j = 0; j < first.active_set.size(); ++j) {
        const double a = first.coefficients[first.active_set[j]];
        const double b = second.coefficients[j];
        EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(a)));
    }
}

TEST(Stlsq, RaisingThresholdNeverGrowsActiveSet) {
    const EnginePreset e = p220();
    Rows r = model_rows(e.model, 1500, 23);
    std::mt19937 rng(6);
    std::normal_distribution<double> gauss(0.0, 2.0);
    for (double& t : r.target) t += gauss(rng);
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    std::size_t prev = lib.size() + 1;
    for (double thr : {0.0, 1e-4, 1e-3, 0.01, 0.05, 0.2, 0.5}) {
        const SparseModel m = stlsq(lib, r.w, r.wd, r.u, r.target, thr);
        EXPECT_LE(m.active_set.size(), prev) << "threshold " << thr;
        prev = m.active_set.size();
    }
}

TEST(Stlsq, DropsLinearlyDependentColumns) {
    const EnginePreset e = p220();
    const Rows r = model_rows(e.model, 800, 29);
    CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 2);
    // Duplicate evaluator under a different name: exactly collinear.
    lib.features.push_back(Feature{"omega_dot_copy", lib.features[1].eval});
    const SparseModel m = stlsq(lib, r.w, r.wd, r.u, r.target, 1e-6);
    ASSERT_FALSE(m.warnings.empty());
    EXPECT_NE(m.warnings.front().find("dependent"), std::string::npos);
}

TEST(Stlsq, TooAggressiveThresholdIsAnError) {
    const EnginePreset e = p220();
    const Rows r = model_rows(e.model, 500, 31);
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    EXPECT_THROW(stlsq(lib, r.w, r.wd, r.u, r.target, 1.5), numerical_error);
}

TEST(Stlsq, RequiresEnoughRows) {
    const EnginePreset e = p220();
    const Rows r = model_rows(e.model, 50, 37); // 9 features need >= 90 rows
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    EXPECT_THROW(stlsq(lib, r.w, r.wd, r.u, r.target, 0.05), std::invalid_argument);
}

TEST(Assemble, MapsReferenceCoefficients) {
    const EnginePreset e = p220();
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    SparseModel sparse;
    sparse.coefficients.assign(lib.size(), 0.0);
    sparse.normalized.assign(lib.size(), 0.0);
    sparse.coefficients[0] = -4.4632;
    sparse.coefficients[1] = -14.5496;
    sparse.coefficients[2] = 0.2883;
    sparse.coefficients[5] = -0.00165;
    sparse.active_set = {0, 1, 2, 5};
    const OmegaUModel m = assemble_omega_u_model(sparse, lib, 17.68, 0.3332, 35.0);
    EXPECT_DOUBLE_EQ(m.k_ss, -4.4632);
    EXPECT_DOUBLE_EQ(m.k_d, -14.5496);
    EXPECT_DOUBLE_EQ(m.k_wd, 0.2883);
    EXPECT_DOUBLE_EQ(m.k_wwd, -0.00165);
    EXPECT_DOUBLE_EQ(m.a1, 17.68);
}

TEST(Assemble, EmptyActiveSetIsAnError) {
    const EnginePreset e = p220();
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    SparseModel sparse;
    sparse.coefficients.assign(lib.size(), 0.0);
    sparse.normalized.assign(lib.size(), 0.0);
    EXPECT_THROW(assemble_omega_u_model(sparse, lib, 17.68, 0.3332, 35.0), numerical_error);
}

TEST(Assemble, UnsupportedTermIsNamedInTheError) {
    const EnginePreset e = p220();
    const CandidateLibrary lib = build_library_B(e.model.a1, e.model.b1, e.model.c1, 3);
    SparseModel sparse;
    sparse.coefficients.assign(lib.size(), 0.0);
    sparse.normalized.assign(lib.size(), 0.0);
    sparse.coefficients[0] = -4.4632;
    sparse.coefficients[1] = -14.5496;
    sparse.coefficients[3] = 0.5; // u*omega_dot is not part of the structure
    sparse.active_set = {0, 1, 3};
    try {
        assemble_omega_u_model(sparse, lib, 17.68, 0.3332, 35.0);
        FAIL() << "expected numerical_error";
    } catch (const numerical_error& err) {
        EXPECT_NE(std::string(err.what()).find("u*omega_dot"), std::string::npos);
    }
}
