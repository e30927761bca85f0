// Identification pipeline and the jetbox command-line interface.

#include <cstdlib>
#include <random>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "jet/jet.hpp"

using namespace jet;

namespace {

EnginePreset p220() { return load_engine("P220", JET_ENGINE_DIR); }

std::filesystem::path test_dir() {
    auto dir = std::filesystem::temp_directory_path() / "jet_pipeline_test";
    std::filesystem::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, std::string* out = nullptr) {
    const auto dir = test_dir();
    const std::string out_file = (dir / "cli_out.txt").string();
    const std::string cmd =
        std::string(JETBOX_BIN) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (out) {
        std::ifstream in(out_file);
        std::stringstream ss;
        ss << in.rdbuf();
        *out = ss.str();
    }
    return WEXITSTATUS(status);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(SteadyExtraction, FindsSettledHoldsAndMergesLevels) {
    const EnginePreset e = p220();
    std::vector<SignalSpec> sched;
    for (double level : {0.0, 30.0, 60.0, 30.0}) {
        SignalSpec s;
        s.kind = SignalKind::hold;
        s.level = level;
        s.duration = 12.0;
        sched.push_back(s);
    }
    SignalSpec brief;
    brief.kind = SignalKind::hold;
    brief.level = 90.0;
    brief.duration = 2.0; // too short to count
    sched.push_back(brief);
    const TimeSeries u = generate_schedule(sched, 0.01);
    const SimulationLog log = simulate(e.model, e.map, u, {}, 1e-3);
    const auto pts = extract_steady_points(u, log.series(log.omega_meas, "omega"));
    ASSERT_EQ(pts.size(), 3u); // 0, 30 (merged twice), 60
    EXPECT_EQ(pts[0].u, 0.0);
    EXPECT_NEAR(pts[0].omega, 35.0, 0.06);
    EXPECT_EQ(pts[1].u, 30.0);
    EXPECT_NEAR(pts[1].omega, steady_state_omega(e.model, 30.0), 0.06);
    EXPECT_GT(pts[1].samples, pts[2].samples); // two merged holds
}

TEST(Identify, RecoversModelFromQuantizedRecord) {
    const EnginePreset e = p220();
    const TimeSeries u = generate_schedule(default_identification_schedule(), 0.01);
    const SimulationLog log = simulate(e.model, e.map, u, {}, 1e-3, 0.1);
    const IdentifyResult res = identify(u, log.series(log.omega_meas, "omega"), {});

    EXPECT_EQ(res.sparse.active_set, (std::vector<int>{0, 1, 2, 5}));
    EXPECT_NEAR(res.steady_fit.a, e.model.a1, 0.02 * e.model.a1);
    EXPECT_NEAR(res.steady_fit.b, e.model.b1, 0.02 * e.model.b1);
    EXPECT_GT(res.steady_fit.r_squared, 0.999);
    EXPECT_NEAR(res.model.k_ss, e.model.k_ss, 0.10 * std::abs(e.model.k_ss));
    EXPECT_NEAR(res.model.k_d, e.model.k_d, 0.10 * std::abs(e.model.k_d));

    // The identified model reproduces a held-out run well inside the
    // reference ceiling of 1.8% of the speed range.
    const TimeSeries u_val = generate_schedule(default_validation_schedule(), 0.01);
    const SimulationLog val= simulate(e.model, e.map, u_val, {}, 1e-3, 0.1);
    const MetricsReport m = validate_model(res.model, u_val, val.series(val.omega_meas, "omega"));
    EXPECT_LT(m.mae_pct, 1.8);
}

TEST(SteadyExtraction, RejectsDegenerateWindowOptions) {
    const EnginePreset e = p220();
    const TimeSeries u = generate_schedule({[] {
                                               SignalSpec s;
                                               s.kind = SignalKind::hold;
                                               s.level = 20.0;
                                               s.duration = 10.0;
                                               return s;
                                           }()},
                                           0.01);
    const SimulationLog log = simulate(e.model, e.map, u, {}, 1e-3);
    SteadyExtractionOptions opts;
    opts.tail_s = 0.0;
    EXPECT_THROW(extract_steady_points(u, log.series(log.omega, "w"), opts),
                 std::invalid_argument);
    opts = SteadyExtractionOptions{};
    opts.min_hold_s = 1.0;
    opts.tail_s = 3.0; // tail longer than the hold requirement
    EXPECT_THROW(extract_steady_points(u, log.series(log.omega, "w"), opts),
                 std::invalid_argument);
}

TEST(Identify, RecoversActiveSetUnderQuantizationEquivalentNoise) {
    // Gaussian noise at the quantization-equivalent level (0.1/sqrt(12)
    // kRPM) on the speed channel, both engines.
    for (const char* name : {"P220", "P160"}) {
        const EnginePreset e = load_engine(name, JET_ENGINE_DIR);
        const TimeSeries u = generate_schedule(default_identification_schedule(), 0.01);
        const SimulationLog log = simulate(e.model, e.map, u, {}, 1e-3);
        std::mt19937 rng(99);
        std::normal_distribution<double> gauss(0.0, 0.1 / std::sqrt(12.0));
        TimeSeries meas = log.series(log.omega, "omega");
        for (double& v : meas.values) v += gauss(rng);
        const IdentifyResult res = identify(u, meas, {});
        EXPECT_EQ(res.sparse.active_set, (std::vector<int>{0, 1, 2, 5})) << name;
        EXPECT_NEAR(res.model.k_ss, e.model.k_ss, 0.15 * std::abs(e.model.k_ss)) << name;
    }
}

TEST(Identify, NoiseFreePipelineRecoversActiveSet) {
    const EnginePreset e = p220();
    const TimeSeries u = generate_schedule(default_identification_schedule(), 0.01);
    const SimulationLog log = simulate(e.model, e.map, u, {}, 1e-3);
    IdentifyOptions opts;
    opts.quantization_step = 0.0; // declared noise-free: interpolating spline
    const IdentifyResult res = identify(u, log.series(log.omega, "omega"), opts);
    EXPECT_EQ(res.sparse.active_set, (std::vector<int>{0, 1, 2, 5}));
    EXPECT_NEAR(res.model.k_ss, e.model.k_ss, 0.05 * std::abs(e.model.k_ss));
}

TEST(Identify, RequiresIdleHold) {
    const EnginePreset e = p220();
    std::vector<SignalSpec> sched;
    for (double level : {20.0, 40.0, 60.0, 80.0}) {
        SignalSpec s;
        s.kind = SignalKind::hold;
        s.level = level;
        s.duration = 12.0;
        sched.push_back(s);
    }
    const TimeSeries u = generate_schedule(sched, 0.01);
    const SimulationLog log = simulate(e.model, e.map, u, {}, 1e-3);
    EXPECT_THROW(identify(u, log.series(log.omega_meas, "omega"), {}), std::invalid_argument);
}

TEST(Cli, SimulateWritesContractCsvAndIsDeterministic) {
    const auto dir = test_dir();
    const std::string out1 = (dir / "sim1").string();
    const std::string out2 = (dir / "sim2").string();
    const std::string cfg_path = (dir / "sim.kv").string();
    std::ofstream(cfg_path) << "signal.0.kind = step\n"
                               "signal.0.from = 20\n"
                               "signal.0.to = 60\n"
                               "signal.0.t_step = 2\n"
                               "signal.0.duration = 8\n"
                               "meas_noise_std = 0.05\n";
    ASSERT_EQ(run_cli("simulate --engine P220 --config " + cfg_path + " --out " + out1), 0);
    ASSERT_EQ(run_cli("simulate --engine P220 --config " + cfg_path + " --out " + out2), 0);

    std::ifstream sim(out1 + "/simulation.csv");
    std::string header;
    std::getline(sim, header);
    EXPECT_EQ(header, "time,u,omega_true,omega_dot_true,omega_meas,thrust_true");
    EXPECT_EQ(read_file(out1 + "/simulation.csv"), read_file(out2 + "/simulation.csv"));
    EXPECT_TRUE(std::filesystem::exists(out1 + "/manifest.kv"));
    EXPECT_TRUE(std::filesystem::exists(out1 + "/dataset.csv"));

    // A different seed changes the noisy measurement channel.
    const std::string out3 = (dir / "sim3").string();
    ASSERT_EQ(run_cli("simulate --engine P220 --config " + cfg_path + " --seed 7 --out " + out3),
              0);
    EXPECT_NE(read_file(out1 + "/simulation.csv"), read_file(out3 + "/simulation.csv"));
}

TEST(Cli, MissingEngineFileFailsWithUsageError) {
    std::string out;
    const int code = run_cli("simulate --engine /no/such/engine.kv --out /tmp", &out);
    EXPECT_EQ(code, 1);
    EXPECT_NE(out.find("/no/such/engine.kv"), std::string::npos);
}

TEST(Cli, EstimateWithAndWithoutGroundTruth) {
    const auto dir = test_dir();
    const std::string sim_out = (dir / "est_sim").string();
    const std::string cfg_path = (dir / "est.kv").string();
    std::ofstream(cfg_path) << "signal.0.kind = sine\n"
                               "signal.0.offset = 40\n"
                               "signal.0.amplitude = 20\n"
                               "signal.0.freq_hz = 0.2\n"
                               "signal.0.duration = 20\n";
    ASSERT_EQ(run_cli("simulate --engine P220 --config " + cfg_path + " --out " + sim_out), 0);

    // Build measurement CSVs from the simulation log: with and without truth.
    const CsvTable sim = read_csv(sim_out + "/simulation.csv");
    CsvTable meas;
    meas.header = {"time", "u", "omega_meas", "thrust_true"};
    meas.columns = {sim.column("time"), sim.column("u"), sim.column("omega_meas"),
                    sim.column("thrust_true")};
    const std::string with_truth = (dir / "meas_truth.csv").string();
    write_csv(with_truth, meas);
    meas.header.pop_back();
    meas.columns.pop_back();
    const std::string without_truth = (dir / "meas_plain.csv").string();
    write_csv(without_truth, meas);

    const std::string est1 = (dir / "est1").string();
    std::string out;
    ASSERT_EQ(run_cli("estimate " + with_truth + " --engine P220 --out " + est1, &out), 0);
    EXPECT_TRUE(std::filesystem::exists(est1 + "/metrics.kv"));
    std::ifstream est_csv(est1 + "/estimate.csv");
    std::string header;
    std::getline(est_csv, header);
    EXPECT_EQ(header,
              "time,u,omega_meas,omega_hat,omega_dot_hat,c1_hat,thrust_hat,thrust_rate_hat");

    const std::string est2 = (dir / "est2").string();
    ASSERT_EQ(run_cli("estimate " + without_truth + " --engine P220 --out " + est2), 0);
    EXPECT_FALSE(std::filesystem::exists(est2 + "/metrics.kv"));
    EXPECT_TRUE(std::filesystem::exists(est2 + "/estimate.csv"));

    // Smoothing the reference channel must not hurt on clean truth.
    const std::string est3 = (dir / "est3").string();
    const std::string sg_cfg = (dir / "sg.kv").string();
    std::ofstream(sg_cfg) << "estimate.sg_window = 21\n";
    ASSERT_EQ(run_cli("estimate " + with_truth + " --engine P220 --config " + sg_cfg +
                      " --out " + est3),
              0);
    const KvFile plain = KvFile::load(est1 + "/metrics.kv");
    const KvFile smoothed = KvFile::load(est3 + "/metrics.kv");
    EXPECT_NEAR(smoothed.get_double("thrust.mae"), plain.get_double("thrust.mae"), 0.15);
}

TEST(Cli, IdentifyIsDeterministicAcrossRuns) {
    const auto dir = test_dir();
    const std::string cfg_path = (dir / "ident.kv").string();
    {
        std::ofstream cfg(cfg_path);
        cfg << "signal.0.kind = hold\nsignal.0.level = 0\nsignal.0.duration = 10\n";
        int idx = 1;
        for (double level : {25.0, 55.0, 85.0}) {
            cfg << "signal." << idx << ".kind = hold\nsignal." << idx << ".level = " << level
                << "\nsignal." << idx << ".duration = 10\n";
            ++idx;
        }
        cfg << "signal.4.kind = sine\nsignal.4.offset = 50\nsignal.4.amplitude = 30\n"
               "signal.4.freq_hz = 0.25\nsignal.4.duration = 30\n"
               "signal.5.kind = sine\nsignal.5.offset = 35\nsignal.5.amplitude = 20\n"
               "signal.5.freq_hz = 0.4\nsignal.5.duration = 20\n"
               "signal.6.kind = chirp\nsignal.6.offset = 45\nsignal.6.amplitude = 25\n"
               "signal.6.f0 = 0.1\nsignal.6.f1 = 0.45\nsignal.6.duration = 30\n";
    }
    const std::string sim_out = (dir / "ident_sim").string();
    ASSERT_EQ(run_cli("simulate --engine P220 --config " + cfg_path + " --out " + sim_out), 0);
    const std::string m1 = (dir / "ident_m1").string();
    const std::string m2 = (dir / "ident_m2").string();
    ASSERT_EQ(run_cli("identify " + sim_out + "/dataset.csv --out " + m1), 0);
    ASSERT_EQ(run_cli("identify " + sim_out + "/dataset.csv --out " + m2), 0);
    const std::string model = read_file(m1 + "/model.kv");
    EXPECT_EQ(model, read_file(m2 + "/model.kv"));
    EXPECT_NE(model.find("k_ss"), std::string::npos);
}

TEST(Cli, FitStaticRejectsDegenerateInput) {
    const auto dir = test_dir();
    const std::string xy = (dir / "two_points.csv").string();
    std::ofstream(xy) << "x,y\n1.0,2.0\n2.0,3.0\n";
    std::string out;
    EXPECT_EQ(run_cli("fit-static " + xy + " --out " + dir.string(), &out), 1);
}

TEST(Cli, FitStaticFitsThrustTable) {
    const auto dir = test_dir();
    const EnginePreset e = p220();
    const std::string xy = (dir / "thrust_table.csv").string();
    CsvTable t;
    t.header = {"omega", "thrust"};
    t.columns.resize(2);
    for (double w = 35.0; w <= 117.0; w += 2.0) {
        t.columns[0].push_back(w);
        t.columns[1].push_back(thrust(e.map, w));
    }
    write_csv(xy, t);
    const std::string out_dir = (dir / "fit").string();
    ASSERT_EQ(run_cli("fit-static " + xy + " --which thrust_omega --out " + out_dir), 0);
    const KvFile fit = KvFile::load(out_dir + "/fit.kv");
    EXPECT_NEAR(fit.get_double("b"), e.map.b2, 1e-4);
    EXPECT_EQ(fit.get_string("converged"), "true");
}

TEST(Cli, EvaluateComparesTwoCsvs) {
    const auto dir = test_dir();
    CsvTable a;
    a.header = {"time", "thrust_true"};
    a.columns = {{0.0, 0.01, 0.02}, {10.0, 11.0, 12.0}};
    CsvTable b;
    b.header = {"time", "thrust_hat"};
    b.columns = {{0.0, 0.01, 0.02}, {10.5, 11.0, 11.5}};
    const std::string ref = (dir / "eval_ref.csv").string();
    const std::string est = (dir / "eval_est.csv").string();
    write_csv(ref, a);
    write_csv(est, b);
    const std::string out_dir = (dir / "eval").string();
    ASSERT_EQ(run_cli("evaluate --ref " + ref + " --est " + est + " --range 100 --out " +
                      out_dir),
              0);
    const KvFile m = KvFile::load(out_dir + "/metrics.kv");
    EXPECT_NEAR(m.get_double("mae"), (0.5 + 0.0 + 0.5) / 3.0, 1e-12);
    EXPECT_NEAR(m.get_double("max_err"), 0.5, 1e-12);
    // Percentages recompute from the raw values and the declared range.
    EXPECT_NEAR(m.get_double("mae_pct"), 100.0 * m.get_double("mae") / 100.0, 1e-9);
    EXPECT_NEAR(m.get_double("max_err_pct"), 100.0 * m.get_double("max_err") / 100.0, 1e-9);
}

TEST(Cli, IdentifyRejectsShortDataset) {
    const auto dir = test_dir();
    const std::string short_csv = (dir / "short.csv").string();
    std::ofstream f(short_csv);
    f << "time,u,omega\n";
    for (int i = 0; i < 50; ++i)
        f << i * 0.01 << ",0,35\n";
    f.close();
    std::string out;
    EXPECT_EQ(run_cli("identify " + short_csv + " --out " + dir.string(), &out), 1);
}

TEST(Cli, UsageErrorsExitOne) {
    std::string out;
    EXPECT_EQ(run_cli("frobnicate", &out), 1);
    EXPECT_EQ(run_cli("identify", &out), 1); // missing required dataset argument
}
