// jetbox: command-line front end for the grey-box turbojet toolkit.
//
// Subcommands: simulate, identify, fit-static, estimate, evaluate.
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jet/jet.hpp"

#ifndef JETBOX_ENGINE_DIR
#define JETBOX_ENGINE_DIR "data/engines"
#endif

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::string engine;
    std::string engine_dir = JETBOX_ENGINE_DIR;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

jet::KvFile load_config(const CommonArgs& args) {
    if (args.config_path.empty()) return jet::KvFile{};
    return jet::KvFile::load(args.config_path);
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::invalid_argument("cannot create output directory: " + dir);
}

std::vector<jet::SignalSpec> parse_schedule(const jet::KvFile& kv, const std::string& prefix) {
    std::vector<jet::SignalSpec> sched;
    const int n = kv.count_indexed(prefix);
    for (int i = 0; i < n; ++i) {
        const std::string p = prefix + "." + std::to_string(i) + ".";
        jet::SignalSpec s;
        s.kind = jet::signal_kind_from_string(kv.get_string(p + "kind"));
        s.duration = kv.get_double(p + "duration");
        s.level = kv.get_double(p + "level", 0.0);
        s.from = kv.get_double(p + "from", 0.0);
        s.to = kv.get_double(p + "to", 0.0);
        s.t_step = kv.get_double(p + "t_step", 0.0);
        s.n_steps = static_cast<int>(kv.get_long(p + "n_steps", 0));
        s.offset = kv.get_double(p + "offset", 0.0);
        s.amplitude = kv.get_double(p + "amplitude", 0.0);
        s.freq_hz = kv.get_double(p + "freq_hz", 0.0);
        s.f0 = kv.get_double(p + "f0", 0.0);
        s.f1 = kv.get_double(p + "f1", 0.0);
        s.phase = kv.get_double(p + "phase", 0.0);
        s.chirp_fmin = kv.get_double(p + "chirp_fmin", s.chirp_fmin);
        s.chirp_fmax = kv.get_double(p + "chirp_fmax", s.chirp_fmax);
        sched.push_back(s);
    }
    return sched;
}

std::vector<jet::FailureEvent> parse_failures(const jet::KvFile& kv) {
    std::vector<jet::FailureEvent> events;
    const int n = kv.count_indexed("failure");
    for (int i = 0; i < n; ++i) {
        const std::string p = "failure." + std::to_string(i) + ".";
        jet::FailureEvent ev;
        ev.t_start = kv.get_double(p + "t_start");
        ev.duration = kv.get_double(p + "duration");
        ev.c1_drop = kv.get_double(p + "c1_drop");
        ev.recovery_rate = kv.get_double(p + "recovery_rate", 2.0);
        events.push_back(ev);
    }
    return events;
}

jet::ObserverConfig parse_observer_config(const jet::KvFile& kv, double c1_nominal) {
    jet::ObserverConfig cfg;
    cfg.c1_nominal = kv.get_double("observer.c1_nominal", c1_nominal);
    cfg.k_c1 = kv.get_double("observer.k_c1", cfg.k_c1);
    cfg.q_omega = kv.get_double("observer.q_omega", cfg.q_omega);
    cfg.q_omega_dot = kv.get_double("observer.q_omega_dot", cfg.q_omega_dot);
    cfg.q_c1 = kv.get_double("observer.q_c1", cfg.q_c1);
    cfg.r = kv.get_double("observer.r", cfg.r);
    cfg.p0_omega = kv.get_double("observer.p0_omega", cfg.r);
    cfg.p0_omega_dot = kv.get_double("observer.p0_omega_dot", cfg.p0_omega_dot);
    cfg.p0_c1 = kv.get_double("observer.p0_c1", cfg.p0_c1);
    cfg.freeze_c1 = kv.get_bool("observer.freeze_c1", false);
    return cfg;
}

jet::IdentifyOptions parse_identify_options(const jet::KvFile& kv) {
    jet::IdentifyOptions opts;
    opts.quantization_step = kv.get_double("quantization_step", opts.quantization_step);
    if (kv.has("spline.smoothing")) opts.spline_smoothing = kv.get_double("spline.smoothing");
    opts.library_degree = static_cast<int>(kv.get_long("stlsq.max_degree", opts.library_degree));
    opts.stlsq_threshold = kv.get_double("stlsq.threshold", opts.stlsq_threshold);
    opts.edge_trim_s = kv.get_double("identify.edge_trim_s", opts.edge_trim_s);
    opts.steady.min_hold_s = kv.get_double("identify.min_hold_s", opts.steady.min_hold_s);
    opts.steady.tail_s = kv.get_double("identify.tail_s", opts.steady.tail_s);
    opts.steady.settle_band = kv.get_double("identify.settle_band", opts.steady.settle_band);
    opts.refine.r = kv.get_double("refine.r", opts.refine.r);
    opts.refine.q_omega_dot = kv.get_double("refine.q_omega_dot", opts.refine.q_omega_dot);
    opts.refine.q_param_rel = kv.get_double("refine.q_param_rel", opts.refine.q_param_rel);
    opts.refine.max_passes =
        static_cast<int>(kv.get_long("refine.max_passes", opts.refine.max_passes));
    opts.run_refinement = kv.get_bool("refine.enabled", true);
    return opts;
}

/// Deterministic Gaussian draws (Box-Muller over mt19937_64), so runs are
/// reproducible for a given seed independent of the standard library.
std::vector<double> gaussian_noise(std::size_t n, std::uint64_t seed, double std_dev) {
    std::vector<double> out(n, 0.0);
    if (std_dev <= 0.0) return out;
    std::mt19937_64 rng(seed);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < n; i += 2) {
        double u1 = 0.0;
        while (u1 <= 1e-300)
            u1 = static_cast<double>(rng()) / static_cast<double>(std::mt19937_64::max());
        const double u2 =
            static_cast<double>(rng()) / static_cast<double>(std::mt19937_64::max());
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[i] = std_dev * r * std::cos(two_pi * u2);
        if (i + 1 < n) out[i + 1] = std_dev * r * std::sin(two_pi * u2);
    }
    return out;
}

jet::CsvTable simulation_to_csv(const jet::SimulationLog& log) {
    jet::CsvTable t;
    t.header = {"time", "u", "omega_true", "omega_dot_true", "omega_meas", "thrust_true"};
    t.columns.resize(6);
    for (std::size_t i = 0; i < log.size(); ++i) t.columns[0].push_back(log.time_at(i));
    t.columns[1] = log.u;
    t.columns[2] = log.omega;
    t.columns[3] = log.omega_dot;
    t.columns[4] = log.omega_meas;
    t.columns[5] = log.thrust;
    return t;
}

jet::CsvTable estimate_to_csv(const jet::EstimateLog& log) {
    jet::CsvTable t;
    t.header = {"time", "u",      "omega_meas", "omega_hat",
                "omega_dot_hat", "c1_hat", "thrust_hat", "thrust_rate_hat"};
    t.columns.resize(8);
    for (std::size_t i = 0; i < log.size(); ++i) t.columns[0].push_back(log.time_at(i));
    t.columns[1] = log.u;
    t.columns[2] = log.omega_meas;
    t.columns[3] = log.omega_hat;
    t.columns[4] = log.omega_dot_hat;
    t.columns[5] = log.c1_hat;
    t.columns[6] = log.thrust_hat;
    t.columns[7] = log.thrust_rate_hat;
    return t;
}

void print_metrics(const std::string& label, const jet::MetricsReport& m) {
    std::printf("%s: MAE %.4g %s (%.3g%%), max %.4g %s (%.3g%%), RMSE %.4g\n", label.c_str(),
                m.mae, m.units.c_str(), m.mae_pct, m.max_err, m.units.c_str(), m.max_err_pct,
                m.rmse);
}

int cmd_simulate(const CommonArgs& args) {
    const jet::KvFile cfg = load_config(args);
    if (args.engine.empty()) throw std::invalid_argument("simulate: --engine is required");
    const jet::EnginePreset engine = jet::load_engine(args.engine, args.engine_dir);

    const double rate = cfg.get_double("sample_rate", 100.0);
    const double dt = 1.0 / rate;
    const double integrator_dt = cfg.get_double("integrator_dt", 1e-3);
    const double quant = cfg.get_double("quantization_step", 0.1);
    const double noise_std = cfg.get_double("meas_noise_std", 0.0);
    const std::uint64_t seed = args.seed_set ? args.seed
                                             : static_cast<std::uint64_t>(cfg.get_long("seed", 0));

    std::vector<jet::SignalSpec> sched = parse_schedule(cfg, "signal");
    if (sched.empty()) sched = jet::default_identification_schedule();
    const jet::TimeSeries u = jet::generate_schedule(sched, dt);
    const std::vector<jet::FailureEvent> failures = parse_failures(cfg);

    jet::SimulationLog log = jet::simulate(engine.model, engine.map, u, failures, integrator_dt,
                                            quant);
    if (noise_std > 0.0) {
        const std::vector<double> noise = gaussian_noise(log.size(), seed, noise_std);
        for (std::size_t i = 0; i < log.size(); ++i)
            log.omega_meas[i] = jet::quantize_value(log.omega[i] + noise[i], quant);
    }

    ensure_out_dir(args.out_dir);
    jet::write_csv(args.out_dir + "/simulation.csv", simulation_to_csv(log));

    jet::CsvTable dataset;
    dataset.header = {"time", "u", "omega"};
    dataset.columns.resize(3);
    for (std::size_t i = 0; i < log.size(); ++i) dataset.columns[0].push_back(log.time_at(i));
    dataset.columns[1] = log.u;
    dataset.columns[2] = log.omega_meas;
    jet::write_csv(args.out_dir + "/dataset.csv", dataset);

    jet::KvFile manifest;
    manifest.set("engine", engine.name);
    manifest.set("seed", static_cast<long>(seed));
    manifest.set("sample_rate", rate);
    manifest.set("integrator_dt", integrator_dt);
    manifest.set("quantization_step", quant);
    manifest.set("meas_noise_std", noise_std);
    manifest.set("samples", static_cast<long>(log.size()));
    for (std::size_t i = 0; i < sched.size(); ++i) {
        const std::string p = "signal." + std::to_string(i) + ".";
        manifest.set(p + "kind", std::string(jet::to_string(sched[i].kind)));
        manifest.set(p + "duration", sched[i].duration);
    }
    for (std::size_t i = 0; i < failures.size(); ++i) {
        const std::string p = "failure." + std::to_string(i) + ".";
        manifest.set(p + "t_start", failures[i].t_start);
        manifest.set(p + "duration", failures[i].duration);
        manifest.set(p + "c1_drop", failures[i].c1_drop);
        manifest.set(p + "recovery_rate", failures[i].recovery_rate);
    }
    manifest.save(args.out_dir + "/manifest.kv");
    std::printf("simulate: %zu samples -> %s/simulation.csv\n", log.size(),
                args.out_dir.c_str());
    return 0;
}

int cmd_identify(const CommonArgs& args, const std::string& dataset_path,
                 const std::string& validation_path) {
    const jet::KvFile cfg = load_config(args);
    const jet::CsvTable data = jet::read_csv(dataset_path);
    if (data.find("time") < 0 || data.find("u") < 0 || data.find("omega") < 0)
        throw std::invalid_argument(dataset_path + ": expected columns time,u,omega");
    const double dt = jet::uniform_step(data.column("time"), dataset_path);
    const jet::TimeSeries u{data.column("time").front(), dt, data.column("u"), "u"};
    const jet::TimeSeries omega{u.t0, dt, data.column("omega"), "omega"};

    const jet::IdentifyOptions opts = parse_identify_options(cfg);
    const jet::IdentifyResult res = jet::identify(u, omega, opts);

    ensure_out_dir(args.out_dir);
    jet::KvFile model_kv;
    model_kv.set("name", cfg.get_string("model_name", "identified"));
    jet::omega_u_model_to_kv(res.model, model_kv);
    model_kv.save(args.out_dir + "/model.kv");

    jet::KvFile report;
    report.set("dataset", dataset_path);
    report.set("steady_points", static_cast<long>(res.steady_points.size()));
    report.set("steady_fit.a1", res.steady_fit.a);
    report.set("steady_fit.b1", res.steady_fit.b);
    report.set("steady_fit.c1", res.steady_fit.c);
    report.set("steady_fit.r_squared", res.steady_fit.r_squared);
    report.set("steady_fit.rmse", res.steady_fit.rmse);
    report.set("spline.smoothing", res.spline_smoothing);
    report.set("stlsq.active_terms", static_cast<long>(res.sparse.active_set.size()));
    report.set("stlsq.residual_rms", res.sparse.residual_rms);
    report.set("refine.passes", static_cast<long>(res.refine.pass_mae.size()));
    report.set("refine.best_mae", res.refine.best_mae);

    std::string validation_csv =
        validation_path.empty() ? cfg.get_string("validation_csv", "") : validation_path;
    if (!validation_csv.empty()) {
        const jet::CsvTable val = jet::read_csv(validation_csv);
        if (val.find("time") < 0 || val.find("u") < 0 || val.find("omega") < 0)
            throw std::invalid_argument(validation_csv + ": expected columns time,u,omega");
        const double vdt = jet::uniform_step(val.column("time"), validation_csv);
        const jet::TimeSeries vu{val.column("time").front(), vdt, val.column("u"), "u"};
        const jet::TimeSeries vw{vu.t0, vdt, val.column("omega"), "omega"};
        const jet::MetricsReport metrics = jet::validate_model(res.model, vu, vw);
        jet::KvFile mkv = metrics.to_kv("validation.");
        for (const auto& k : mkv.keys()) report.set(k, mkv.get_string(k));
        // Speed errors also in RPM, the customary reporting unit.
        report.set("validation.mae_rpm", metrics.mae * 1000.0);
        report.set("validation.max_err_rpm", metrics.max_err * 1000.0);
        jet::write_csv(args.out_dir + "/metrics.csv", metrics.to_csv_row());
        std::printf("validation (omega): MAE %.0f RPM (%.3g%%), max %.0f RPM (%.3g%%)\n",
                    metrics.mae * 1000.0, metrics.mae_pct, metrics.max_err * 1000.0,
                    metrics.max_err_pct);
    }
    report.save(args.out_dir + "/report.kv");
    std::printf("identify: model -> %s/model.kv (k_ss=%.5g k_d=%.5g k_wd=%.5g k_wwd=%.5g)\n",
                args.out_dir.c_str(), res.model.k_ss, res.model.k_d, res.model.k_wd,
                res.model.k_wwd);
    return 0;
}

int cmd_fit_static(const CommonArgs& args, const std::string& xy_path, const std::string& which) {
    const jet::KvFile cfg = load_config(args);
    const jet::CsvTable data = jet::read_csv(xy_path);
    if (data.header.size() != 2)
        throw std::invalid_argument(xy_path + ": expected a two-column CSV (x,y)");
    const std::vector<double>& x = data.columns[0];
    const std::vector<double>& y = data.columns[1];

    std::optional<double> fix_c;
    if (which == "omega_u") {
        if (cfg.has("fit.fix_c")) {
            fix_c = cfg.get_double("fit.fix_c");
        } else {
            double sum = 0.0;
            int n = 0;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] == 0.0) { sum += y[i]; ++n; }
            if (n == 0)
                throw std::invalid_argument(
                    "fit-static omega_u: no x=0 rows to anchor the idle constant; "
                    "set fit.fix_c in the config");
            fix_c = sum / n;
        }
    } else if (which != "thrust_omega") {
        throw std::invalid_argument("fit-static: --which must be omega_u or thrust_omega");
    }

    const jet::PowerLawFit fit = jet::fit_power_law(x, y, fix_c);

    ensure_out_dir(args.out_dir);
    jet::KvFile out;
    out.set("which", which);
    out.set("a", fit.a);
    out.set("b", fit.b);
    out.set("c", fit.c);
    out.set("rmse", fit.rmse);
    out.set("r_squared", fit.r_squared);
    out.set("converged", fit.converged ? "true" : "false");
    out.set("iterations", static_cast<long>(fit.iterations));
    out.save(args.out_dir + "/fit.kv");

    jet::CsvTable row;
    row.header = {"a", "b", "c", "rmse", "r_squared", "converged"};
    row.columns = {{fit.a}, {fit.b}, {fit.c}, {fit.rmse}, {fit.r_squared},
                   {fit.converged ? 1.0 : 0.0}};
    jet::write_csv(args.out_dir + "/fit.csv", row);

    std::printf("fit-static %s: a=%.6g b=%.6g c=%.6g rmse=%.4g r2=%.6f%s\n", which.c_str(),
                fit.a, fit.b, fit.c, fit.rmse, fit.r_squared,
                fit.converged ? "" : " (NOT CONVERGED)");
    if (!fit.converged) throw jet::numerical_error("fit-static: regression did not converge");
    return 0;
}

int cmd_estimate(const CommonArgs& args, const std::string& meas_path,
                 const std::string& model_path, const std::string& map_path) {
    const jet::KvFile cfg = load_config(args);

    jet::OmegaUModel model;
    jet::ThrustMap map;
    double thrust_rated = cfg.get_double("thrust_rated", 0.0);
    if (!args.engine.empty()) {
        const jet::EnginePreset engine = jet::load_engine(args.engine, args.engine_dir);
        model = engine.model;
        map = engine.map;
        if (thrust_rated <= 0.0) thrust_rated = engine.spec.thrust_max;
    }
    if (!model_path.empty()) model = jet::omega_u_model_from_kv(jet::KvFile::load(model_path));
    if (!map_path.empty()) map = jet::thrust_map_from_kv(jet::KvFile::load(map_path));
    if (model.a1 == 0.0)
        throw std::invalid_argument("estimate: provide --engine or --model");
    if (map.a2 == 0.0) throw std::invalid_argument("estimate: provide --engine or --map");

    const jet::CsvTable data = jet::read_csv(meas_path);
    if (data.find("time") < 0 || data.find("u") < 0 || data.find("omega_meas") < 0)
        throw std::invalid_argument(meas_path + ": expected columns time,u,omega_meas");
    const double dt = jet::uniform_step(data.column("time"), meas_path);
    const jet::TimeSeries u{data.column("time").front(), dt, data.column("u"), "u"};
    const jet::TimeSeries meas{u.t0, dt, data.column("omega_meas"), "omega_meas"};

    const jet::ObserverConfig obs_cfg = parse_observer_config(cfg, model.c1);
    const jet::EstimateLog log = jet::run_observer(u, meas, model, map, obs_cfg);

    ensure_out_dir(args.out_dir);
    jet::write_csv(args.out_dir + "/estimate.csv", estimate_to_csv(log));

    if (data.find("thrust_true") >= 0) {
        if (thrust_rated <= 0.0)
            throw std::invalid_argument(
                "estimate: ground-truth thrust present but no rated thrust for percentage "
                "metrics; pass --engine or set thrust_rated in the config");
        // Bench-style thrust references are noisy; an optional
        // Savitzky-Golay pass smooths the reference channel before scoring.
        std::vector<double> reference = data.column("thrust_true");
        const int sg_window = static_cast<int>(cfg.get_long("estimate.sg_window", 0));
        if (sg_window > 0) {
            const int sg_degree = static_cast<int>(cfg.get_long("estimate.sg_degree", 3));
            jet::TimeSeries ref_series{u.t0, dt, reference, "thrust_true"};
            reference = jet::savitzky_golay(ref_series, sg_window, sg_degree, 0).values;
        }
        const jet::MetricsReport metrics =
            jet::score(reference, log.thrust_hat, thrust_rated, "N");
        metrics.to_kv("thrust.").save(args.out_dir + "/metrics.kv");
        jet::write_csv(args.out_dir + "/metrics.csv", metrics.to_csv_row());
        print_metrics("thrust estimate", metrics);
    }
    std::printf("estimate: %zu samples -> %s/estimate.csv\n", log.size(), args.out_dir.c_str());
    return 0;
}

int cmd_evaluate(const CommonArgs& args, const std::string& ref_path, const std::string& ref_col,
                 const std::string& est_path, const std::string& est_col, double range,
                 const std::string& units) {
    const jet::CsvTable ref = jet::read_csv(ref_path);
    const jet::CsvTable est = jet::read_csv(est_path);
    const std::vector<double>& y = ref.column(ref_col);
    const std::vector<double>& y_hat = est.column(est_col);
    if (y.size() != y_hat.size())
        throw std::invalid_argument("evaluate: column lengths differ (" +
                                    std::to_string(y.size()) + " vs " +
                                    std::to_string(y_hat.size()) + ")");
    double reference = range;
    if (reference <= 0.0) {
        double lo = y.front(), hi = y.front();
        for (double v : y) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        reference = hi - lo;
        if (reference <= 0.0) reference = 1.0;
    }
    const jet::MetricsReport metrics = jet::score(y, y_hat, reference, units);
    ensure_out_dir(args.out_dir);
    metrics.to_kv().save(args.out_dir + "/metrics.kv");
    jet::write_csv(args.out_dir + "/metrics.csv", metrics.to_csv_row());
    print_metrics(ref_col + " vs " + est_col, metrics);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grey-box turbojet modeling and thrust estimation"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonArgs args;
    app.add_option("--config", args.config_path, "flat key-value config file");
    app.add_option("--out", args.out_dir, "output directory (default .)");
    app.add_option("--engine", args.engine, "engine preset name or data file");
    app.add_option("--engine-dir", args.engine_dir, "directory with engine preset files");
    auto* seed_opt = app.add_option("--seed", args.seed, "noise seed");

    auto* sim = app.add_subcommand("simulate", "run the synthetic plant over a signal schedule");

    std::string dataset_path, validation_path;
    auto* ident = app.add_subcommand("identify", "identify the omega-u model from a dataset");
    ident->add_option("dataset", dataset_path, "CSV with time,u,omega")->required();
    ident->add_option("--validate", validation_path, "held-out CSV with time,u,omega");

    std::string xy_path, which = "thrust_omega";
    auto* fit = app.add_subcommand("fit-static", "fit a static power law to a two-column CSV");
    fit->add_option("xy", xy_path, "two-column CSV (x,y)")->required();
    fit->add_option("--which", which, "omega_u | thrust_omega");

    std::string meas_path, model_path, map_path;
    auto* est = app.add_subcommand("estimate", "run the thrust observer over measurements");
    est->add_option("measurements", meas_path, "CSV with time,u,omega_meas[,thrust_true]")
        ->required();
    est->add_option("--model", model_path, "omega-u model key-value file");
    est->add_option("--map", map_path, "thrust map key-value file");

    std::string ref_path, ref_col = "thrust_true", est_path, est_col = "thrust_hat", units = "N";
    double range = 0.0;
    auto* eval = app.add_subcommand("evaluate", "error metrics between two CSV columns");
    eval->add_option("--ref", ref_path, "reference CSV")->required();
    eval->add_option("--ref-col", ref_col, "reference column name");
    eval->add_option("--est", est_path, "estimate CSV")->required();
    eval->add_option("--est-col", est_col, "estimate column name");
    eval->add_option("--range", range, "reference range for percentages");
    eval->add_option("--units", units, "unit label for the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    args.seed_set = seed_opt->count() > 0;

    try {
        if (sim->parsed()) return cmd_simulate(args);
        if (ident->parsed()) return cmd_identify(args, dataset_path, validation_path);
        if (fit->parsed()) return cmd_fit_static(args, xy_path, which);
        if (est->parsed()) return cmd_estimate(args, meas_path, model_path, map_path);
        if (eval->parsed())
            return cmd_evaluate(args, ref_path, ref_col, est_path, est_col, range, units);
    } catch (const jet::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
