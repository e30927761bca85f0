// Key-value files, CSV tables and engine preset loading.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "jet/csv.hpp"
#include "jet/engine.hpp"
#include "jet/kv.hpp"

using namespace jet;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST(Kv, RoundTripPreservesOrderAndValues) {
    KvFile kv;
    kv.set("name", std::string("demo"));
    kv.set("alpha", 1.25);
    kv.set("count", 42L);
    const std::string path = temp_path("jet_kv_roundtrip.kv");
    kv.save(path);
    const KvFile back = KvFile::load(path);
    EXPECT_EQ(back.get_string("name"), "demo");
    EXPECT_DOUBLE_EQ(back.get_double("alpha"), 1.25);
    EXPECT_EQ(back.get_long("count", -1), 42);
    EXPECT_EQ(back.keys(), (std::vector<std::string>{"name", "alpha", "count"}));
}

TEST(Kv, ParseDiagnosticsCarryLineNumbers) {
    const std::string path = temp_path("jet_kv_bad.kv");
    std::ofstream(path) << "a = 1\nnot a pair\n";
    try {
        KvFile::load(path);
        FAIL() << "expected parse error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
    }
}

TEST(Kv, TypedAccessorsValidate) {
    KvFile kv;
    kv.set("x", std::string("abc"));
    EXPECT_THROW(kv.get_double("x"), std::invalid_argument);
    EXPECT_THROW(kv.get_double("missing"), std::invalid_argument);
    EXPECT_DOUBLE_EQ(kv.get_double("missing", 7.0), 7.0);
    kv.set("flag", std::string("true"));
    EXPECT_TRUE(kv.get_bool("flag", false));
    kv.set("sig.0.kind", std::string("hold"));
    kv.set("sig.1.kind", std::string("sine"));
    EXPECT_EQ(kv.count_indexed("sig"), 2);
}

TEST(Csv, RoundTripAndColumnLookup) {
    CsvTable t;
    t.header = {"time", "x"};
    t.columns = {{0.0, 0.01, 0.02}, {1.5, -2.25, 3.125}};
    const std::string path = temp_path("jet_csv_roundtrip.csv");
    write_csv(path, t);
    const CsvTable back = read_csv(path);
    ASSERT_EQ(back.rows(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(back.columns[0][i], t.columns[0][i], 1e-12);
        EXPECT_NEAR(back.columns[1][i], t.columns[1][i], 1e-12);
    }
    EXPECT_THROW(back.column("nope"), std::invalid_argument);
}

TEST(Csv, TimeSeriesFormatHasHeaderAndSixDecimals) {
    TimeSeries s{0.0, 0.01, {35.0, 35.1, 35.2}, "omega"};
    const std::string path = temp_path("jet_csv_ts.csv");
    write_timeseries_csv(path, s);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "time,omega");
    std::getline(in, line);
    const auto dot = line.find('.');
    const auto comma = line.find(',');
    ASSERT_NE(dot, std::string::npos);
    EXPECT_GE(comma - dot - 1, 6u); // at least six fractional digits

    const TimeSeries back = read_timeseries_csv(path);
    EXPECT_EQ(back.name, "omega");
    EXPECT_NEAR(back.dt, 0.01, 1e-12);
    EXPECT_EQ(back.values.size(), 3u);
}

TEST(Csv, MixedRateTimeColumnIsRejected) {
    const std::string path = temp_path("jet_csv_jitter.csv");
    std::ofstream(path) << "time,omega\n0.000000,1\n0.010000,2\n0.021000,3\n0.030000,4\n";
    EXPECT_THROW(read_timeseries_csv(path), std::invalid_argument);
}

TEST(Csv, MalformedCellsAreDiagnosed) {
    const std::string path = temp_path("jet_csv_bad.csv");
    std::ofstream(path) << "time,omega\n0.0,abc\n";
    EXPECT_THROW(read_csv(path), std::invalid_argument);
    std::ofstream(path) << "time,omega\n0.0\n";
    EXPECT_THROW(read_csv(path), std::invalid_argument);
}

TEST(Engine, PresetsLoadAndValidate) {
    const EnginePreset e220 = load_engine("P220", JET_ENGINE_DIR);
    EXPECT_EQ(e220.name, "P220");
    EXPECT_DOUBLE_EQ(e220.model.c1, 35.0);
    EXPECT_DOUBLE_EQ(e220.spec.thrust_max, 220.0);
    const EnginePreset e160 = load_engine("p160", JET_ENGINE_DIR); // case-insensitive preset
    EXPECT_DOUBLE_EQ(e160.model.a1, 19.36);
    EXPECT_DOUBLE_EQ(e160.map.b2, 3.136);
}

TEST(Engine, MissingPresetNamesTheSearchPath) {
    try {
        load_engine("NOPE", JET_ENGINE_DIR);
        FAIL() << "expected error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("nope.kv"), std::string::npos);
    }
}

TEST(Engine, ModelAndMapRoundTripThroughKv) {
    const EnginePreset e = load_engine("P220", JET_ENGINE_DIR);
    KvFile kv;
    omega_u_model_to_kv(e.model, kv);
    thrust_map_to_kv(e.map, kv);
    const OmegaUModel m = omega_u_model_from_kv(kv);
    const ThrustMap t = thrust_map_from_kv(kv);
    EXPECT_DOUBLE_EQ(m.k_ss, e.model.k_ss);
    EXPECT_DOUBLE_EQ(m.k_wwd, e.model.k_wwd);
    EXPECT_DOUBLE_EQ(t.a2, e.map.a2);
}
