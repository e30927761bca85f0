#pragma once

#include <cctype>
#include <fstream>
#include <stdexcept>
#include <string>

#include "jet/kv.hpp"
#include "jet/plant.hpp"

namespace jet {

/**
 * @brief An engine data file: manufacturer ratings plus the identified
 * dynamic and thrust models. Presets (p160, p220) ship as data files so
 * custom engines can be supplied the same way.
 */
struct EnginePreset {
    std::string name;
    EngineSpec spec;
    OmegaUModel model;
    ThrustMap map;
};

inline OmegaUModel omega_u_model_from_kv(const KvFile& kv) {
    OmegaUModel m;
    m.a1 = kv.get_double("a1");
    m.b1 = kv.get_double("b1");
    m.c1 = kv.get_double("c1");
    m.k_ss = kv.get_double("k_ss");
    m.k_d = kv.get_double("k_d");
    m.k_wd = kv.get_double("k_wd");
    m.k_wwd = kv.get_double("k_wwd");
    m.validate();
    return m;
}

inline void omega_u_model_to_kv(const OmegaUModel& m, KvFile& kv) {
    kv.set("a1", m.a1);
    kv.set("b1", m.b1);
    kv.set("c1", m.c1);
    kv.set("k_ss", m.k_ss);
    kv.set("k_d", m.k_d);
    kv.set("k_wd", m.k_wd);
    kv.set("k_wwd", m.k_wwd);
}

inline ThrustMap thrust_map_from_kv(const KvFile& kv) {
    ThrustMap t;
    t.a2 = kv.get_double("a2");
    t.b2 = kv.get_double("b2");
    t.c2 = kv.get_double("c2");
    t.validate();
    return t;
}

inline void thrust_map_to_kv(const ThrustMap& t, KvFile& kv) {
    kv.set("a2", t.a2);
    kv.set("b2", t.b2);
    kv.set("c2", t.c2);
}

inline EnginePreset load_engine_file(const std::string& path) {
    const KvFile kv = KvFile::load(path);
    EnginePreset e;
    e.name = kv.get_string("name", path);
    e.spec.name = e.name;
    e.spec.omega_idle = kv.get_double("omega_idle");
    e.spec.omega_max = kv.get_double("omega_max");
    e.spec.thrust_idle = kv.get_double("thrust_idle");
    e.spec.thrust_max = kv.get_double("thrust_max");
    e.spec.validate();
    e.model = omega_u_model_from_kv(kv);
    e.map = thrust_map_from_kv(kv);
    return e;
}

/// Resolves `<preset name or path>`: an existing file wins, otherwise the
/// lowercased name is looked up as `<engine_dir>/<name>.kv`.
inline EnginePreset load_engine(const std::string& name_or_path, const std::string& engine_dir) {
    if (std::ifstream probe(name_or_path); probe.good())
        return load_engine_file(name_or_path);
    std::string lower = name_or_path;
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const std::string candidate = engine_dir + "/" + lower + ".kv";
    if (std::ifstream probe(candidate); probe.good()) return load_engine_file(candidate);
    throw std::invalid_argument("engine not found: '" + name_or_path + "' (no such file, and no " +
                                candidate + ")");
}

} // namespace jet
