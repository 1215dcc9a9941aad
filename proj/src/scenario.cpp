#include "rimnull/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rimnull/version.hpp"

namespace rimnull {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& known) {
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) fail(path + "." + key, "unknown key");
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required key");
    return get_number(obj.at(key), path + "." + key);
}

long get_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

GeometryConfig parse_geometry(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path,
                   {"diameter_m", "focal_length_m", "rim_width_m", "feed_q", "design_freq_hz"});
    GeometryConfig g;
    g.diameter_m = require_number(j, "diameter_m", path);
    if (!(g.diameter_m > 0.0)) fail(path + ".diameter_m", "must be positive");
    if (j.contains("focal_length_m")) {
        g.focal_length_m = get_number(j.at("focal_length_m"), path + ".focal_length_m");
        if (!(*g.focal_length_m > 0.0)) fail(path + ".focal_length_m", "must be positive");
    }
    g.rim_width_m = require_number(j, "rim_width_m", path);
    if (!(g.rim_width_m > 0.0 && g.rim_width_m < g.diameter_m / 2.0))
        fail(path + ".rim_width_m", "must be in (0, diameter/2)");
    g.feed_q = require_number(j, "feed_q", path);
    if (!(g.feed_q > 0.0)) fail(path + ".feed_q", "must be positive");
    g.design_freq_hz = require_number(j, "design_freq_hz", path);
    if (!(g.design_freq_hz > 0.0)) fail(path + ".design_freq_hz", "must be positive");
    if (0.5 * g.wavelength() > g.rim_width_m)
        fail(path + ".rim_width_m",
             "rim narrower than one 0.5-wavelength element at the design frequency");
    return g;
}

NullTargetConfig parse_null_target(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"psi_deg", "phi_deg", "freq_hz"});
    NullTargetConfig t;
    t.psi_deg = require_number(j, "psi_deg", path);
    if (!(t.psi_deg >= 0.0 && t.psi_deg < 90.0)) fail(path + ".psi_deg", "must be in [0, 90)");
    if (j.contains("phi_deg")) t.phi_deg = get_number(j.at("phi_deg"), path + ".phi_deg");
    t.freq_hz = require_number(j, "freq_hz", path);
    if (!(t.freq_hz > 0.0)) fail(path + ".freq_hz", "must be positive");
    return t;
}

TargetsConfig parse_targets(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"mainlobe_delta", "mainlobe_freq_hz", "nulls"});
    TargetsConfig t;
    if (j.contains("mainlobe_delta")) {
        t.mainlobe_delta = get_number(j.at("mainlobe_delta"), path + ".mainlobe_delta");
        if (!(*t.mainlobe_delta >= 0.0)) fail(path + ".mainlobe_delta", "must be non-negative");
    }
    if (j.contains("mainlobe_freq_hz")) {
        t.mainlobe_freq_hz = get_number(j.at("mainlobe_freq_hz"), path + ".mainlobe_freq_hz");
        if (!(*t.mainlobe_freq_hz > 0.0)) fail(path + ".mainlobe_freq_hz", "must be positive");
    }
    if (j.contains("nulls")) {
        if (!j.at("nulls").is_array()) fail(path + ".nulls", "expected an array");
        std::size_t i = 0;
        for (const auto& item : j.at("nulls")) {
            t.nulls.push_back(parse_null_target(item, path + ".nulls[" + std::to_string(i) + "]"));
            ++i;
        }
    }
    return t;
}

const std::set<std::string> kMethods = {"pinv", "gp", "ap", "pair", "expp", "sa"};

SolverConfig parse_solver(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"method", "psk_levels", "tol", "max_iter", "c_max", "beta_step",
                             "ramp_iters", "initial_temp_scale", "cooling", "clusters"});
    SolverConfig s;
    if (!j.contains("method")) fail(path + ".method", "missing required key");
    s.method = get_string(j.at("method"), path + ".method");
    if (!kMethods.count(s.method))
        fail(path + ".method", "unknown method '" + s.method + "' (pinv|gp|ap|pair|expp|sa)");
    if (j.contains("psk_levels")) {
        s.psk_levels = static_cast<int>(get_integer(j.at("psk_levels"), path + ".psk_levels"));
        if (s.psk_levels < 2) fail(path + ".psk_levels", "must be >= 2");
    }
    if (j.contains("tol")) {
        s.tol = get_number(j.at("tol"), path + ".tol");
        if (!(s.tol > 0.0)) fail(path + ".tol", "must be positive");
    }
    if (j.contains("max_iter")) {
        s.max_iter = get_integer(j.at("max_iter"), path + ".max_iter");
        if (s.max_iter < 1) fail(path + ".max_iter", "must be >= 1");
    }
    if (j.contains("c_max")) s.c_max = get_number(j.at("c_max"), path + ".c_max");
    if (j.contains("beta_step")) s.beta_step = get_number(j.at("beta_step"), path + ".beta_step");
    if (j.contains("ramp_iters")) {
        s.ramp_iters = get_integer(j.at("ramp_iters"), path + ".ramp_iters");
        if (s.ramp_iters < 1) fail(path + ".ramp_iters", "must be >= 1");
    }
    if (j.contains("initial_temp_scale")) {
        s.sa_initial_temp_scale =
            get_number(j.at("initial_temp_scale"), path + ".initial_temp_scale");
        if (!(s.sa_initial_temp_scale >= 0.0)) fail(path + ".initial_temp_scale", "must be >= 0");
    }
    if (j.contains("cooling")) {
        s.sa_cooling = get_number(j.at("cooling"), path + ".cooling");
        if (!(s.sa_cooling > 0.0 && s.sa_cooling <= 1.0)) fail(path + ".cooling", "must be in (0, 1]");
    }
    if (j.contains("clusters")) {
        s.sa_clusters = static_cast<int>(get_integer(j.at("clusters"), path + ".clusters"));
        if (s.sa_clusters < 0) fail(path + ".clusters", "must be >= 0");
    }
    return s;
}

EvaluationConfig parse_evaluation(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path,
                   {"plane_phi_deg", "psi_start_deg", "psi_stop_deg", "psi_step_deg", "methods"});
    EvaluationConfig e;
    if (j.contains("plane_phi_deg"))
        e.plane_phi_deg = get_number(j.at("plane_phi_deg"), path + ".plane_phi_deg");
    if (j.contains("psi_start_deg"))
        e.psi_start_deg = get_number(j.at("psi_start_deg"), path + ".psi_start_deg");
    if (j.contains("psi_stop_deg"))
        e.psi_stop_deg = get_number(j.at("psi_stop_deg"), path + ".psi_stop_deg");
    if (j.contains("psi_step_deg"))
        e.psi_step_deg = get_number(j.at("psi_step_deg"), path + ".psi_step_deg");
    if (!(e.psi_step_deg > 0.0)) fail(path + ".psi_step_deg", "must be positive");
    if (!(e.psi_start_deg >= 0.0 && e.psi_stop_deg < 90.0 && e.psi_stop_deg >= e.psi_start_deg))
        fail(path + ".psi_stop_deg", "sweep must satisfy 0 <= start <= stop < 90");
    if (j.contains("methods")) {
        if (!j.at("methods").is_array()) fail(path + ".methods", "expected an array");
        e.methods.clear();
        std::size_t i = 0;
        for (const auto& m : j.at("methods")) {
            const std::string name =
                get_string(m, path + ".methods[" + std::to_string(i) + "]");
            if (name != "reference" && !kMethods.count(name))
                fail(path + ".methods[" + std::to_string(i) + "]", "unknown method '" + name + "'");
            e.methods.push_back(name);
            ++i;
        }
        if (e.methods.empty()) fail(path + ".methods", "must not be empty");
    }
    return e;
}

TableConfig parse_table(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"angle_sets", "methods"});
    TableConfig t;
    if (!j.contains("angle_sets")) fail(path + ".angle_sets", "missing required key");
    if (!j.at("angle_sets").is_array()) fail(path + ".angle_sets", "expected an array");
    std::size_t i = 0;
    for (const auto& row : j.at("angle_sets")) {
        const std::string rpath = path + ".angle_sets[" + std::to_string(i) + "]";
        if (!row.is_array() || row.empty()) fail(rpath, "expected a non-empty array of angles");
        std::vector<double> angles;
        std::size_t k = 0;
        for (const auto& a : row) {
            const double v = get_number(a, rpath + "[" + std::to_string(k) + "]");
            if (!(v > 0.0 && v < 90.0)) fail(rpath + "[" + std::to_string(k) + "]", "must be in (0, 90)");
            angles.push_back(v);
            ++k;
        }
        t.angle_sets.push_back(angles);
        ++i;
    }
    if (t.angle_sets.empty()) fail(path + ".angle_sets", "must not be empty");
    if (j.contains("methods")) {
        if (!j.at("methods").is_array()) fail(path + ".methods", "expected an array");
        t.methods.clear();
        std::size_t k = 0;
        for (const auto& m : j.at("methods")) {
            const std::string name = get_string(m, path + ".methods[" + std::to_string(k) + "]");
            if (!kMethods.count(name))
                fail(path + ".methods[" + std::to_string(k) + "]", "unknown method '" + name + "'");
            t.methods.push_back(name);
            ++k;
        }
        if (t.methods.empty()) fail(path + ".methods", "must not be empty");
    }
    return t;
}

}  // namespace

DishGeometry Scenario::make_geometry() const {
    return make_dish(geometry.diameter_m, geometry.focal_length(), geometry.rim_width_m,
                     geometry.feed_q);
}

RimLayout Scenario::make_layout() const {
    return build_rim_layout(make_geometry(), geometry.wavelength());
}

std::vector<FarFieldTarget> Scenario::make_targets() const {
    std::vector<FarFieldTarget> out;
    if (targets.mainlobe_delta) {
        FarFieldTarget m;
        m.kind = FarFieldTarget::Kind::mainlobe;
        m.psi = 0.0;
        m.phi = 0.0;
        const double freq = targets.mainlobe_freq_hz.value_or(
            targets.nulls.empty() ? geometry.design_freq_hz : targets.nulls.front().freq_hz);
        m.beta = 2.0 * kPi * freq / kSpeedOfLight;
        out.push_back(m);
    }
    for (const auto& n : targets.nulls) {
        FarFieldTarget t;
        t.kind = FarFieldTarget::Kind::null;
        t.psi = deg_to_rad(n.psi_deg);
        t.phi = deg_to_rad(n.phi_deg);
        t.beta = 2.0 * kPi * n.freq_hz / kSpeedOfLight;
        out.push_back(t);
    }
    return out;
}

OutputMeta Scenario::make_meta() const {
    OutputMeta meta;
    meta.config_hash = config_hash;
    meta.artifact_version = kArtifactVersion;
    meta.f_over_d = geometry.focal_length() / geometry.diameter_m;
    meta.field_scale = "-j*omega*mu0/(4*pi), far-field e^{-j*beta*r}/r dropped";
    return meta;
}

Scenario parse_scenario(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    expect_object(j, origin);
    reject_unknown(j, origin,
                   {"geometry", "targets", "solvers", "evaluation", "table", "seed", "output_dir"});
    Scenario s;
    s.config_hash = fnv1a64_hex(json_text);
    if (!j.contains("geometry")) fail(origin + ".geometry", "missing required key");
    s.geometry = parse_geometry(j.at("geometry"), origin + ".geometry");
    if (j.contains("targets")) s.targets = parse_targets(j.at("targets"), origin + ".targets");
    if (j.contains("solvers")) {
        if (!j.at("solvers").is_array()) fail(origin + ".solvers", "expected an array");
        std::size_t i = 0;
        for (const auto& item : j.at("solvers")) {
            s.solvers.push_back(parse_solver(item, origin + ".solvers[" + std::to_string(i) + "]"));
            ++i;
        }
    }
    if (j.contains("evaluation"))
        s.evaluation = parse_evaluation(j.at("evaluation"), origin + ".evaluation");
    if (j.contains("table")) s.table = parse_table(j.at("table"), origin + ".table");
    if (j.contains("seed")) {
        const long v = get_integer(j.at("seed"), origin + ".seed");
        if (v < 0) fail(origin + ".seed", "must be non-negative");
        s.seed = static_cast<std::uint64_t>(v);
    }
    if (j.contains("output_dir")) s.output_dir = get_string(j.at("output_dir"), origin + ".output_dir");

    bool uses_sa = false;
    for (const auto& sv : s.solvers) uses_sa |= sv.method == "sa";
    if (s.table)
        for (const auto& m : s.table->methods) uses_sa |= m == "sa";
    if (uses_sa && !s.seed)
        fail(origin + ".seed", "required when method 'sa' is requested");
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open scenario file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

}  // namespace rimnull
