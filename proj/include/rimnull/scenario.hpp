#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rimnull/geometry.hpp"
#include "rimnull/io.hpp"
#include "rimnull/po_field.hpp"
#include "rimnull/solvers.hpp"

namespace rimnull {

// Scenario validation failure. The message names the offending field.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A referenced output (e.g. a weights file) is missing.
class MissingDependencyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct GeometryConfig {
    double diameter_m = 0.0;
    std::optional<double> focal_length_m;  // default: 0.4 * D
    double rim_width_m = 0.0;
    double feed_q = 1.0;
    double design_freq_hz = 0.0;

    double focal_length() const { return focal_length_m.value_or(kDefaultFOverD * diameter_m); }
    double wavelength() const { return kSpeedOfLight / design_freq_hz; }
};

struct NullTargetConfig {
    double psi_deg = 0.0;
    double phi_deg = 0.0;
    double freq_hz = 0.0;
};

struct TargetsConfig {
    std::optional<double> mainlobe_delta;    // mainlobe row present iff set
    std::optional<double> mainlobe_freq_hz;  // default: first null's frequency
    std::vector<NullTargetConfig> nulls;
};

struct SolverConfig {
    std::string method;     // pinv | gp | ap | pair | expp | sa
    int psk_levels = 4;
    double tol = 1e-10;
    long max_iter = -1;     // -1: per-method default
    std::optional<double> c_max;
    std::optional<double> beta_step;
    long ramp_iters = 1000;
    double sa_initial_temp_scale = 0.1;
    double sa_cooling = 0.999;
    int sa_clusters = 0;
};

struct EvaluationConfig {
    double plane_phi_deg = 0.0;
    double psi_start_deg = 0.0;
    double psi_stop_deg = 5.0;
    double psi_step_deg = 0.005;
    std::vector<std::string> methods = {"reference"};
};

struct TableConfig {
    std::vector<std::vector<double>> angle_sets;  // psi_deg per row, H-plane
    std::vector<std::string> methods = {"pinv", "gp", "pair"};
};

struct Scenario {
    GeometryConfig geometry;
    TargetsConfig targets;
    std::vector<SolverConfig> solvers;
    std::optional<EvaluationConfig> evaluation;
    std::optional<TableConfig> table;
    std::optional<std::uint64_t> seed;
    std::string output_dir = "out";

    std::string config_hash;  // FNV-1a of the scenario file bytes

    DishGeometry make_geometry() const;
    RimLayout make_layout() const;
    // Null targets plus the optional mainlobe target, ready for assembly.
    std::vector<FarFieldTarget> make_targets() const;
    double mainlobe_delta_or_zero() const { return targets.mainlobe_delta.value_or(0.0); }
    OutputMeta make_meta() const;
};

// Parses and validates a scenario file (strict JSON; unknown keys rejected).
// Throws ConfigError with a message naming the offending field.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text, const std::string& origin = "<memory>");

}  // namespace rimnull
