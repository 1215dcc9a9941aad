#include "rimnull/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rimnull/analysis.hpp"

namespace rimnull {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json meta_json(const OutputMeta& meta) {
    return json{{"artifact_version", meta.artifact_version},
                {"config_hash", meta.config_hash},
                {"f_over_d", meta.f_over_d},
                {"field_scale", meta.field_scale}};
}

std::string constraint_name(WeightConstraint c) {
    switch (c) {
        case WeightConstraint::unconstrained: return "unconstrained";
        case WeightConstraint::unimodular: return "unimodular";
        case WeightConstraint::psk: return "psk";
    }
    return "unknown";
}

long default_max_iter(const std::string& method) {
    if (method == "expp") return 5000;
    if (method == "sa") return 100000;
    return 200000;  // gp / ap
}

// Assembly preconditions (duplicate targets and the like) surface via the
// scenario, so report them as configuration errors.
NullingSystem assemble_checked(const std::vector<FarFieldTarget>& targets, double delta,
                               const RimLayout& layout, const DishGeometry& geom) {
    try {
        return assemble_system(targets, delta, layout, geom);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("targets: ") + e.what());
    }
}

void write_weights_json(const fs::path& path, const OutputMeta& meta, const WeightSolution& sol,
                        double residual_rel) {
    json weights = json::array();
    for (Eigen::Index i = 0; i < sol.w.size(); ++i)
        weights.push_back(json::array({sol.w(i).real(), sol.w(i).imag()}));
    json doc{{"meta", meta_json(meta)},
             {"method", sol.method},
             {"constraint", constraint_name(sol.constraint)},
             {"psk_levels", sol.psk_levels},
             {"iterations", sol.iterations},
             {"converged", sol.converged},
             {"objective", sol.objective()},
             {"residual_rel", residual_rel},
             {"snap_distance", sol.snap_distance},
             {"zero_phase_events", sol.zero_phase_events},
             {"weights", weights}};
    write_file(path.string(), doc.dump(1) + "\n");
}

void write_trace_csv(const fs::path& path, const OutputMeta& meta, const WeightSolution& sol) {
    std::string out = meta_csv_block(meta);
    out += "iter,objective,c\n";
    for (std::size_t k = 0; k < sol.objective_trace.size(); ++k) {
        const double c = k < sol.penalty_trace.size() ? sol.penalty_trace[k] : 0.0;
        out += std::to_string(k) + "," + format_double(sol.objective_trace[k]) + "," +
               format_double(c) + "\n";
    }
    write_file(path.string(), out);
}

void write_null_report_json(const fs::path& path, const OutputMeta& meta, const NullReport& rep) {
    json targets = json::array();
    for (const auto& t : rep.targets) {
        targets.push_back(json{{"psi_deg", rad_to_deg(t.target.psi)},
                               {"phi_deg", rad_to_deg(t.target.phi)},
                               {"freq_hz", t.target.beta * kSpeedOfLight / (2.0 * kPi)},
                               {"suppression_db", t.suppression_db},
                               {"residual", t.residual}});
    }
    json doc{{"meta", meta_json(meta)},
             {"targets", targets},
             {"objective", rep.objective}};
    if (rep.mainlobe_delta_db)
        doc["mainlobe_delta_db"] = *rep.mainlobe_delta_db;
    else
        doc["mainlobe_delta_db"] = nullptr;
    write_file(path.string(), doc.dump(1) + "\n");
}

Eigen::VectorXcd load_weights_json(const fs::path& path, std::size_t expected_size) {
    std::ifstream in(path);
    if (!in)
        throw MissingDependencyError("missing weights file: " + path.string() +
                                     " (run the solve command first)");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": invalid weights file: " + e.what());
    }
    if (!doc.contains("weights") || !doc.at("weights").is_array())
        throw ConfigError(path.string() + ": weights array missing");
    const auto& arr = doc.at("weights");
    if (arr.size() != expected_size)
        throw ConfigError(path.string() + ": weights length does not match the layout");
    Eigen::VectorXcd w(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
        w(static_cast<Eigen::Index>(i)) =
            cdouble(arr[i][0].get<double>(), arr[i][1].get<double>());
    return w;
}

}  // namespace

WeightSolution run_solver(const NullingSystem& sys, const SolverConfig& cfg,
                          std::optional<std::uint64_t> seed) {
    const long max_iter = cfg.max_iter > 0 ? cfg.max_iter : default_max_iter(cfg.method);
    if (cfg.method == "pinv") return solve_pseudoinverse(sys);
    if (cfg.method == "gp") return solve_gp(sys, {cfg.tol, 50, max_iter});
    if (cfg.method == "ap") return solve_ap(sys, {cfg.tol, 50, max_iter});
    if (cfg.method == "pair") {
        const WeightSolution pinv = solve_pseudoinverse(sys);
        return pair_merge_closed_form(sys, pinv.w).solution;
    }
    if (cfg.method == "expp") {
        PenaltySchedule sched;
        sched.c_max = cfg.c_max.value_or(0.0);
        sched.beta_step = cfg.beta_step.value_or(0.0);
        sched.ramp_iters = cfg.ramp_iters;
        return solve_expp(sys, cfg.psk_levels, sched, {cfg.tol, 50, max_iter});
    }
    if (cfg.method == "sa") {
        if (!seed) throw ConfigError("seed: required when method 'sa' is requested");
        SaSchedule sched;
        sched.initial_temp_scale = cfg.sa_initial_temp_scale;
        sched.cooling = cfg.sa_cooling;
        sched.max_iter = max_iter;
        sched.clusters = cfg.sa_clusters;
        return solve_sa_baseline(sys, cfg.psk_levels, *seed, sched);
    }
    throw ConfigError("solvers.method: unknown method '" + cfg.method + "'");
}

double average_suppression_db(const NullingSystem& sys, const Eigen::VectorXcd& w) {
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(sys.cols());
    double ref_power = 0.0, got_power = 0.0;
    for (Eigen::Index i = 0; i < sys.rows(); ++i) {
        if (sys.targets[static_cast<std::size_t>(i)].kind != FarFieldTarget::Kind::null) continue;
        const cdouble base = sys.fixed_field_values(i);
        ref_power += std::norm(base + cdouble(sys.A.row(i).sum()));
        got_power += std::norm(base + cdouble(sys.A.row(i).cwiseProduct(w.transpose()).sum()));
    }
    if (ref_power <= 0.0) return 0.0;
    return std::min(10.0 * std::log10(ref_power / std::max(got_power, 1e-300)), -kGainFloorDb);
}

double condition_number(const NullingSystem& sys) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.A);
    const auto& s = svd.singularValues();
    return s(0) / s(s.size() - 1);
}

void cmd_solve(const Scenario& scenario, const std::string& out_dir) {
    if (scenario.targets.nulls.empty())
        throw ConfigError("targets.nulls: at least one null target is required for solve");
    const DishGeometry geom = scenario.make_geometry();
    const RimLayout layout = scenario.make_layout();
    const NullingSystem sys = assemble_checked(scenario.make_targets(),
                                               scenario.mainlobe_delta_or_zero(), layout, geom);
    if (scenario.solvers.empty())
        throw ConfigError("solvers: at least one solver is required for solve");
    const OutputMeta meta = scenario.make_meta();
    const double ynorm = sys.y.norm();
    for (const auto& cfg : scenario.solvers) {
        const WeightSolution sol = run_solver(sys, cfg, scenario.seed);
        const double residual_rel = (sys.A * sol.w - sys.y).norm() / ynorm;
        const fs::path dir(out_dir);
        write_weights_json(dir / ("weights_" + cfg.method + ".json"), meta, sol, residual_rel);
        write_trace_csv(dir / ("trace_" + cfg.method + ".csv"), meta, sol);
        write_null_report_json(dir / ("null_report_" + cfg.method + ".json"), meta,
                               null_report(sys, sol.w));
    }
}

void cmd_pattern(const Scenario& scenario, const std::string& out_dir) {
    const EvaluationConfig eval = scenario.evaluation.value_or(EvaluationConfig{});
    const DishGeometry geom = scenario.make_geometry();
    const RimLayout layout = scenario.make_layout();
    const double beta = 2.0 * kPi * scenario.geometry.design_freq_hz / kSpeedOfLight;

    std::vector<WeightSet> sets;
    for (const auto& m : eval.methods) {
        if (m == "reference") continue;
        sets.push_back(
            {m, load_weights_json(fs::path(out_dir) / ("weights_" + m + ".json"), layout.size())});
    }
    const PatternCut cut =
        pattern_cut(deg_to_rad(eval.plane_phi_deg), deg_to_rad(eval.psi_start_deg),
                    deg_to_rad(eval.psi_stop_deg), deg_to_rad(eval.psi_step_deg), beta, sets,
                    layout, geom);

    std::string out = meta_csv_block(scenario.make_meta());
    out += "# peak_dbi: " + format_double(cut.peak_dbi) + "\n";
    out += "psi_deg,ref_db";
    for (const auto& m : cut.methods) out += "," + m + "_db";
    out += "\n";
    for (std::size_t i = 0; i < cut.psi.size(); ++i) {
        out += format_double(rad_to_deg(cut.psi[i])) + "," + format_double(cut.reference_db[i]);
        for (const auto& col : cut.method_db) out += "," + format_double(col[i]);
        out += "\n";
    }
    write_file((fs::path(out_dir) / "pattern.csv").string(), out);
}

void cmd_analyze(const Scenario& scenario, const std::string& out_dir) {
    if (scenario.targets.nulls.empty())
        throw ConfigError("targets.nulls: at least one null target is required for analyze");
    const DishGeometry geom = scenario.make_geometry();
    const RimLayout layout = scenario.make_layout();
    const OutputMeta meta = scenario.make_meta();

    // Pairwise correlation over the null targets.
    std::vector<FarFieldTarget> nulls;
    for (const auto& t : scenario.make_targets())
        if (t.kind == FarFieldTarget::Kind::null) nulls.push_back(t);
    json pairs = json::array();
    for (std::size_t i = 0; i < nulls.size(); ++i) {
        for (std::size_t k = i + 1; k < nulls.size(); ++k) {
            const CorrelationReport rep = correlation_report(nulls[i], nulls[k], layout, geom);
            pairs.push_back(json{{"i", i},
                                 {"j", k},
                                 {"psi1_deg", rad_to_deg(rep.t1.psi)},
                                 {"psi2_deg", rad_to_deg(rep.t2.psi)},
                                 {"empirical_re", rep.empirical.real()},
                                 {"empirical_im", rep.empirical.imag()},
                                 {"analytic_re", rep.analytic.real()},
                                 {"analytic_im", rep.analytic.imag()},
                                 {"abs_error", rep.abs_error},
                                 {"small_angle_ok", rep.small_angle_ok}});
        }
    }
    json corr_doc{{"meta", meta_json(meta)},
                  {"rho_bar_m", layout.mean_radius()},
                  {"pairs", pairs}};
    write_file((fs::path(out_dir) / "correlation.json").string(), corr_doc.dump(1) + "\n");

    // Duplicate directions carry no extra information for the feasibility
    // system; keep the first occurrence of each.
    std::vector<FarFieldTarget> unique;
    for (const auto& t : scenario.make_targets()) {
        bool seen = false;
        for (const auto& u : unique) seen |= same_direction(t, u);
        if (!seen) unique.push_back(t);
    }
    const NullingSystem sys =
        assemble_checked(unique, scenario.mainlobe_delta_or_zero(), layout, geom);
    const WeightSolution pinv = solve_pseudoinverse(sys);
    const FeasibilityVerdict v = feasibility_predict(pinv.w);
    json feas_doc{{"meta", meta_json(meta)},
                  {"n_elements", layout.size()},
                  {"inf_norm", v.inf_norm},
                  {"epsilon", v.epsilon_thresh},
                  {"energy_lhs", v.energy_lhs},
                  {"energy_rhs", v.energy_rhs},
                  {"feasible", v.predicted_feasible},
                  {"energy_criterion", v.energy_criterion}};
    write_file((fs::path(out_dir) / "feasibility.json").string(), feas_doc.dump(1) + "\n");
}

void cmd_table(const Scenario& scenario, const std::string& out_dir) {
    if (!scenario.table) throw ConfigError("table: section required for the table command");
    const DishGeometry geom = scenario.make_geometry();
    const RimLayout layout = scenario.make_layout();
    const double freq = scenario.geometry.design_freq_hz;
    const double beta = 2.0 * kPi * freq / kSpeedOfLight;

    std::string out = meta_csv_block(scenario.make_meta());
    out += "angles_deg,cond_a,winf,epsilon,feasible";
    for (const auto& m : scenario.table->methods) out += ",supp_" + m + "_db";
    out += "\n";

    for (const auto& angles : scenario.table->angle_sets) {
        std::vector<FarFieldTarget> targets;
        if (scenario.targets.mainlobe_delta) {
            FarFieldTarget m;
            m.kind = FarFieldTarget::Kind::mainlobe;
            m.beta = scenario.targets.mainlobe_freq_hz
                         ? 2.0 * kPi * *scenario.targets.mainlobe_freq_hz / kSpeedOfLight
                         : beta;
            targets.push_back(m);
        }
        for (const double a : angles)
            targets.push_back({deg_to_rad(a), 0.0, beta, FarFieldTarget::Kind::null});
        const NullingSystem sys =
            assemble_checked(targets, scenario.mainlobe_delta_or_zero(), layout, geom);
        const WeightSolution pinv = solve_pseudoinverse(sys);
        const FeasibilityVerdict verdict = feasibility_predict(pinv.w);

        std::string angles_str;
        for (std::size_t i = 0; i < angles.size(); ++i)
            angles_str += (i ? " " : "") + format_double(angles[i]);
        out += "\"" + angles_str + "\"," + format_double(condition_number(sys)) + "," +
               format_double(verdict.inf_norm) + "," + format_double(verdict.epsilon_thresh) +
               "," + (verdict.predicted_feasible ? "true" : "false");
        for (const auto& m : scenario.table->methods) {
            SolverConfig cfg;
            cfg.method = m;
            // Reuse any matching solver block for schedule overrides.
            for (const auto& sc : scenario.solvers)
                if (sc.method == m) cfg = sc;
            const WeightSolution sol =
                m == "pinv" ? pinv : run_solver(sys, cfg, scenario.seed);
            out += "," + format_double(average_suppression_db(sys, sol.w));
        }
        out += "\n";
    }
    write_file((fs::path(out_dir) / "table.csv").string(), out);
}

}  // namespace rimnull
