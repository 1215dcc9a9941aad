#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "rimnull/commands.hpp"
#include "rimnull/version.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 missing dependency file,
// 4 numerical failure (singular system).
int run(const std::string& command, const std::string& scenario_path, const std::string& out_flag) {
    try {
        const rimnull::Scenario scenario = rimnull::load_scenario(scenario_path);
        const std::string out_dir = out_flag.empty() ? scenario.output_dir : out_flag;
        if (command == "solve")
            rimnull::cmd_solve(scenario, out_dir);
        else if (command == "pattern")
            rimnull::cmd_pattern(scenario, out_dir);
        else if (command == "analyze")
            rimnull::cmd_analyze(scenario, out_dir);
        else if (command == "table")
            rimnull::cmd_table(scenario, out_dir);
        return 0;
    } catch (const rimnull::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const rimnull::MissingDependencyError& e) {
        std::fprintf(stderr, "missing dependency: %s\n", e.what());
        return 3;
    } catch (const rimnull::SingularSystemError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rimnull: interference nulling for rim-reconfigurable reflector antennas"};
    app.set_version_flag("--version", rimnull::kArtifactVersion);
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    const auto add = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (default: scenario output_dir)");
        return sub;
    };
    add("solve", "solve for weights and write weights/trace/null-report files");
    add("pattern", "far-field pattern cut CSV for solved weight sets");
    add("analyze", "correlation and unimodular-feasibility reports");
    add("table", "summary table over angle sets");

    CLI11_PARSE(app, argc, argv);
    return run(app.get_subcommands().front()->get_name(), scenario_path, out_dir);
}
