// bislant: pointwise verification of bi-slant warped-product submanifolds.
//
//   bislant <command> [--scenario PATH | --builtin NAME] [--format json|csv|text] ...
//
// Commands: ambient-check, frame-report, slant-check, warped-check, immersion-check, chen, all.
// Exit codes: 0 all gates pass, 1 a gate failed, 2 usage or schema error,
// 3 too many degenerate points.

#include "bislant/error.hpp"
#include "bislant/runner.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr int kUsageError = 2;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pointwise verification of bi-slant warped-product submanifolds"};
    app.set_version_flag("--version", std::string(BISLANT_VERSION));

    std::string command;
    std::string scenario_path;
    std::string builtin;
    std::string format = "text";
    std::string output;
    bool serial = false;
    bislant::RunOverrides ov;

    app.add_option("command", command,
                   "ambient-check | frame-report | slant-check | warped-check | immersion-check | chen | all")
        ->required();
    auto* scen = app.add_option("--scenario", scenario_path, "Scenario JSON file");
    auto* bi = app.add_option("--builtin", builtin, "Builtin scenario (paper-example)");
    scen->excludes(bi);
    bi->excludes(scen);
    app.add_option("--format", format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--output,-o", output, "Write the report to a file instead of stdout");
    app.add_option("--tol-first", ov.tol_first, "Tolerance for first-derivative identities");
    app.add_option("--tol-second", ov.tol_second, "Tolerance for second-derivative identities");
    app.add_option("--grid", ov.grid, "Grid points per parameter (forces grid sampling)");
    app.add_option("--seed", ov.seed, "Seed for random sampling");
    app.add_flag("--allow-degenerate-angles", ov.allow_degenerate_angles,
                 "Do not treat slant angles near 0 or pi/2 as errors");
    app.add_flag("--flip-lee-sign", ov.flip_lee_sign, "Negate the Lee form (negative control)");
    app.add_option("--warp", ov.warp, "Replace the warping function");
    app.add_flag("--invert-warp", ov.invert_warp, "Replace lambda by 1/lambda (negative control)");
    app.add_flag("--serial", serial, "Evaluate points without OpenMP");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    const auto cmd = bislant::parse_command(command);
    if (!cmd) {
        std::cerr << "bislant: unknown command '" << command << "'\n";
        return kUsageError;
    }
    if (scenario_path.empty() && builtin.empty()) {
        std::cerr << "bislant: one of --scenario or --builtin is required\n";
        return kUsageError;
    }

    try {
        const bislant::Scenario sc = scenario_path.empty() ? bislant::load_builtin(builtin)
                                                           : bislant::load_scenario(scenario_path);
        const bislant::CheckReport report = bislant::run(
            sc, *cmd, ov, serial ? bislant::Execution::Serial : bislant::Execution::Parallel);
        const std::string text = bislant::emit(report, bislant::parse_format(format));
        if (output.empty()) {
            std::fwrite(text.data(), 1, text.size(), stdout);
        } else {
            std::ofstream out(output, std::ios::binary);
            if (!out) {
                std::cerr << "bislant: cannot write " << output << "\n";
                return kUsageError;
            }
            out << text;
        }
        return report.exit_code;
    } catch (const bislant::SchemaError& e) {
        std::cerr << "bislant: " << e.what() << "\n";
        return kUsageError;
    } catch (const bislant::Error& e) {
        std::cerr << "bislant: " << e.what() << "\n";
        return kUsageError;
    }
}
