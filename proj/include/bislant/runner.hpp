#pragma once

// Command dispatch over a scenario's sample points.

#include "bislant/report.hpp"
#include "bislant/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bislant {

enum class Command { AmbientCheck, FrameReport, SlantCheck, WarpedCheck, ImmersionCheck, Chen, All };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

struct RunOverrides {
    std::optional<double> tol_first;
    std::optional<double> tol_second;
    std::optional<std::size_t> grid;     // points per parameter; forces grid mode
    std::optional<std::uint64_t> seed;   // random-mode seed
    bool allow_degenerate_angles = false;
    bool flip_lee_sign = false;
    std::optional<std::string> warp;     // replacement lambda expression
    bool invert_warp = false;            // lambda -> 1/lambda
    double max_degenerate_fraction = 0.1;
};

enum class Execution { Parallel, Serial };

/// Scenario with overrides applied. Throws SchemaError for invalid overrides.
Scenario apply_overrides(const Scenario& scenario, const RunOverrides& overrides);

/// Evaluates one parameter point; never throws for per-point failures.
PointRecord evaluate_point(const Scenario& scenario, Command command, const Vec& u,
                           std::size_t index, const RunOverrides& overrides = {});

/// Runs `command` over all sample points. The parallel path uses OpenMP; both paths produce
/// identical reports. Throws SchemaError for usage problems (e.g. warped-check without warp).
CheckReport run(const Scenario& scenario, Command command, const RunOverrides& overrides = {},
                Execution execution = Execution::Parallel);

/// 3 if degenerate points exceed the allowed fraction (or nothing was evaluated),
/// 1 if any gate failed, 0 otherwise.
int exit_code(const CheckReport& report, double max_degenerate_fraction = 0.1);

} // namespace bislant
