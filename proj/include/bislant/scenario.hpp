#pragma once

// Scenario documents: ambient space, chart, split, optional warp, sampling and tolerances.
// The JSON schema is described in docs/scenario_format.md.

#include "bislant/ambient.hpp"
#include "bislant/immersion.hpp"
#include "bislant/slant.hpp"
#include "bislant/warped.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bislant {

struct SampleSpec {
    enum class Mode { Grid, Random };
    Mode mode = Mode::Grid;
    std::vector<std::pair<double, double>> ranges;  // one [lo, hi] per parameter
    std::vector<std::size_t> counts;                // grid: points per parameter
    std::size_t count = 0;                          // random: number of points
    std::uint64_t seed = 0;
};

/// Deterministic sample points: grids in lexicographic order (last parameter fastest),
/// random points from a seeded 64-bit Mersenne twister.
std::vector<Vec> sample_points(const SampleSpec& spec);

struct Scenario {
    std::string name;
    std::string description;
    std::string sigma_source;
    AmbientSpace ambient;
    Chart chart;
    DistributionSplit split;
    std::optional<WarpDeclaration> warp;
    ConditionExpectations expect_d1;
    ConditionExpectations expect_d2;
    SampleSpec samples;
    ToleranceProfile tolerances;
    std::string hash;  // FNV-1a 64 of the canonical JSON text, hex
};

/// Throws SchemaError (with a JSON path) on any schema violation, unparsable expression,
/// or invalid split.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

/// Names accepted by load_builtin.
std::vector<std::string> builtin_names();
/// JSON text of a builtin scenario; throws SchemaError for unknown names.
const std::string& builtin_source(const std::string& name);
Scenario load_builtin(const std::string& name);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

} // namespace bislant
