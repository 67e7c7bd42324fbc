#pragma once

// Per-point check records, summaries and their json / csv / text serializations.

#include "bislant/check.hpp"
#include "bislant/linalg.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bislant {

enum class PointStatus { Ok, SkippedGuard, Degenerate };

std::string_view to_string(PointStatus status);

struct PointRecord {
    std::size_t index = 0;
    Vec u;
    PointStatus status = PointStatus::Ok;
    std::string error;               // set for degenerate points
    CheckFragment checks;            // sorted by name
    std::vector<NamedValue> values;  // sorted by name
    std::vector<std::string> notes;  // warnings and diagnoses
};

struct CheckSummary {
    std::string name;
    std::size_t evaluated = 0;
    std::size_t passed = 0;
    double max_residual = 0.0;
    double gate = 0.0;
};

struct CheckReport {
    std::string tool = "bislant";
    std::string version = BISLANT_VERSION;
    std::string command;
    std::string scenario_name;
    std::string scenario_hash;
    ToleranceProfile tolerances;
    std::vector<std::string> overrides;
    std::vector<std::string> parameters;
    std::size_t requested = 0;
    std::size_t admitted = 0;
    std::size_t skipped_guard = 0;
    std::size_t degenerate = 0;
    int exit_code = 0;
    std::vector<PointRecord> points;

    /// One entry per check name, sorted by name.
    std::vector<CheckSummary> summary() const;
    std::size_t record_count() const;
    std::size_t failed_count() const;
};

enum class Format { Json, Csv, Text };

/// Accepts "json", "csv", "text"; throws SchemaError otherwise.
Format parse_format(std::string_view name);

std::string emit(const CheckReport& report, Format format);

/// Reads a report previously written by emit(..., Format::Json).
CheckReport parse_report_json(const std::string& text);

} // namespace bislant
