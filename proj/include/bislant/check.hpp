#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace bislant {

/// One gated residual. Ordinary checks pass when residual <= gate; checks
/// whose name contains "not_" are sensitivity controls and pass when the
/// residual exceeds the gate.
struct CheckResult {
    std::string name;
    double residual = 0.0;
    double gate = 0.0;
    bool pass = false;
};

using CheckFragment = std::vector<CheckResult>;

inline CheckResult at_most(std::string name, double residual, double gate)
{
    const bool ok = std::isfinite(residual) && residual <= gate;
    return {std::move(name), residual, gate, ok};
}

inline CheckResult exceeds(std::string name, double residual, double gate)
{
    const bool ok = std::isfinite(residual) && residual > gate;
    return {std::move(name), residual, gate, ok};
}

/// Named scalar reported alongside checks (angles, inequality sides, ...).
struct NamedValue {
    std::string name;
    double value = 0.0;
};

inline void append(CheckFragment& into, const CheckFragment& more)
{
    into.insert(into.end(), more.begin(), more.end());
}

} // namespace bislant
