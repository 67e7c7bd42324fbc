#include "bislant/report.hpp"

#include "bislant/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace bislant {

using ojson = nlohmann::ordered_json;

std::string_view to_string(PointStatus status)
{
    switch (status) {
    case PointStatus::Ok: return "ok";
    case PointStatus::SkippedGuard: return "skipped_guard";
    case PointStatus::Degenerate: return "degenerate";
    }
    return "unknown";
}

namespace {

PointStatus status_from(const std::string& s)
{
    if (s == "ok")
        return PointStatus::Ok;
    if (s == "skipped_guard")
        return PointStatus::SkippedGuard;
    if (s == "degenerate")
        return PointStatus::Degenerate;
    throw SchemaError("points[].status", "unknown status " + s);
}

std::string format_double(double v, int digits)
{
    if (!std::isfinite(v))
        return "null";
    if (v == 0.0)
        return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Deterministic JSON text: insertion-ordered keys, 17 significant digits, -0 written as 0,
// non-finite numbers as null.
void write_json(std::string& out, const ojson& j, int depth)
{
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case ojson::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out += ",\n";
            first = false;
            out += pad;
            out += ojson(it.key()).dump();
            out += ": ";
            write_json(out, it.value(), depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case ojson::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        const bool scalar =
            std::all_of(j.begin(), j.end(), [](const ojson& e) { return e.is_primitive(); });
        if (scalar) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    out += ", ";
                write_json(out, j[i], depth + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ",\n";
            out += pad;
            write_json(out, j[i], depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case ojson::value_t::number_float:
        out += format_double(j.get<double>(), 17);
        return;
    default:
        out += j.dump();
        return;
    }
}

double number_or_nan(const ojson& j)
{
    return j.is_null() ? std::nan("") : j.get<double>();
}

} // namespace

std::vector<CheckSummary> CheckReport::summary() const
{
    std::map<std::string, CheckSummary> by_name;
    for (const auto& p : points)
        for (const auto& c : p.checks) {
            auto& s = by_name[c.name];
            s.name = c.name;
            ++s.evaluated;
            if (c.pass)
                ++s.passed;
            if (std::isfinite(c.residual))
                s.max_residual = s.evaluated == 1 ? c.residual : std::max(s.max_residual, c.residual);
            s.gate = std::max(s.gate, c.gate);
        }
    std::vector<CheckSummary> out;
    for (auto& [_, s] : by_name)
        out.push_back(s);
    return out;
}

std::size_t CheckReport::record_count() const
{
    std::size_t n = 0;
    for (const auto& p : points)
        n += p.checks.size();
    return n;
}

std::size_t CheckReport::failed_count() const
{
    std::size_t n = 0;
    for (const auto& p : points)
        for (const auto& c : p.checks)
            n += c.pass ? 0 : 1;
    return n;
}

Format parse_format(std::string_view name)
{
    if (name == "json")
        return Format::Json;
    if (name == "csv")
        return Format::Csv;
    if (name == "text")
        return Format::Text;
    throw SchemaError("format", "expected json, csv or text");
}

namespace {

std::string emit_json(const CheckReport& r)
{
    ojson doc;
    doc["tool"] = r.tool;
    doc["version"] = r.version;
    doc["command"] = r.command;
    doc["scenario"] = {{"name", r.scenario_name}, {"hash", r.scenario_hash}};
    doc["tolerances"] = {{"tol_first", r.tolerances.tol_first},
                         {"tol_second", r.tolerances.tol_second},
                         {"tol_eig", r.tolerances.tol_eig},
                         {"fd_step", r.tolerances.fd_step}};
    doc["overrides"] = r.overrides;
    doc["parameters"] = r.parameters;
    doc["accounting"] = {{"requested", r.requested},
                         {"admitted", r.admitted},
                         {"skipped_guard", r.skipped_guard},
                         {"degenerate", r.degenerate}};

    ojson checks = ojson::array();
    for (const auto& s : r.summary())
        checks.push_back({{"name", s.name},
                          {"evaluated", s.evaluated},
                          {"passed", s.passed},
                          {"max_residual", s.max_residual},
                          {"gate", s.gate}});
    doc["summary"] = {{"exit_code", r.exit_code},
                      {"records", r.record_count()},
                      {"failed", r.failed_count()},
                      {"checks", checks}};

    ojson points = ojson::array();
    for (const auto& p : r.points) {
        ojson pj;
        pj["index"] = p.index;
        pj["u"] = p.u.values();
        pj["status"] = std::string(to_string(p.status));
        if (!p.error.empty())
            pj["error"] = p.error;
        ojson values = ojson::object();
        for (const auto& v : p.values)
            values[v.name] = v.value;
        pj["values"] = values;
        ojson cj = ojson::array();
        for (const auto& c : p.checks)
            cj.push_back({{"name", c.name}, {"residual", c.residual}, {"gate", c.gate}, {"pass", c.pass}});
        pj["checks"] = cj;
        pj["notes"] = p.notes;
        points.push_back(pj);
    }
    doc["points"] = points;

    std::string out;
    write_json(out, doc, 0);
    out += "\n";
    return out;
}

std::string emit_csv(const CheckReport& r)
{
    std::string out = "point_index";
    for (const auto& p : r.parameters)
        out += "," + p;
    out += ",check,residual,gate,pass\n";
    for (const auto& p : r.points)
        for (const auto& c : p.checks) {
            out += std::to_string(p.index);
            for (double x : p.u)
                out += "," + format_double(x, 17);
            out += "," + c.name + "," + format_double(c.residual, 17) + "," +
                   format_double(c.gate, 17) + "," + (c.pass ? "true" : "false") + "\n";
        }
    return out;
}

std::string emit_text(const CheckReport& r)
{
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%s %s  %s  scenario %s (%s)\n", r.tool.c_str(),
                  r.version.c_str(), r.command.c_str(), r.scenario_name.c_str(),
                  r.scenario_hash.c_str());
    out += line;
    std::snprintf(line, sizeof line,
                  "points: requested %zu, admitted %zu, skipped_guard %zu, degenerate %zu\n",
                  r.requested, r.admitted, r.skipped_guard, r.degenerate);
    out += line;
    const auto summary = r.summary();
    std::size_t width = 5;
    for (const auto& s : summary)
        width = std::max(width, s.name.size());
    std::snprintf(line, sizeof line, "%-*s %9s %7s %13s %13s\n", static_cast<int>(width), "check",
                  "evaluated", "passed", "max_residual", "gate");
    out += line;
    for (const auto& s : summary) {
        std::snprintf(line, sizeof line, "%-*s %9zu %7zu %13s %13s%s\n", static_cast<int>(width),
                      s.name.c_str(), s.evaluated, s.passed, format_double(s.max_residual, 6).c_str(),
                      format_double(s.gate, 6).c_str(), s.passed == s.evaluated ? "" : "  FAIL");
        out += line;
    }
    for (const auto& p : r.points)
        if (p.status == PointStatus::Degenerate)
            out += "degenerate point " + std::to_string(p.index) + ": " + p.error + "\n";
    out += "exit code " + std::to_string(r.exit_code) + "\n";
    return out;
}

} // namespace

std::string emit(const CheckReport& report, Format format)
{
    switch (format) {
    case Format::Json: return emit_json(report);
    case Format::Csv: return emit_csv(report);
    case Format::Text: return emit_text(report);
    }
    return {};
}

CheckReport parse_report_json(const std::string& text)
{
    const ojson doc = ojson::parse(text);
    CheckReport r;
    r.tool = doc.at("tool").get<std::string>();
    r.version = doc.at("version").get<std::string>();
    r.command = doc.at("command").get<std::string>();
    r.scenario_name = doc.at("scenario").at("name").get<std::string>();
    r.scenario_hash = doc.at("scenario").at("hash").get<std::string>();
    const auto& t = doc.at("tolerances");
    r.tolerances.tol_first = number_or_nan(t.at("tol_first"));
    r.tolerances.tol_second = number_or_nan(t.at("tol_second"));
    r.tolerances.tol_eig = number_or_nan(t.at("tol_eig"));
    r.tolerances.fd_step = number_or_nan(t.at("fd_step"));
    r.overrides = doc.at("overrides").get<std::vector<std::string>>();
    r.parameters = doc.at("parameters").get<std::vector<std::string>>();
    const auto& a = doc.at("accounting");
    r.requested = a.at("requested").get<std::size_t>();
    r.admitted = a.at("admitted").get<std::size_t>();
    r.skipped_guard = a.at("skipped_guard").get<std::size_t>();
    r.degenerate = a.at("degenerate").get<std::size_t>();
    r.exit_code = doc.at("summary").at("exit_code").get<int>();
    for (const auto& pj : doc.at("points")) {
        PointRecord p;
        p.index = pj.at("index").get<std::size_t>();
        std::vector<double> u;
        for (const auto& x : pj.at("u"))
            u.push_back(number_or_nan(x));
        p.u = Vec(std::move(u));
        p.status = status_from(pj.at("status").get<std::string>());
        if (pj.contains("error"))
            p.error = pj.at("error").get<std::string>();
        for (auto it = pj.at("values").begin(); it != pj.at("values").end(); ++it)
            p.values.push_back({it.key(), number_or_nan(it.value())});
        for (const auto& cj : pj.at("checks"))
            p.checks.push_back({cj.at("name").get<std::string>(), number_or_nan(cj.at("residual")),
                                number_or_nan(cj.at("gate")), cj.at("pass").get<bool>()});
        p.notes = pj.at("notes").get<std::vector<std::string>>();
        r.points.push_back(std::move(p));
    }
    return r;
}

} // namespace bislant
