#include "bislant/scenario.hpp"

#include "bislant/error.hpp"

#include "json.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace bislant {

using nlohmann::json;

namespace {

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys)
{
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw SchemaError(path.empty() ? key : path + "." + key, "unknown field");
}

const json& require(const json& obj, const std::string& path, const char* key)
{
    if (!obj.contains(key))
        throw SchemaError(path.empty() ? key : path + "." + key, "missing required field");
    return obj.at(key);
}

const json& require_object(const json& obj, const std::string& path, const char* key)
{
    const json& v = require(obj, path, key);
    if (!v.is_object())
        throw SchemaError(path.empty() ? key : path + "." + key, "expected an object");
    return v;
}

std::string as_string(const json& v, const std::string& path)
{
    if (!v.is_string())
        throw SchemaError(path, "expected a string");
    return v.get<std::string>();
}

double as_number(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw SchemaError(path, "expected a number");
    return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& path)
{
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw SchemaError(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& path)
{
    if (!v.is_boolean())
        throw SchemaError(path, "expected true or false");
    return v.get<bool>();
}

Expression expression(const json& v, const std::string& path, const std::vector<std::string>& vars)
{
    const std::string src = as_string(v, path);
    try {
        return Expression::parse(src, vars);
    } catch (const ParseError& e) {
        throw SchemaError(path, std::string("expression error: ") + e.what());
    }
}

std::vector<std::size_t> index_set(const json& v, const std::string& path, std::size_t m)
{
    if (!v.is_array())
        throw SchemaError(path, "expected an array of 1-based parameter indices");
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const std::string p = path + "[" + std::to_string(k) + "]";
        const std::uint64_t i = as_count(v[k], p);
        if (i < 1 || i > m)
            throw SchemaError(p, "index out of range 1.." + std::to_string(m));
        out.push_back(static_cast<std::size_t>(i - 1));
    }
    return out;
}

ToleranceProfile tolerances(const json* v)
{
    ToleranceProfile t;
    if (!v)
        return t;
    if (!v->is_object())
        throw SchemaError("tolerances", "expected an object");
    allow_keys(*v, "tolerances", {"tol_first", "tol_second", "tol_eig", "fd_step"});
    if (v->contains("tol_first"))
        t.tol_first = as_number(v->at("tol_first"), "tolerances.tol_first");
    if (v->contains("tol_second"))
        t.tol_second = as_number(v->at("tol_second"), "tolerances.tol_second");
    if (v->contains("tol_eig"))
        t.tol_eig = as_number(v->at("tol_eig"), "tolerances.tol_eig");
    if (v->contains("fd_step"))
        t.fd_step = as_number(v->at("fd_step"), "tolerances.fd_step");
    try {
        t.validate();
    } catch (const Error& e) {
        throw SchemaError("tolerances", e.what());
    }
    return t;
}

SampleSpec samples(const json& v, std::size_t m)
{
    if (!v.is_object())
        throw SchemaError("samples", "expected an object");
    allow_keys(v, "samples", {"mode", "ranges", "counts", "count", "seed"});
    SampleSpec s;
    const std::string mode = v.contains("mode") ? as_string(v.at("mode"), "samples.mode") : "grid";
    if (mode == "grid")
        s.mode = SampleSpec::Mode::Grid;
    else if (mode == "random")
        s.mode = SampleSpec::Mode::Random;
    else
        throw SchemaError("samples.mode", "expected \"grid\" or \"random\"");

    const json& ranges = require(v, "samples", "ranges");
    if (!ranges.is_array() || ranges.size() != m)
        throw SchemaError("samples.ranges", "expected one [lo, hi] pair per parameter");
    for (std::size_t i = 0; i < m; ++i) {
        const std::string p = "samples.ranges[" + std::to_string(i) + "]";
        const json& r = ranges[i];
        if (!r.is_array() || r.size() != 2)
            throw SchemaError(p, "expected [lo, hi]");
        const double lo = as_number(r[0], p + "[0]");
        const double hi = as_number(r[1], p + "[1]");
        if (!(lo <= hi))
            throw SchemaError(p, "lo must not exceed hi");
        s.ranges.emplace_back(lo, hi);
    }

    if (v.contains("counts")) {
        const json& c = v.at("counts");
        if (c.is_array()) {
            if (c.size() != m)
                throw SchemaError("samples.counts", "expected one count per parameter");
            for (std::size_t i = 0; i < m; ++i)
                s.counts.push_back(as_count(c[i], "samples.counts[" + std::to_string(i) + "]"));
        } else {
            s.counts.assign(m, as_count(c, "samples.counts"));
        }
    } else {
        s.counts.assign(m, 3);
    }
    for (auto c : s.counts)
        if (c == 0)
            throw SchemaError("samples.counts", "counts must be positive");
    s.count = v.contains("count") ? as_count(v.at("count"), "samples.count") : 50;
    s.seed = v.contains("seed") ? as_count(v.at("seed"), "samples.seed") : 0;
    return s;
}

ConditionExpectations expectations(const json& e, const char* prefix)
{
    ConditionExpectations out;
    const std::string tg = std::string(prefix) + "_totally_geodesic";
    const std::string um = std::string(prefix) + "_totally_umbilic";
    if (e.contains(tg))
        out.totally_geodesic = as_bool(e.at(tg), "expect." + tg);
    if (e.contains(um))
        out.totally_umbilic = as_bool(e.at(um), "expect." + um);
    return out;
}

} // namespace

std::string fnv1a_hex(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::vector<Vec> sample_points(const SampleSpec& spec)
{
    const std::size_t m = spec.ranges.size();
    std::vector<Vec> out;
    if (spec.mode == SampleSpec::Mode::Random) {
        std::mt19937_64 gen(spec.seed);
        for (std::size_t k = 0; k < spec.count; ++k) {
            Vec u(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
                u[i] = spec.ranges[i].first + unit * (spec.ranges[i].second - spec.ranges[i].first);
            }
            out.push_back(std::move(u));
        }
        return out;
    }
    auto coordinate = [&](std::size_t i, std::size_t j) {
        const auto [lo, hi] = spec.ranges[i];
        const std::size_t c = spec.counts[i];
        if (c == 1)
            return 0.5 * (lo + hi);
        return lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(c - 1);
    };
    std::vector<std::size_t> idx(m, 0);
    while (true) {
        Vec u(m);
        for (std::size_t i = 0; i < m; ++i)
            u[i] = coordinate(i, idx[i]);
        out.push_back(std::move(u));
        std::size_t i = m;
        while (i > 0) {
            --i;
            if (++idx[i] < spec.counts[i])
                break;
            idx[i] = 0;
            if (i == 0)
                return out;
        }
        if (m == 0)
            return out;
    }
}

Scenario parse_scenario(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw SchemaError("$", "expected a JSON object");
    allow_keys(doc, "",
               {"name", "description", "ambient", "chart", "split", "warp", "expect", "samples",
                "tolerances"});

    const std::string name = as_string(require(doc, "", "name"), "name");
    const std::string description =
        doc.contains("description") ? as_string(doc.at("description"), "description") : "";

    const json& amb = require_object(doc, "", "ambient");
    allow_keys(amb, "ambient", {"n", "sigma", "lee_sign"});
    const std::uint64_t n = as_count(require(amb, "ambient", "n"), "ambient.n");
    if (n < 1 || n > 8)
        throw SchemaError("ambient.n", "complex dimension must be between 1 and 8");
    const std::string sigma_source =
        amb.contains("sigma") ? as_string(amb.at("sigma"), "ambient.sigma") : "0";
    double lee_sign = 1.0;
    if (amb.contains("lee_sign")) {
        lee_sign = as_number(amb.at("lee_sign"), "ambient.lee_sign");
        if (lee_sign != 1.0 && lee_sign != -1.0)
            throw SchemaError("ambient.lee_sign", "expected 1 or -1");
    }
    const std::vector<std::string> xs = ambient_variables(n);
    Expression sigma = expression(json(sigma_source), "ambient.sigma", xs);

    const json& ch = require_object(doc, "", "chart");
    allow_keys(ch, "chart", {"params", "components", "domain_guard"});
    const json& params_j = require(ch, "chart", "params");
    if (!params_j.is_array() || params_j.empty())
        throw SchemaError("chart.params", "expected a non-empty array of names");
    std::vector<std::string> params;
    for (std::size_t i = 0; i < params_j.size(); ++i)
        params.push_back(as_string(params_j[i], "chart.params[" + std::to_string(i) + "]"));
    if (params.size() > 2 * n)
        throw SchemaError("chart.params", "more parameters than ambient real dimensions");
    // Parameter names are validated by the parser (distinct, not reserved).
    try {
        (void)Expression::parse("0", params);
    } catch (const Error& e) {
        throw SchemaError("chart.params", e.what());
    }

    const json& comps = require(ch, "chart", "components");
    if (!comps.is_array() || comps.size() != 2 * n)
        throw SchemaError("chart.components", "expected " + std::to_string(2 * n) + " expressions");
    std::vector<Expression> components;
    for (std::size_t i = 0; i < comps.size(); ++i)
        components.push_back(expression(comps[i], "chart.components[" + std::to_string(i) + "]", params));

    std::vector<Expression> guards;
    if (ch.contains("domain_guard")) {
        const json& gj = ch.at("domain_guard");
        if (gj.is_string()) {
            guards.push_back(expression(gj, "chart.domain_guard", params));
        } else if (gj.is_array()) {
            for (std::size_t i = 0; i < gj.size(); ++i)
                guards.push_back(
                    expression(gj[i], "chart.domain_guard[" + std::to_string(i) + "]", params));
        } else {
            throw SchemaError("chart.domain_guard", "expected a string or an array of strings");
        }
    }

    const json& sp = require_object(doc, "", "split");
    allow_keys(sp, "split", {"I1", "I2", "declared_cos2_theta1", "declared_cos2_theta2"});
    DistributionSplit split;
    split.I1 = index_set(require(sp, "split", "I1"), "split.I1", params.size());
    split.I2 = index_set(require(sp, "split", "I2"), "split.I2", params.size());
    if (sp.contains("declared_cos2_theta1"))
        split.declared_cos2_theta1 =
            expression(sp.at("declared_cos2_theta1"), "split.declared_cos2_theta1", params);
    if (sp.contains("declared_cos2_theta2"))
        split.declared_cos2_theta2 =
            expression(sp.at("declared_cos2_theta2"), "split.declared_cos2_theta2", params);
    try {
        split.validate(params.size());
    } catch (const Error& e) {
        throw SchemaError("split", e.what());
    }

    std::optional<WarpDeclaration> warp;
    if (doc.contains("warp")) {
        const json& w = doc.at("warp");
        if (!w.is_object())
            throw SchemaError("warp", "expected an object");
        allow_keys(w, "warp", {"lambda"});
        warp = WarpDeclaration{expression(require(w, "warp", "lambda"), "warp.lambda", params)};
    }

    ConditionExpectations e1, e2;
    if (doc.contains("expect")) {
        const json& e = doc.at("expect");
        if (!e.is_object())
            throw SchemaError("expect", "expected an object");
        allow_keys(e, "expect",
                   {"d1_totally_geodesic", "d1_totally_umbilic", "d2_totally_geodesic",
                    "d2_totally_umbilic"});
        e1 = expectations(e, "d1");
        e2 = expectations(e, "d2");
    }

    SampleSpec spec = samples(require(doc, "", "samples"), params.size());
    const ToleranceProfile tol = tolerances(doc.contains("tolerances") ? &doc.at("tolerances") : nullptr);

    Chart chart(params, std::move(components), std::move(guards));
    AmbientSpace ambient(n, std::move(sigma), lee_sign);

    return Scenario{
        name,
        description,
        sigma_source,
        std::move(ambient),
        std::move(chart),
        std::move(split),
        std::move(warp),
        e1,
        e2,
        std::move(spec),
        tol,
        fnv1a_hex(doc.dump()),
    };
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SchemaError(path, "cannot open scenario file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

Scenario load_builtin(const std::string& name)
{
    return parse_scenario(builtin_source(name));
}

} // namespace bislant
