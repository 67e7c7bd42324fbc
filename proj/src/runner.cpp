#include "bislant/runner.hpp"

#include "bislant/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace bislant {

namespace {

struct CommandEntry {
    Command command;
    std::string_view name;
};

constexpr CommandEntry kCommands[] = {
    {Command::AmbientCheck, "ambient-check"}, {Command::FrameReport, "frame-report"},
    {Command::SlantCheck, "slant-check"},     {Command::WarpedCheck, "warped-check"},
    {Command::ImmersionCheck, "immersion-check"}, {Command::Chen, "chen"},
    {Command::All, "all"},
};

std::string number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct PointContext {
    const Scenario& sc;
    const RunOverrides& ov;
    const Vec& u;
    PointRecord& rec;

    const ToleranceProfile& tol() const { return sc.tolerances; }
    void add(const CheckFragment& f) { append(rec.checks, f); }
    void value(std::string name, double v) { rec.values.push_back({std::move(name), v}); }
};

void slant_values(PointContext& c, const PointState& s)
{
    const SlantRecord r1 = slant_angle(s, c.sc.split.I1, c.tol());
    const SlantRecord r2 = slant_angle(s, c.sc.split.I2, c.tol());
    c.value("slant.theta1", r1.theta);
    c.value("slant.theta2", r2.theta);
    c.value("slant.cos2_theta1", r1.cos2_theta);
    c.value("slant.cos2_theta2", r2.cos2_theta);
    c.value("slant.spread_theta1", r1.eig_spread);
    c.value("slant.spread_theta2", r2.eig_spread);
    c.add({at_most("slant.spread_theta1", r1.eig_spread, c.tol().tol_eig),
           at_most("slant.spread_theta2", r2.eig_spread, c.tol().tol_eig)});
    if (c.sc.split.declared_cos2_theta1)
        c.add({at_most("slant.declared_cos2_theta1",
                       std::abs(r1.cos2_theta - c.sc.split.declared_cos2_theta1->eval(c.u.span())),
                       c.tol().tol_first)});
    if (c.sc.split.declared_cos2_theta2)
        c.add({at_most("slant.declared_cos2_theta2",
                       std::abs(r2.cos2_theta - c.sc.split.declared_cos2_theta2->eval(c.u.span())),
                       c.tol().tol_first)});
    const bool distinct = std::abs(r1.cos2_theta - r2.cos2_theta) > c.tol().tol_eig;
    if (!(r1.proper && r2.proper && distinct))
        c.rec.notes.push_back("not a proper bi-slant point: theta1=" + number(r1.theta) +
                              ", theta2=" + number(r2.theta) +
                              (c.ov.allow_degenerate_angles ? " (allowed)" : ""));
}

void ambient_section(PointContext& c)
{
    c.add(check_structure(c.sc.ambient, c.sc.chart.position(c.u), c.tol()));
}

void immersion_section(PointContext& c, const PointState& s2)
{
    c.add(check_operator_identities(s2, c.tol()));
    c.add(check_weyl_relations(c.sc.chart, c.sc.ambient, c.u, c.tol()));
    c.add(check_PFtf_derivatives(c.sc.chart, c.sc.ambient, c.u, c.tol()));
    c.value("immersion.mean_curvature_norm", s2.ip().norm(s2.H));
}

void slant_section(PointContext& c, const PointState& s2)
{
    const DistributionConditions d1 =
        check_d1_conditions(c.sc.chart, c.sc.ambient, c.sc.split, c.u, c.tol(), c.sc.expect_d1);
    const DistributionConditions d2 =
        check_d2_conditions(c.sc.chart, c.sc.ambient, c.sc.split, c.u, c.tol(), c.sc.expect_d2);
    c.add(d1.checks);
    c.add(d2.checks);
    const InnerProduct g = s2.ip();
    c.value("d1.totally_geodesic_residual", d1.totally_geodesic);
    c.value("d1.umbilic_fit_residual", d1.umbilic_fit);
    c.value("d2.totally_geodesic_residual", d2.totally_geodesic);
    c.value("d2.umbilic_fit_residual", d2.umbilic_fit);
    c.value("d2.mean_curvature_fit_norm", g.norm(d2.mean_curvature));
    c.value("slant.mixed_tg", mixed_tg_check(s2, c.sc.split, c.tol()));
}

void warped_section(PointContext& c)
{
    const WarpDeclaration& warp = *c.sc.warp;
    c.add(validate_warp(c.sc.chart, c.sc.ambient, c.sc.split, warp, c.u, c.tol()));
    c.add(check_lemma_identities(c.sc.chart, c.sc.ambient, c.sc.split, warp, c.u, c.tol()));
    const Characterization ch =
        check_characterization(c.sc.chart, c.sc.ambient, c.sc.split, warp, c.u, c.tol());
    c.add(ch.checks);
    c.value("warp.lambda", warp.value(c.u));
}

void chen_section(PointContext& c, const PointState& s1)
{
    ChenOptions opt;
    opt.allow_degenerate_angles = c.ov.allow_degenerate_angles;
    const ChenRecord r = chen_inequality(c.sc.chart, c.sc.ambient, c.sc.split, c.u, c.tol(), opt);
    const EqualityDiagnosis d = equality_case(r, c.tol());
    c.add({at_most("chen.rhs_minus_lhs", -r.slack, c.tol().tol_second)});
    const double scale = r.lhs > 0.0 ? r.lhs : 1.0;
    c.add({at_most("chen.block_sum", std::abs(r.block_sum - r.lhs) / scale, c.tol().tol_first)});
    if (d.status != EqualityStatus::Strict)
        c.add({at_most("chen.equality_case", d.status == EqualityStatus::Violated ? 1.0 : 0.0, 0.0)});
    c.value("chen.lhs", r.lhs);
    c.value("chen.rhs", r.rhs);
    c.value("chen.slack", r.slack);
    for (std::size_t k = 0; k < r.terms.size(); ++k)
        c.value("chen.term" + std::to_string(k + 1), r.terms[k]);
    c.value("chen.mu_norm", r.mu_norm);
    c.value("chen.mean_curvature_norm", r.mean_curvature_norm);
    c.value("chen.mixed_tg", r.mixed_tg);
    c.rec.notes.push_back("chen: " + d.text);

    try {
        const AdaptedFrame af = adapted_frame(s1, c.sc.split, c.tol());
        c.add({at_most("frame.adapted_gram", af.gram_residual, c.tol().tol_first),
               at_most("frame.adapted_j_decomposition", af.j_decomposition, c.tol().tol_first)});
    } catch (const DegeneracyError& e) {
        if (!c.ov.allow_degenerate_angles)
            throw;
        c.rec.notes.push_back(std::string("adapted frame skipped: ") + e.what());
    }
}

void evaluate(PointContext& c, Command command)
{
    const Scenario& sc = c.sc;
    switch (command) {
    case Command::AmbientCheck:
        ambient_section(c);
        return;
    case Command::FrameReport: {
        const PointState s = frame(sc.chart, sc.ambient, c.u);
        c.add(check_operator_identities(s, c.tol()));
        slant_values(c, s);
        return;
    }
    case Command::SlantCheck: {
        const PointState s2 = second_fundamental(sc.chart, sc.ambient, c.u, c.tol());
        slant_values(c, s2);
        slant_section(c, s2);
        return;
    }
    case Command::WarpedCheck:
        warped_section(c);
        return;
    case Command::ImmersionCheck: {
        const PointState s2 = second_fundamental(sc.chart, sc.ambient, c.u, c.tol());
        immersion_section(c, s2);
        return;
    }
    case Command::Chen: {
        const PointState s = frame(sc.chart, sc.ambient, c.u);
        chen_section(c, s);
        return;
    }
    case Command::All: {
        const PointState s2 = second_fundamental(sc.chart, sc.ambient, c.u, c.tol());
        ambient_section(c);
        immersion_section(c, s2);
        slant_values(c, s2);
        slant_section(c, s2);
        if (sc.warp)
            warped_section(c);
        chen_section(c, s2);
        return;
    }
    }
}

} // namespace

std::optional<Command> parse_command(std::string_view name)
{
    for (const auto& e : kCommands)
        if (e.name == name)
            return e.command;
    return std::nullopt;
}

std::string_view command_name(Command command)
{
    for (const auto& e : kCommands)
        if (e.command == command)
            return e.name;
    return "unknown";
}

Scenario apply_overrides(const Scenario& scenario, const RunOverrides& ov)
{
    Scenario sc = scenario;
    if (ov.tol_first)
        sc.tolerances.tol_first = *ov.tol_first;
    if (ov.tol_second)
        sc.tolerances.tol_second = *ov.tol_second;
    try {
        sc.tolerances.validate();
    } catch (const Error& e) {
        throw SchemaError("tolerances", e.what());
    }
    if (ov.grid) {
        if (*ov.grid == 0)
            throw SchemaError("--grid", "must be positive");
        sc.samples.mode = SampleSpec::Mode::Grid;
        sc.samples.counts.assign(sc.chart.m(), *ov.grid);
    }
    if (ov.seed)
        sc.samples.seed = *ov.seed;
    if (ov.flip_lee_sign)
        sc.ambient = AmbientSpace(sc.ambient.n(), sc.ambient.sigma(), -sc.ambient.lee_sign());
    if (ov.warp) {
        try {
            sc.warp = WarpDeclaration{Expression::parse(*ov.warp, sc.chart.params())};
        } catch (const ParseError& e) {
            throw SchemaError("--warp", e.what());
        }
    }
    if (ov.invert_warp) {
        if (!sc.warp)
            throw SchemaError("--invert-warp", "scenario has no warp declaration");
        sc.warp = WarpDeclaration{
            Expression::parse("1/(" + sc.warp->lambda.serialize() + ")", sc.chart.params())};
    }
    return sc;
}

PointRecord evaluate_point(const Scenario& sc, Command command, const Vec& u, std::size_t index,
                           const RunOverrides& ov)
{
    PointRecord rec;
    rec.index = index;
    rec.u = u;
    if (!sc.chart.admitted(u)) {
        rec.status = PointStatus::SkippedGuard;
        return rec;
    }
    PointContext ctx{sc, ov, u, rec};
    try {
        evaluate(ctx, command);
    } catch (const std::exception& e) {
        rec.status = PointStatus::Degenerate;
        rec.error = e.what();
        rec.checks.clear();
        rec.values.clear();
        return rec;
    } catch (...) {
        rec.status = PointStatus::Degenerate;
        rec.error = "unknown failure";
        rec.checks.clear();
        rec.values.clear();
        return rec;
    }
    std::stable_sort(rec.checks.begin(), rec.checks.end(),
                     [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    std::stable_sort(rec.values.begin(), rec.values.end(),
                     [](const NamedValue& a, const NamedValue& b) { return a.name < b.name; });
    return rec;
}

CheckReport run(const Scenario& scenario, Command command, const RunOverrides& ov,
                Execution execution)
{
    if (command == Command::WarpedCheck && !scenario.warp && !ov.warp)
        throw SchemaError("warp", "warped-check needs a warp declaration");
    const Scenario sc = apply_overrides(scenario, ov);
    const std::vector<Vec> points = sample_points(sc.samples);

    CheckReport report;
    report.command = std::string(command_name(command));
    report.scenario_name = sc.name;
    report.scenario_hash = "fnv1a64:" + sc.hash;
    report.tolerances = sc.tolerances;
    report.parameters = sc.chart.params();
    if (ov.tol_first)
        report.overrides.push_back("tol_first=" + number(*ov.tol_first));
    if (ov.tol_second)
        report.overrides.push_back("tol_second=" + number(*ov.tol_second));
    if (ov.grid)
        report.overrides.push_back("grid=" + std::to_string(*ov.grid));
    if (ov.seed)
        report.overrides.push_back("seed=" + std::to_string(*ov.seed));
    if (ov.allow_degenerate_angles)
        report.overrides.push_back("allow_degenerate_angles");
    if (ov.flip_lee_sign)
        report.overrides.push_back("flip_lee_sign");
    if (ov.warp)
        report.overrides.push_back("warp=" + *ov.warp);
    if (ov.invert_warp)
        report.overrides.push_back("invert_warp");

    report.points.resize(points.size());
    const auto count = static_cast<std::ptrdiff_t>(points.size());
    if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t k = 0; k < count; ++k)
            report.points[static_cast<std::size_t>(k)] =
                evaluate_point(sc, command, points[static_cast<std::size_t>(k)],
                               static_cast<std::size_t>(k), ov);
    } else {
        for (std::ptrdiff_t k = 0; k < count; ++k)
            report.points[static_cast<std::size_t>(k)] =
                evaluate_point(sc, command, points[static_cast<std::size_t>(k)],
                               static_cast<std::size_t>(k), ov);
    }

    report.requested = points.size();
    for (const auto& p : report.points) {
        switch (p.status) {
        case PointStatus::Ok: ++report.admitted; break;
        case PointStatus::SkippedGuard: ++report.skipped_guard; break;
        case PointStatus::Degenerate: ++report.degenerate; break;
        }
    }
    report.exit_code = exit_code(report, ov.max_degenerate_fraction);
    return report;
}

int exit_code(const CheckReport& report, double max_degenerate_fraction)
{
    if (report.admitted == 0)
        return 3;
    if (static_cast<double>(report.degenerate) >
        max_degenerate_fraction * static_cast<double>(report.requested))
        return 3;
    return report.failed_count() > 0 ? 1 : 0;
}

} // namespace bislant
