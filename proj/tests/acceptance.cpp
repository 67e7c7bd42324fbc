// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "bislant/runner.hpp"
#include "bislant/scenario.hpp"

#include "oracles.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace bislant;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty())
                detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Scenario scenario_file(const char* name)
{
    return load_scenario(std::string(BISLANT_SCENARIO_DIR "/") + name);
}

std::vector<Scenario> shipped()
{
    return {load_builtin("paper-example"), scenario_file("kahler_product.json"),
            scenario_file("paper_example_flat.json"), scenario_file("paper_example_warped.json")};
}

// Max residual of every check whose name starts with `prefix`; -1 if none was recorded.
double max_residual(const CheckReport& r, const std::string& prefix)
{
    double m = -1;
    for (const auto& p : r.points)
        for (const auto& c : p.checks)
            if (c.name.rfind(prefix, 0) == 0)
                m = std::max(m, std::isfinite(c.residual) ? c.residual : INFINITY);
    return m;
}

std::vector<double> values(const CheckReport& r, const std::string& name)
{
    std::vector<double> out;
    for (const auto& p : r.points)
        for (const auto& v : p.values)
            if (v.name == name)
                out.push_back(v.value);
    return out;
}

std::vector<Vec> admitted(const Scenario& sc)
{
    std::vector<Vec> out;
    for (const auto& u : sample_points(sc.samples))
        if (sc.chart.admitted(u))
            out.push_back(u);
    return out;
}

Outcome structure()
{
    Outcome o;
    const auto sc = load_builtin("paper-example");
    const auto r = run(sc, Command::AmbientCheck);
    o.require(r.admitted >= 50, "only " + std::to_string(r.admitted) + " admitted points");
    o.require(r.degenerate == 0, "degenerate points");
    for (const char* n : {"ambient.d_fundamental_form", "ambient.nabla_J", "ambient.nabla_lee_symmetry"}) {
        const double m = max_residual(r, n);
        o.require(m >= 0 && m <= 1e-4, std::string(n) + " max " + fmt(m));
    }
    RunOverrides flip;
    flip.flip_lee_sign = true;
    const auto f = run(sc, Command::AmbientCheck, flip);
    std::size_t failed = 0, total = 0;
    for (const auto& p : f.points)
        for (const auto& c : p.checks)
            if (c.name == "ambient.d_fundamental_form") {
                ++total;
                failed += c.residual > 1e-4 ? 1 : 0;
            }
    o.require(total > 0 && failed >= 0.9 * static_cast<double>(total),
              "sign flip failed d_fundamental_form at " + std::to_string(failed) + "/" + std::to_string(total));
    return o;
}

Outcome operator_identities()
{
    Outcome o;
    for (const auto& sc : shipped()) {
        const auto r = run(sc, Command::FrameReport);
        o.require(r.admitted > 0 && r.degenerate == 0, sc.name + ": no usable points");
        for (const char* n : {"frame.P2_plus_tF", "frame.f2_plus_Ft", "frame.FP_plus_fF", "frame.tf_plus_Pt"}) {
            const double m = max_residual(r, n);
            o.require(m >= 0 && m <= 1e-6, sc.name + " " + n + " max " + fmt(m));
        }
    }
    return o;
}

Outcome slant_oracle()
{
    Outcome o;
    const auto sc = load_builtin("paper-example");
    std::size_t n = 0;
    double worst = 0, spread = 0;
    for (const auto& u : admitted(sc)) {
        const auto s = frame(sc.chart, sc.ambient, u);
        const auto r1 = slant_angle(s, sc.split.I1, sc.tolerances);
        const auto r2 = slant_angle(s, sc.split.I2, sc.tolerances);
        worst = std::max({worst, std::abs(r1.cos2_theta - oracle::cos2_theta1(u[0], u[1])),
                          std::abs(r2.cos2_theta - oracle::cos2_theta2(u[2], u[3]))});
        spread = std::max({spread, r1.eig_spread, r2.eig_spread});
        ++n;
    }
    o.require(n >= 50, "only " + std::to_string(n) + " points");
    o.require(worst <= 1e-6, "cos^2 mismatch " + fmt(worst));
    o.require(spread <= 1e-6, "eigenvalue spread " + fmt(spread));

    const auto s = frame(sc.chart, sc.ambient, Vec{0.6, 0.1, 1.5, 0.5});
    const double c1 = slant_angle(s, sc.split.I1, sc.tolerances).cos2_theta;
    const double c2 = slant_angle(s, sc.split.I2, sc.tolerances).cos2_theta;
    o.require(std::abs(c1 - oracle::cos2_theta1(0.6, 0.1)) <= 1e-6 && std::abs(c1 - 0.49541) <= 1e-5,
              "spot cos^2 theta1 " + fmt(c1));
    o.require(std::abs(c2 - oracle::cos2_theta2(1.5, 0.5)) <= 1e-6 && std::abs(c2 - 0.004491) <= 1e-6,
              "spot cos^2 theta2 " + fmt(c2));
    return o;
}

Outcome conformal_invariance()
{
    Outcome o;
    const auto sc = load_builtin("paper-example");
    const auto flat = AmbientSpace::kahler(sc.ambient.n());
    double worst = 0;
    for (const auto& u : admitted(sc)) {
        const auto a = frame(sc.chart, sc.ambient, u);
        const auto b = frame(sc.chart, flat, u);
        for (const auto* idx : {&sc.split.I1, &sc.split.I2})
            worst = std::max(worst, std::abs(slant_angle(a, *idx, sc.tolerances).theta -
                                             slant_angle(b, *idx, sc.tolerances).theta));
    }
    o.require(worst <= 1e-8, "angle difference " + fmt(worst));
    return o;
}

Outcome lemma()
{
    Outcome o;
    const auto sc = load_builtin("paper-example");
    const auto r = run(sc, Command::WarpedCheck);
    for (int k = 1; k <= 6; ++k) {
        const std::string n = "lemma." + std::to_string(k);
        const double m = max_residual(r, n);
        o.require(m >= 0 && m <= (k == 6 ? 1e-6 : 1e-4), n + " max " + fmt(m));
    }
    RunOverrides inv;
    inv.invert_warp = true;
    const auto f = run(sc, Command::WarpedCheck, inv);
    std::size_t missed = 0, candidates = 0;
    for (const auto& p : f.points) {
        if (p.status != PointStatus::Ok)
            continue;
        const auto s = frame(sc.chart, sc.ambient, p.u);
        const auto sb = split_basis(s, sc.split);
        double bx = 0;
        for (const Vec& x : sb.d1)
            bx = std::max(bx, std::abs(s.ip()(s.local.ambient.lee, x)));
        if (bx <= sc.tolerances.tol_first)
            continue;
        ++candidates;
        for (const auto& c : p.checks)
            if (c.name == "lemma.5" && c.pass)
                ++missed;
    }
    o.require(candidates > 0 && missed == 0,
              "inverted warp passed identity 5 at " + std::to_string(missed) + "/" + std::to_string(candidates));
    return o;
}

Outcome characterization()
{
    Outcome o;
    const auto r = run(load_builtin("paper-example"), Command::WarpedCheck);
    const double g = max_residual(r, "char.grad_log_lambda");
    const double xz = std::max(max_residual(r, "char.nabla_XZ"), max_residual(r, "char.nabla_ZX"));
    o.require(g >= 0 && g <= 1e-6, "grad(ln lambda) - B^T/2 " + fmt(g));
    o.require(xz >= 0 && xz <= 1e-4, "nabla_X Z - omega(X) Z/2 " + fmt(xz));
    const auto p = run(scenario_file("kahler_product.json"), Command::WarpedCheck);
    const double pg = max_residual(p, "char.grad_log_lambda");
    const double pxz = std::max(max_residual(p, "char.nabla_XZ"), max_residual(p, "char.nabla_ZX"));
    o.require(pg >= 0 && pg <= 1e-10, "product grad " + fmt(pg));
    o.require(pxz >= 0 && pxz <= 1e-10, "product nabla_X Z " + fmt(pxz));
    return o;
}

Outcome battery()
{
    Outcome o;
    const auto flat = scenario_file("paper_example_flat.json");
    const ConditionExpectations tg{true, std::nullopt};
    double f1 = 0, f2 = 0;
    for (const auto& u : admitted(flat)) {
        f1 = std::max(f1, check_d1_conditions(flat.chart, flat.ambient, flat.split, u, flat.tolerances, tg)
                              .totally_geodesic);
        f2 = std::max(f2, check_d2_conditions(flat.chart, flat.ambient, flat.split, u, flat.tolerances, tg)
                              .totally_geodesic);
    }
    o.require(f1 <= flat.tolerances.tol_second, "flat d1 geodesic " + fmt(f1));
    o.require(f2 <= flat.tolerances.tol_second, "flat d2 geodesic " + fmt(f2));

    const auto sc = load_builtin("paper-example");
    const auto r = run(sc, Command::SlantCheck);
    const auto w = run(sc, Command::WarpedCheck);
    const double d1 = max_residual(r, "d1.totally_geodesic");
    const double um = max_residual(r, "d2.totally_umbilic");
    const double h = max_residual(w, "char.mean_curvature");
    o.require(d1 >= 0 && d1 <= sc.tolerances.tol_second, "d1 geodesic " + fmt(d1));
    o.require(um >= 0 && um <= sc.tolerances.tol_second, "d2 umbilic " + fmt(um));
    o.require(h >= 0 && h <= 1e-4, "|H + B^T/2| " + fmt(h));
    std::size_t not_tg = 0, total = 0;
    for (const auto& p : r.points)
        for (const auto& c : p.checks)
            if (c.name == "d2.not_totally_geodesic") {
                ++total;
                not_tg += c.residual > sc.tolerances.tol_second ? 1 : 0;
            }
    o.require(total > 0 && not_tg == total, "d2 geodesic held at some point");
    return o;
}

Outcome chen()
{
    Outcome o;
    for (const auto& sc : shipped()) {
        const auto r = run(sc, Command::Chen);
        o.require(r.admitted > 0 && r.degenerate == 0, sc.name + ": no usable points");
        for (double s : values(r, "chen.slack"))
            if (s < -1e-4)
                o.require(false, sc.name + " slack " + fmt(s));
        const double block = max_residual(r, "chen.block_sum");
        o.require(block >= 0 && block <= 1e-8, sc.name + " block sum " + fmt(block));
    }
    const auto p = run(scenario_file("kahler_product.json"), Command::Chen);
    const auto lhs = values(p, "chen.lhs");
    const auto rhs = values(p, "chen.rhs");
    const auto slack = values(p, "chen.slack");
    for (std::size_t i = 0; i < lhs.size(); ++i)
        if (rhs[i] != 0.0 || slack[i] != lhs[i])
            o.require(false, "product point " + std::to_string(i) + " rhs " + fmt(rhs[i]));
    return o;
}

Outcome weyl()
{
    Outcome o;
    const std::vector<std::string> names{"weyl.second_fundamental", "weyl.induced_connection",
                                         "weyl.shape_operator", "weyl.normal_connection"};
    const auto r = run(load_builtin("paper-example"), Command::ImmersionCheck);
    for (const auto& n : names) {
        const double m = max_residual(r, n);
        o.require(m >= 0 && m <= 1e-4, n + " " + fmt(m));
    }
    for (const char* f : {"paper_example_flat.json", "kahler_product.json"}) {
        const auto z = run(scenario_file(f), Command::ImmersionCheck);
        for (const auto& n : names) {
            const double m = max_residual(z, n);
            o.require(m >= 0 && m <= 1e-12, std::string(f) + " " + n + " " + fmt(m));
        }
    }
    return o;
}

Outcome adapted()
{
    Outcome o;
    const auto r = run(load_builtin("paper-example"), Command::Chen);
    const double g = max_residual(r, "frame.adapted_gram");
    const double j = max_residual(r, "frame.adapted_j_decomposition");
    o.require(g >= 0 && g <= 1e-6, "gram " + fmt(g));
    o.require(j >= 0 && j <= 1e-6, "J decomposition " + fmt(j));
    return o;
}

Outcome determinism()
{
    Outcome o;
    RunOverrides ov;
    ov.seed = 7;
    const auto sc = load_builtin("paper-example");
    const auto a = emit(run(sc, Command::All, ov), Format::Json);
    const auto b = emit(run(sc, Command::All, ov), Format::Json);
    o.require(a == b, "reports differ");
    o.require(a.size() > 1000, "report unexpectedly short");
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"structure equations", structure},
        {"operator identities", operator_identities},
        {"slant-angle oracle", slant_oracle},
        {"conformal invariance of slant angles", conformal_invariance},
        {"warped-product identities", lemma},
        {"characterization", characterization},
        {"distribution condition battery", battery},
        {"Chen-type inequality", chen},
        {"Weyl relations", weyl},
        {"adapted frame", adapted},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %2zu %s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
