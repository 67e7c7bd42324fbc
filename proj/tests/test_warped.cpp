#include "bislant/error.hpp"
#include "bislant/scenario.hpp"
#include "bislant/warped.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace bislant;

namespace {

const Vec kSpot{0.6, 0.1, 1.5, 0.5};

std::vector<Vec> admitted(const Scenario& sc, std::size_t limit = 1000)
{
    std::vector<Vec> out;
    for (const auto& u : sample_points(sc.samples))
        if (sc.chart.admitted(u) && out.size() < limit)
            out.push_back(u);
    return out;
}

double residual(const CheckFragment& f, const std::string& name)
{
    for (const auto& c : f)
        if (c.name == name)
            return c.residual;
    FAIL("missing check " << name);
    return 0;
}

Scenario product() { return load_scenario(BISLANT_SCENARIO_DIR "/kahler_product.json"); }

WarpDeclaration inverted(const Scenario& sc)
{
    return {Expression::parse("1/(" + sc.warp->lambda.serialize() + ")", sc.chart.params())};
}

} // namespace

TEST_CASE("warp declaration")
{
    const auto sc = load_builtin("paper-example");
    REQUIRE(sc.warp);
    const double u1 = 0.6, u2 = 0.1;
    const double f = std::pow(u1 * std::cos(u2), 2) + std::pow(u2 * std::cos(u1), 2) + 1;
    CHECK(sc.warp->value(kSpot) == doctest::Approx(std::exp(-f / 2)).epsilon(1e-15));
    const Vec g = sc.warp->log_gradient(kSpot);
    const double o = oracle::derivative(
        [&](double t) { Vec p = kSpot; p[0] = t; return std::log(sc.warp->value(p)); }, u1);
    CHECK(g[0] == doctest::Approx(o).epsilon(1e-9));
    CHECK(g[2] == 0.0);
    CHECK(g[3] == 0.0);
}

TEST_CASE("warp validation")
{
    const auto sc = load_builtin("paper-example");
    for (const auto& c : validate_warp(sc.chart, sc.ambient, sc.split, *sc.warp, kSpot, sc.tolerances))
        CHECK_MESSAGE(c.pass, c.name, " ", c.residual);

    const WarpDeclaration fiber{Expression::parse("exp(u3)", sc.chart.params())};
    const auto bad = validate_warp(sc.chart, sc.ambient, sc.split, fiber, kSpot, sc.tolerances);
    CHECK(residual(bad, "warp.base_only") > sc.tolerances.tol_first);

    const WarpDeclaration negative{Expression::parse("-1", sc.chart.params())};
    CHECK_THROWS_AS((void)validate_warp(sc.chart, sc.ambient, sc.split, negative, kSpot, sc.tolerances),
                    NumericalError);
}

TEST_CASE("lemma identities on the product")
{
    const auto sc = product();
    for (const auto& u : admitted(sc, 10))
        for (const auto& c : check_lemma_identities(sc.chart, sc.ambient, sc.split, *sc.warp, u, sc.tolerances))
            CHECK_MESSAGE(c.residual <= 1e-10, c.name);
}

TEST_CASE("lemma identities on the example")
{
    const auto sc = load_builtin("paper-example");
    for (const auto& u : admitted(sc, 10)) {
        const auto f = check_lemma_identities(sc.chart, sc.ambient, sc.split, *sc.warp, u, sc.tolerances);
        REQUIRE(f.size() == 6);
        for (const auto& c : f)
            CHECK_MESSAGE(c.residual <= 1e-4, c.name);
        CHECK(residual(f, "lemma.6") <= 1e-6);
    }
}

TEST_CASE("inverted warp fails identity 5 by |g(B, X)|")
{
    const auto sc = load_builtin("paper-example");
    const auto inv = inverted(sc);
    for (const auto& u : admitted(sc)) {
        const auto f = check_lemma_identities(sc.chart, sc.ambient, sc.split, inv, u, sc.tolerances);
        const auto s = frame(sc.chart, sc.ambient, u);
        const auto sb = split_basis(s, sc.split);
        double bx = 0;
        for (const Vec& x : sb.d1)
            bx = std::max(bx, std::abs(s.ip()(s.local.ambient.lee, x)));
        if (bx > 1e-3) {
            CHECK(residual(f, "lemma.5") == doctest::Approx(bx).epsilon(1e-6));
            CHECK(residual(f, "lemma.5") > sc.tolerances.tol_first);
        }
    }
}

TEST_CASE("characterization on the product")
{
    const auto sc = product();
    for (const auto& u : admitted(sc, 10)) {
        const auto ch = check_characterization(sc.chart, sc.ambient, sc.split, *sc.warp, u, sc.tolerances);
        for (const auto& c : ch.checks)
            CHECK_MESSAGE(c.residual <= 1e-10, c.name);
    }
}

TEST_CASE("characterization on the example")
{
    const auto sc = load_builtin("paper-example");
    for (const auto& u : admitted(sc)) {
        const auto ch = check_characterization(sc.chart, sc.ambient, sc.split, *sc.warp, u, sc.tolerances);
        for (const auto& c : ch.checks)
            CHECK_MESSAGE(c.pass, c.name, " ", c.residual);
        CHECK(residual(ch.checks, "char.grad_log_lambda") <= 1e-6);
        CHECK(residual(ch.checks, "char.nabla_XZ") <= 1e-4);
        CHECK(residual(ch.checks, "char.nabla_ZX") <= 1e-4);
        // grad(ln lambda) = 1/2 B^T
        const auto s = frame(sc.chart, sc.ambient, u);
        CHECK(s.ip().norm(ch.grad_log_lambda - 0.5 * s.B_T) <= 1e-6);
        CHECK(s.ip().norm(ch.grad_log_lambda_coord - 0.5 * s.B_T) <= 1e-6);
    }
}

TEST_CASE("adapted frame")
{
    const auto sc = load_builtin("paper-example");
    for (const auto& u : admitted(sc, 20)) {
        const auto s = frame(sc.chart, sc.ambient, u);
        const auto af = adapted_frame(s, sc.split, sc.tolerances);
        CHECK(af.vectors.size() == 8);
        CHECK(af.gram_residual <= 1e-6);
        CHECK(af.j_decomposition <= 1e-6);
    }

    // Second factor totally real: sec(theta2) blows up.
    std::vector<std::string> params{"u1", "u2", "u3", "u4"};
    std::vector<Expression> comps;
    for (const char* c : {"u1", "u2*sin(pi/6)", "u3", "u4", "u2*cos(pi/6)", "0", "0", "0"})
        comps.push_back(Expression::parse(c, params));
    const Chart tr(params, comps);
    const DistributionSplit sp{{0, 1}, {2, 3}, {}, {}};
    const auto s = frame(tr, AmbientSpace::kahler(4), Vec{0.1, 0.2, 0.3, 0.4});
    CHECK_THROWS_AS((void)adapted_frame(s, sp, ToleranceProfile{}), DegeneracyError);
}

TEST_CASE("chen inequality on the product")
{
    const auto sc = product();
    for (const auto& u : admitted(sc)) {
        const auto r = chen_inequality(sc.chart, sc.ambient, sc.split, u, sc.tolerances);
        CHECK(std::abs(r.lhs) <= 1e-10);
        CHECK(r.rhs == 0.0);
        CHECK(r.slack == r.lhs);
        const auto d = equality_case(r, sc.tolerances);
        CHECK(d.status == EqualityStatus::Consistent);
        CHECK(d.mu_vanishes);
        CHECK(d.minimal);
        CHECK(d.mixed_totally_geodesic);
    }
}

TEST_CASE("chen inequality on the curved examples")
{
    for (const auto& sc : {load_builtin("paper-example"),
                           load_scenario(BISLANT_SCENARIO_DIR "/paper_example_flat.json"),
                           load_scenario(BISLANT_SCENARIO_DIR "/paper_example_warped.json")}) {
        for (const auto& u : admitted(sc)) {
            const auto r = chen_inequality(sc.chart, sc.ambient, sc.split, u, sc.tolerances);
            CHECK(r.slack >= -1e-4);
            CHECK(std::abs(r.block_sum - r.lhs) <= 1e-8 * std::max(1.0, std::abs(r.lhs)));
            double sum = 0;
            for (std::size_t p = 0; p < 3; ++p)
                for (std::size_t q = 0; q < 3; ++q)
                    sum += r.component_norms[p][q];
            CHECK(std::abs(sum - r.lhs) <= 1e-8 * std::max(1.0, std::abs(r.lhs)));
            CHECK(r.rhs == doctest::Approx(r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3]));
        }
    }
}

TEST_CASE("flat example is strict")
{
    const auto sc = load_scenario(BISLANT_SCENARIO_DIR "/paper_example_flat.json");
    const auto r = chen_inequality(sc.chart, sc.ambient, sc.split, kSpot, sc.tolerances);
    CHECK(r.rhs == 0.0);
    CHECK(r.slack > sc.tolerances.tol_second);
    const auto d = equality_case(r, sc.tolerances);
    CHECK(d.status == EqualityStatus::Strict);
    CHECK(d.text == "strict inequality; equality-case assertions not applicable");
}

TEST_CASE("constructed equality record with a mu component")
{
    ChenRecord r;
    r.lhs = r.rhs = 1.0;
    r.slack = 0.0;
    r.mu_norm = 0.3;
    const auto d = equality_case(r, ToleranceProfile{});
    CHECK(d.status == EqualityStatus::Violated);
    CHECK(!d.mu_vanishes);
    CHECK(to_string(d.status) == "violated");

    r.mu_norm = 0;
    r.mean_curvature_norm = 0;
    r.mixed_tg = 2.0;
    CHECK(equality_case(r, ToleranceProfile{}).status == EqualityStatus::Violated);
}

TEST_CASE("chen on degenerate angles")
{
    std::vector<std::string> params{"u1", "u2", "u3", "u4"};
    std::vector<Expression> comps;
    for (const char* c : {"u1", "u2*sin(pi/6)", "u3", "u4", "u2*cos(pi/6)", "0", "0", "0"})
        comps.push_back(Expression::parse(c, params));
    const Chart tr(params, comps);
    const DistributionSplit sp{{0, 1}, {2, 3}, {}, {}};
    const Vec u{0.1, 0.2, 0.3, 0.4};
    CHECK_THROWS_AS((void)chen_inequality(tr, AmbientSpace::kahler(4), sp, u, ToleranceProfile{}),
                    DegeneracyError);
    const auto r = chen_inequality(tr, AmbientSpace::kahler(4), sp, u, ToleranceProfile{}, ChenOptions{true});
    CHECK(std::abs(r.lhs) < 1e-10);
}
