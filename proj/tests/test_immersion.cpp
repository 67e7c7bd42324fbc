#include "bislant/error.hpp"
#include "bislant/immersion.hpp"
#include "bislant/scenario.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace bislant;

namespace {

Chart make_chart(std::vector<std::string> params, std::vector<std::string> comps,
                 std::vector<std::string> guards = {})
{
    std::vector<Expression> c, g;
    for (const auto& s : comps)
        c.push_back(Expression::parse(s, params));
    for (const auto& s : guards)
        g.push_back(Expression::parse(s, params));
    return Chart(std::move(params), std::move(c), std::move(g));
}

double residual(const CheckFragment& f, const std::string& name)
{
    for (const auto& c : f)
        if (c.name == name)
            return c.residual;
    FAIL("missing check " << name);
    return 0;
}

const Vec kSpot{0.6, 0.1, 1.5, 0.5};

// x1 = u1, y1 = u2: a complex line.
const Chart kHolomorphic = make_chart({"u1", "u2"}, {"u1", "0", "u2", "0"});
// x1 = u1, x2 = u2: a Lagrangian plane.
const Chart kTotallyReal = make_chart({"u1", "u2"}, {"u1", "u2", "0", "0"});

} // namespace

TEST_CASE("holomorphic plane")
{
    const auto s = frame(kHolomorphic, AmbientSpace::kahler(2), Vec{0.3, -0.2});
    CHECK((s.P * s.P + Mat::identity(2)).max_abs() < 1e-14);
    CHECK(s.F.max_abs() < 1e-14);
}

TEST_CASE("totally real plane")
{
    const auto s = frame(kTotallyReal, AmbientSpace::kahler(2), Vec{0.3, -0.2});
    CHECK(s.P.max_abs() < 1e-14);
    const auto g = s.ip();
    for (const Vec& e : s.local.tangent)
        CHECK(g.norm(s.F_of(e)) == doctest::Approx(g.norm(e)).epsilon(1e-14));
}

TEST_CASE("operator identities on the example chart")
{
    const auto sc = load_builtin("paper-example");
    const auto s = second_fundamental(sc.chart, sc.ambient, kSpot, sc.tolerances);
    for (const auto& c : check_operator_identities(s, sc.tolerances))
        CHECK_MESSAGE(c.residual <= 1e-8, c.name);
}

TEST_CASE("chart position matches the hand-written immersion")
{
    const auto sc = load_builtin("paper-example");
    const auto x = sc.chart.position(kSpot);
    const auto o = oracle::example_position(kSpot.values());
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(x[i] == doctest::Approx(o[i]).epsilon(1e-15));
}

TEST_CASE("guards")
{
    const auto sc = load_builtin("paper-example");
    CHECK(sc.chart.admitted(kSpot));
    CHECK(!sc.chart.admitted(Vec{0.1, 0.6, 1.5, 0.5}));
    CHECK_THROWS_AS(sc.chart.require_admitted(Vec{0.1, 0.6, 1.5, 0.5}), GuardViolation);
    CHECK_THROWS_AS((void)frame(sc.chart, sc.ambient, Vec{0.1, 0.6, 1.5, 0.5}), GuardViolation);
    for (double a : {0.2, 0.5, 0.9})
        for (double b : {0.1, 0.4})
            CHECK(sc.chart.admitted(Vec{a, b, 1.5, 0.5}) == oracle::example_admitted(a, b, 1.5, 0.5));
}

TEST_CASE("rank deficient chart")
{
    const Chart c = make_chart({"u1", "u2"}, {"u1", "u1", "0", "0"});
    CHECK_THROWS_AS((void)frame(c, AmbientSpace::kahler(2), Vec{0.1, 0.2}), RankError);
}

TEST_CASE("linear chart is totally geodesic")
{
    const Chart c = make_chart({"u1", "u2"}, {"u1 + 2*u2", "u2", "3*u1", "-u2"});
    const auto s = second_fundamental(c, AmbientSpace::kahler(2), Vec{0.4, 0.7}, ToleranceProfile{});
    CHECK(s.H.max_abs() < 1e-9);
    for (const auto& row : s.h)
        for (const Vec& v : row)
            CHECK(v.max_abs() < 1e-9);
}

TEST_CASE("circles")
{
    const ToleranceProfile prof;
    const double u = 0.7;
    const Chart unit = make_chart({"u"}, {"cos(u)", "sin(u)"});
    const auto s = second_fundamental(unit, AmbientSpace::kahler(1), Vec{u}, prof);
    CHECK(s.ip().norm(s.H) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.h[0][0][0] == doctest::Approx(-std::cos(u)).epsilon(1e-8));
    CHECK(s.h[0][0][1] == doctest::Approx(-std::sin(u)).epsilon(1e-8));

    const Chart r2 = make_chart({"u"}, {"2*cos(u)", "2*sin(u)"});
    const auto s2 = second_fundamental(r2, AmbientSpace::kahler(1), Vec{u}, prof);
    CHECK(s2.ip().norm(s2.H) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("second fundamental form against second differences in flat space")
{
    const auto sc = load_scenario(BISLANT_SCENARIO_DIR "/paper_example_flat.json");
    const auto s = second_fundamental(sc.chart, sc.ambient, kSpot, sc.tolerances);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            // d_i d_j x by differencing the oracle's first derivative.
            const auto dij = oracle::derivative(
                [&](double t) {
                    auto p = kSpot.values();
                    p[i] += t;
                    return oracle::derivative(
                        [&](double r) {
                            auto q = p;
                            q[j] += r;
                            return oracle::example_position(q);
                        },
                        0.0, 1e-4);
                },
                0.0, 1e-4);
            const Vec w(dij);
            const Vec expect = s.normal_part(w);
            const Vec got = s.h_of(s.local.coord[i], s.local.coord[j]);
            CHECK((expect - got).max_abs() < 1e-5);
        }
}

TEST_CASE("gauss symmetry")
{
    const auto sc = load_builtin("paper-example");
    for (const auto& u : sample_points(sc.samples)) {
        if (!sc.chart.admitted(u))
            continue;
        const auto s = second_fundamental(sc.chart, sc.ambient, u, sc.tolerances);
        CHECK(s.gauss_symmetry <= sc.tolerances.tol_second);
    }
}

TEST_CASE("normal connection examples")
{
    const ToleranceProfile prof;
    const Chart plane = make_chart({"u1", "u2"}, {"u1", "u2", "0", "0"});
    const auto flat = AmbientSpace::kahler(2);
    const auto nc = normal_connection(plane, flat, Vec{0.2, 0.3},
                                      [](const Vec&) { return Vec{0, 0, 1, 0}; }, 0, prof);
    CHECK(nc.value.max_abs() < 1e-12);
    CHECK(nc.weingarten.max_abs() < 1e-12);

    const Chart circle = make_chart({"u"}, {"cos(u)", "sin(u)"});
    const auto cc = normal_connection(circle, AmbientSpace::kahler(1), Vec{0.4},
                                      [](const Vec& v) { return Vec{std::cos(v[0]), std::sin(v[0])}; },
                                      0, prof);
    CHECK(cc.value.max_abs() < 1e-9);
    // Outward normal: the shape operator is -I, so the Weingarten term is +d_u.
    CHECK(cc.weingarten[0] == doctest::Approx(-std::sin(0.4)).epsilon(1e-9));
    CHECK(cc.weingarten[1] == doctest::Approx(std::cos(0.4)).epsilon(1e-9));
    CHECK(cc.shape_mismatch < 1e-8);

    CHECK_THROWS_AS((void)normal_connection(plane, flat, Vec{0.2, 0.3},
                                            [](const Vec&) { return Vec{1, 0, 0, 0}; }, 0, prof),
                    NumericalError);
}

TEST_CASE("normal connection is metric on the example")
{
    const auto sc = load_builtin("paper-example");
    const FieldCalculus calc(sc.chart, sc.ambient, sc.tolerances);
    const auto s = frame(sc.chart, sc.ambient, kSpot);
    const Vec c1 = s.normal[0];
    const Vec c2 = s.normal[2] + 0.5 * s.normal[1];
    const auto xi = calc.normal_field(c1);
    const auto eta = calc.normal_field(c2);
    for (std::size_t i = 0; i < 4; ++i) {
        const double lhs = oracle::derivative(
            [&](double t) {
                Vec p = kSpot;
                p[i] += t;
                const auto x = sc.chart.position(p);
                return metric(sc.ambient, x)(xi(p), eta(p));
            },
            0.0);
        const auto a = normal_connection(sc.chart, sc.ambient, kSpot, xi, i, sc.tolerances);
        const auto b = normal_connection(sc.chart, sc.ambient, kSpot, eta, i, sc.tolerances);
        const auto g = s.ip();
        CHECK(std::abs(lhs - (g(a.value, eta(kSpot)) + g(xi(kSpot), b.value))) <= sc.tolerances.tol_second);
        CHECK(a.shape_mismatch <= sc.tolerances.tol_second);
    }
}

TEST_CASE("weyl relations")
{
    const auto flat = load_scenario(BISLANT_SCENARIO_DIR "/paper_example_flat.json");
    for (const auto& c : check_weyl_relations(flat.chart, flat.ambient, kSpot, flat.tolerances))
        CHECK_MESSAGE(c.residual <= 1e-12, c.name);

    const auto sc = load_builtin("paper-example");
    int n = 0;
    for (const auto& u : sample_points(sc.samples)) {
        if (!sc.chart.admitted(u) || n++ >= 10)
            continue;
        for (const auto& c : check_weyl_relations(sc.chart, sc.ambient, u, sc.tolerances))
            CHECK_MESSAGE(c.pass, c.name, " ", c.residual);
    }

    // Without the 1/2 g(U,V) B^N term the h relation is off by about 1/2 |g(U,V)| |B^N|.
    const auto s = frame(sc.chart, sc.ambient, kSpot);
    const double bn = s.ip().norm(s.B_N);
    const double dropped = residual(
        check_weyl_relations(sc.chart, sc.ambient, kSpot, sc.tolerances, WeylOptions{true}),
        "weyl.second_fundamental");
    CHECK(dropped == doctest::Approx(0.5 * bn).epsilon(1e-4));
    CHECK(dropped > 100 * sc.tolerances.tol_second);
}

TEST_CASE("derivatives of P, F, t, f")
{
    const ToleranceProfile prof;
    for (const auto& c : check_PFtf_derivatives(kHolomorphic, AmbientSpace::kahler(2), Vec{0.1, 0.2}, prof))
        CHECK_MESSAGE(c.residual < 1e-10, c.name);
    for (const auto& c : check_PFtf_derivatives(kTotallyReal, AmbientSpace::kahler(2), Vec{0.1, 0.2}, prof))
        CHECK_MESSAGE(c.residual < 1e-10, c.name);

    // Curved Lagrangian graph: the P relation reduces to A_{FV}U = -t h(U,V).
    const Chart lag = make_chart({"u1", "u2"}, {"u1", "u2", "u1^2/2", "u2^2/2"});
    const auto s = second_fundamental(lag, AmbientSpace::kahler(2), Vec{0.3, 0.4}, prof);
    CHECK(s.P.max_abs() < 1e-12);
    for (const Vec& U : s.local.tangent)
        for (const Vec& V : s.local.tangent) {
            const Vec lhs = s.shape(s.F_of(V), U);
            const Vec rhs = -s.t_of(s.h_of(U, V));
            CHECK((lhs - rhs).max_abs() < 1e-7);
        }
    for (const auto& c : check_PFtf_derivatives(lag, AmbientSpace::kahler(2), Vec{0.3, 0.4}, prof))
        CHECK_MESSAGE(c.pass, c.name, " ", c.residual);

    const auto sc = load_builtin("paper-example");
    for (const auto& c : check_PFtf_derivatives(sc.chart, sc.ambient, kSpot, sc.tolerances))
        CHECK_MESSAGE(c.pass, c.name, " ", c.residual);
}
