#include "bislant/slant.hpp"

#include "bislant/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bislant {

void DistributionSplit::validate(std::size_t m) const
{
    if (I1.empty() || I2.empty())
        throw NumericalError("both distributions must be non-empty");
    if (I1.size() % 2 != 0)
        throw NumericalError("I1 has odd cardinality " + std::to_string(I1.size()) +
                             "; a slant distribution has even real dimension");
    if (I2.size() % 2 != 0)
        throw NumericalError("I2 has odd cardinality " + std::to_string(I2.size()) +
                             "; a slant distribution has even real dimension");
    std::vector<int> seen(m, 0);
    for (auto i : I1) {
        if (i >= m)
            throw NumericalError("I1 index out of range");
        ++seen[i];
    }
    for (auto i : I2) {
        if (i >= m)
            throw NumericalError("I2 index out of range");
        ++seen[i];
    }
    for (std::size_t i = 0; i < m; ++i)
        if (seen[i] != 1)
            throw NumericalError("I1 and I2 must partition the parameters (index " +
                                 std::to_string(i + 1) + ")");
}

namespace {

std::vector<Vec> select(const std::vector<Vec>& v, const std::vector<std::size_t>& idx)
{
    std::vector<Vec> out;
    out.reserve(idx.size());
    for (auto i : idx)
        out.push_back(v[i]);
    return out;
}

} // namespace

SlantRecord slant_angle(const PointState& state, const std::vector<std::size_t>& indices,
                        const ToleranceProfile& profile)
{
    if (indices.empty())
        throw NumericalError("slant_angle: empty index set");
    const InnerProduct g = state.ip();
    const std::vector<Vec> basis = gram_schmidt(select(state.local.coord, indices), g);
    const std::size_t k = basis.size();

    SlantRecord rec;
    Mat Q(k, k);
    double leak = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        const Vec Pd = state.P_of(basis[a]);
        const Vec inside = project(Pd, basis, g);
        const double r = g.norm(Pd - inside);
        leak += r * r;
        for (std::size_t b = 0; b < k; ++b)
            Q(b, a) = g(Pd, basis[b]);
    }
    rec.invariance_residual = std::sqrt(leak);
    if (rec.invariance_residual > profile.tol_first)
        throw NumericalError("distribution is not P-invariant (residual " +
                             std::to_string(rec.invariance_residual) + ")");

    const SymEigen eig = sym_eigen(Q.transpose() * Q);
    rec.eigenvalues = eig.values;
    const double mean =
        std::accumulate(eig.values.begin(), eig.values.end(), 0.0) / static_cast<double>(k);
    rec.eig_spread = eig.values.back() - eig.values.front();
    rec.cos2_theta = std::clamp(mean, 0.0, 1.0);
    rec.theta = std::acos(std::sqrt(rec.cos2_theta));
    rec.proper = rec.cos2_theta > profile.tol_eig && rec.cos2_theta < 1.0 - profile.tol_eig &&
                 rec.eig_spread <= profile.tol_eig;
    return rec;
}

SplitBasis split_basis(const PointState& state, const DistributionSplit& split)
{
    const InnerProduct g = state.ip();
    const std::size_t m = state.m();
    std::vector<std::size_t> order = split.I1;
    order.insert(order.end(), split.I2.begin(), split.I2.end());
    const Orthonormalization on = orthonormalize(select(state.local.coord, order), g);
    const Mat C = invert_upper(on.r);

    SplitBasis out;
    for (std::size_t k = 0; k < order.size(); ++k) {
        Vec c(m);
        for (std::size_t j = 0; j <= k; ++j)
            c[order[j]] = C(j, k);
        if (k < split.I1.size()) {
            out.d1.push_back(on.basis[k]);
            out.c1.push_back(std::move(c));
        } else {
            out.d2.push_back(on.basis[k]);
            out.c2.push_back(std::move(c));
        }
    }
    const std::vector<Vec> b1 = gram_schmidt(select(state.local.coord, split.I1), g);
    const std::vector<Vec> b2 = gram_schmidt(select(state.local.coord, split.I2), g);
    for (const Vec& a : b1)
        for (const Vec& b : b2)
            out.orthogonality = std::max(out.orthogonality, std::abs(g(a, b)));
    return out;
}

namespace {

struct DisplayTerms {
    double shape = 0.0;   // g(A_{FPX} Z - A_{FX} PZ, Y)
    double normal = 0.0;  // g(nabla-perp_Y FX, FZ)
};

Vec normal_derivative_of_FX(const FieldCalculus& calc, const PointState& s, const Vec& cx,
                            const Vec& cy)
{
    const FieldSampler fx = calc.normal_of(calc.J_of(calc.tangent_field(cx)));
    return s.normal_part(calc.derivative(fx, s.local, cy));
}

DisplayTerms display_terms(const PointState& s, const Vec& X, const Vec& Y, const Vec& Z,
                           const Vec& perp_Y_FX)
{
    const InnerProduct g = s.ip();
    const Vec FX = s.F_of(X);
    const Vec FPX = s.F_of(s.P_of(X));
    const Vec PZ = s.P_of(Z);
    DisplayTerms t;
    t.shape = g(s.shape(FPX, Z) - s.shape(FX, PZ), Y);
    t.normal = g(perp_Y_FX, s.F_of(Z));
    return t;
}

void gate_expectation(CheckFragment& out, const std::string& prefix, const std::string& what,
                      std::optional<bool> expected, double residual, double gate)
{
    if (!expected)
        return;
    if (*expected)
        out.push_back(at_most(prefix + "." + what, residual, gate));
    else
        out.push_back(exceeds(prefix + ".not_" + what, residual, gate));
}

DistributionConditions battery(const Chart& chart, const AmbientSpace& space,
                               const DistributionSplit& split, const Vec& u,
                               const ToleranceProfile& profile, const ConditionExpectations& expect,
                               bool first)
{
    const PointState s = second_fundamental(chart, space, u, profile);
    const FieldCalculus calc(chart, space, profile);
    const InnerProduct g = s.ip();
    const AmbientPoint& p = s.local.ambient;

    const SplitBasis sb = split_basis(s, split);
    const std::vector<Vec>& own = first ? sb.d1 : sb.d2;
    const std::vector<Vec>& own_c = first ? sb.c1 : sb.c2;
    const std::vector<Vec>& other = first ? sb.d2 : sb.d1;
    const SlantRecord rec = slant_angle(s, first ? split.I1 : split.I2, profile);
    const double sin2 = 1.0 - rec.cos2_theta;

    const std::size_t k = own.size();
    const std::size_t l = other.size();
    DistributionConditions out;
    for (const Vec& z : other)
        out.omega_other = std::max(out.omega_other, std::abs(p.omega_of(z)));

    // disp[a][c][b]: X = own[a], Y = own[c], Z = other[b].
    std::vector<std::vector<std::vector<double>>> disp(
        k, std::vector<std::vector<double>>(k, std::vector<double>(l)));
    double max_disp = 0.0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t c = 0; c < k; ++c) {
            const Vec perp = normal_derivative_of_FX(calc, s, own_c[a], own_c[c]);
            const Vec nabla = s.tangential(calc.derivative(calc.tangent_field(own_c[a]), s.local, own_c[c]));
            for (std::size_t b = 0; b < l; ++b) {
                const DisplayTerms t = display_terms(s, own[a], own[c], other[b], perp);
                const double d = t.shape + t.normal;
                disp[a][c][b] = d;
                max_disp = std::max(max_disp, std::abs(d));
                const double geometry =
                    sin2 * (g(nabla, other[b]) + 0.5 * g(own[a], own[c]) * p.omega_of(other[b]));
                out.display_vs_geometry = std::max(out.display_vs_geometry, std::abs(d - geometry));
            }
        }

    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t c = a + 1; c < k; ++c)
            for (std::size_t b = 0; b < l; ++b)
                out.involutive = std::max(out.involutive, std::abs(disp[a][c][b] - disp[c][a][b]));

    out.totally_geodesic = std::max(out.omega_other, max_disp);

    // Umbilic display: disp(a,c,b) = sin^2 (1/2 omega(Z_b) + g(H, Z_b)) delta_ac.
    out.mean_curvature = Vec(s.x().size());
    for (std::size_t b = 0; b < l; ++b) {
        const double half_omega = 0.5 * p.omega_of(other[b]);
        double coeff = 0.0;
        if (sin2 > 1e-12) {
            double trace = 0.0;
            for (std::size_t a = 0; a < k; ++a)
                trace += disp[a][a][b];
            coeff = trace / (static_cast<double>(k) * sin2) - half_omega;
        }
        out.mean_curvature += coeff * other[b];
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t c = 0; c < k; ++c) {
                const double model = a == c ? sin2 * (half_omega + coeff) : 0.0;
                out.umbilic_fit = std::max(out.umbilic_fit, std::abs(disp[a][c][b] - model));
            }
    }

    const std::string prefix = first ? "d1" : "d2";
    out.checks.push_back(at_most(prefix + ".involutive", out.involutive, profile.tol_second));
    out.checks.push_back(
        at_most(prefix + ".display_vs_geometry", out.display_vs_geometry, profile.tol_second));
    gate_expectation(out.checks, prefix, "totally_geodesic", expect.totally_geodesic,
                     out.totally_geodesic, profile.tol_second);
    gate_expectation(out.checks, prefix, "totally_umbilic", expect.totally_umbilic, out.umbilic_fit,
                     profile.tol_second);
    return out;
}

} // namespace

double condition_display(const FieldCalculus& calc, const PointState& state, const Vec& cx,
                         const Vec& cy, const Vec& z)
{
    const Vec perp = normal_derivative_of_FX(calc, state, cx, cy);
    const DisplayTerms t =
        display_terms(state, state.local.push_forward(cx), state.local.push_forward(cy), z, perp);
    return t.shape + t.normal;
}

DistributionConditions check_d1_conditions(const Chart& chart, const AmbientSpace& space,
                                           const DistributionSplit& split, const Vec& u,
                                           const ToleranceProfile& profile,
                                           const ConditionExpectations& expect)
{
    return battery(chart, space, split, u, profile, expect, true);
}

DistributionConditions check_d2_conditions(const Chart& chart, const AmbientSpace& space,
                                           const DistributionSplit& split, const Vec& u,
                                           const ToleranceProfile& profile,
                                           const ConditionExpectations& expect)
{
    return battery(chart, space, split, u, profile, expect, false);
}

double mixed_tg_check(const PointState& state, const DistributionSplit& split,
                      const ToleranceProfile&)
{
    const InnerProduct g = state.ip();
    const SplitBasis sb = split_basis(state, split);
    double worst = 0.0;
    for (const Vec& a : sb.d1)
        for (const Vec& b : sb.d2)
            worst = std::max(worst, g.norm(state.h_of(a, b)));
    return worst;
}

} // namespace bislant
