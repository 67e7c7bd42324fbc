#include "bislant/immersion.hpp"

#include "bislant/error.hpp"

#include <algorithm>
#include <cmath>

namespace bislant {

Chart::Chart(std::vector<std::string> params, std::vector<Expression> components,
             std::vector<Expression> guards)
    : params_(std::move(params)), components_(std::move(components)), guards_(std::move(guards))
{
    if (params_.empty())
        throw NumericalError("chart needs at least one parameter");
    if (components_.empty() || components_.size() % 2 != 0)
        throw NumericalError("chart needs an even, positive number of components");
    if (params_.size() > components_.size())
        throw NumericalError("chart has more parameters than ambient dimensions");
    for (const auto& c : components_)
        if (c.variables() != params_)
            throw NumericalError("chart component not declared over the chart parameters");
    for (const auto& g : guards_)
        if (g.variables() != params_)
            throw NumericalError("domain guard not declared over the chart parameters");
}

bool Chart::admitted(const Vec& u) const
{
    try {
        require_admitted(u);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

void Chart::require_admitted(const Vec& u) const
{
    if (u.size() != m())
        throw NumericalError("parameter point has wrong length");
    for (std::size_t k = 0; k < guards_.size(); ++k) {
        double value = 0.0;
        try {
            value = guards_[k].eval(u.span());
        } catch (const DomainError& e) {
            throw GuardViolation("guard " + std::to_string(k + 1) + " not evaluable at " +
                                 to_string(u) + ": " + e.what());
        }
        if (!(value > 0.0))
            throw GuardViolation("guard " + std::to_string(k + 1) + " (" + guards_[k].serialize() +
                                 ") violated at " + to_string(u));
    }
}

Vec Chart::position(const Vec& u) const
{
    Vec x(components_.size());
    for (std::size_t c = 0; c < components_.size(); ++c)
        x[c] = components_[c].eval(u.span());
    return x;
}

std::vector<Vec> Chart::jacobian(const Vec& u) const
{
    std::vector<Vec> cols(m(), Vec(ambient_dim()));
    for (std::size_t c = 0; c < components_.size(); ++c) {
        const std::vector<double> grad = components_[c].gradient(u.span());
        for (std::size_t i = 0; i < m(); ++i)
            cols[i][c] = grad[i];
    }
    return cols;
}

Vec LocalFrame::tangential(const Vec& w) const
{
    const InnerProduct g = ip();
    Vec out(w.size());
    for (const Vec& e : tangent)
        out += g(w, e) * e;
    return out;
}

Vec LocalFrame::normal_part(const Vec& w) const
{
    return w - tangential(w);
}

Vec LocalFrame::push_forward(const Vec& c) const
{
    Vec out(ambient.x.size());
    for (std::size_t i = 0; i < coord.size(); ++i)
        out += c[i] * coord[i];
    return out;
}

LocalFrame local_frame(const Chart& chart, const AmbientSpace& space, const Vec& u)
{
    if (chart.ambient_dim() != space.dim())
        throw NumericalError("chart dimension does not match the ambient space");
    chart.require_admitted(u);
    LocalFrame lf;
    lf.u = u;
    lf.ambient = space.at(chart.position(u));
    lf.coord = chart.jacobian(u);
    Orthonormalization on = orthonormalize(lf.coord, lf.ip());
    lf.tangent = std::move(on.basis);
    lf.coeffs = invert_upper(on.r);
    return lf;
}

Vec PointState::J(const Vec& w) const
{
    return complex_structure(w);
}

Vec PointState::h_of(const Vec& u, const Vec& v) const
{
    if (!second_order)
        throw NumericalError("second fundamental form not computed for this point");
    const InnerProduct g = ip();
    const std::size_t mm = m();
    std::vector<double> cu(mm), cv(mm);
    for (std::size_t a = 0; a < mm; ++a) {
        cu[a] = g(u, local.tangent[a]);
        cv[a] = g(v, local.tangent[a]);
    }
    Vec out(x().size());
    for (std::size_t a = 0; a < mm; ++a)
        for (std::size_t b = 0; b < mm; ++b)
            out += (cu[a] * cv[b]) * h[a][b];
    return out;
}

Vec PointState::shape(const Vec& xi, const Vec& u) const
{
    const InnerProduct g = ip();
    Vec out(x().size());
    for (const Vec& e : local.tangent)
        out += g(h_of(u, e), xi) * e;
    return out;
}

namespace {

// Deterministic completion of the tangent frame: repeatedly take the first canonical
// basis vector whose residual is at least half the largest residual.
std::vector<Vec> complete_normal_frame(const std::vector<Vec>& tangent, const InnerProduct& g,
                                       std::size_t dim)
{
    std::vector<Vec> chosen = tangent;
    std::vector<Vec> normal;
    auto residual = [&](Vec w) {
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : chosen)
                w -= g(w, b) * b;
        return w;
    };
    while (chosen.size() < dim) {
        std::vector<Vec> res(dim);
        std::vector<double> norms(dim);
        double best = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            res[k] = residual(Vec::unit(dim, k));
            norms[k] = g.norm(res[k]);
            best = std::max(best, norms[k]);
        }
        std::size_t pick = dim;
        for (std::size_t k = 0; k < dim && pick == dim; ++k)
            if (norms[k] >= 0.5 * best && norms[k] > 0.0)
                pick = k;
        if (pick == dim)
            throw RankError("normal frame completion failed", chosen.size() + 1);
        Vec nu = residual((1.0 / norms[pick]) * res[pick]);
        nu *= 1.0 / g.norm(nu);
        chosen.push_back(nu);
        normal.push_back(std::move(nu));
    }
    return normal;
}

} // namespace

PointState frame(const Chart& chart, const AmbientSpace& space, const Vec& u)
{
    PointState s;
    s.local = local_frame(chart, space, u);
    const InnerProduct g = s.ip();
    const std::size_t mm = chart.m();
    const std::size_t dim = space.dim();

    s.metric = Mat(mm, mm);
    for (std::size_t i = 0; i < mm; ++i)
        for (std::size_t j = 0; j < mm; ++j)
            s.metric(i, j) = g(s.local.coord[i], s.local.coord[j]);

    s.normal = complete_normal_frame(s.local.tangent, g, dim);
    const std::size_t nc = s.normal.size();
    const auto& e = s.local.tangent;

    s.P = Mat(mm, mm);
    s.F = Mat(nc, mm);
    for (std::size_t a = 0; a < mm; ++a) {
        const Vec je = space.apply_J(e[a]);
        for (std::size_t b = 0; b < mm; ++b)
            s.P(b, a) = g(je, e[b]);
        for (std::size_t al = 0; al < nc; ++al)
            s.F(al, a) = g(je, s.normal[al]);
    }
    s.t = Mat(mm, nc);
    s.f = Mat(nc, nc);
    for (std::size_t al = 0; al < nc; ++al) {
        const Vec jn = space.apply_J(s.normal[al]);
        for (std::size_t a = 0; a < mm; ++a)
            s.t(a, al) = g(jn, e[a]);
        for (std::size_t be = 0; be < nc; ++be)
            s.f(be, al) = g(jn, s.normal[be]);
    }

    const Vec& B = s.local.ambient.lee;
    const Vec A = space.anti_lee(s.local.ambient);
    s.B_T = s.tangential(B);
    s.B_N = B - s.B_T;
    s.A_T = s.tangential(A);
    s.A_N = A - s.A_T;
    return s;
}

PointState second_fundamental(const Chart& chart, const AmbientSpace& space, const Vec& u,
                              const ToleranceProfile& profile)
{
    PointState s = frame(chart, space, u);
    const std::size_t mm = chart.m();
    const std::size_t dim = space.dim();
    const InnerProduct g = s.ip();
    const AmbientPoint& p = s.local.ambient;

    const FieldSampler jac = [&chart, mm, dim](const Vec& v) {
        chart.require_admitted(v);
        const std::vector<Vec> cols = chart.jacobian(v);
        Vec flat(mm * dim);
        for (std::size_t i = 0; i < mm; ++i)
            for (std::size_t c = 0; c < dim; ++c)
                flat[i * dim + c] = cols[i][c];
        return flat;
    };

    // hc[i][j] = normal part of the ambient Levi-Civita derivative of d_j along d_i.
    std::vector<std::vector<Vec>> hc(mm, std::vector<Vec>(mm));
    for (std::size_t i = 0; i < mm; ++i) {
        const Vec d = fd_directional(jac, u, Vec::unit(mm, i), profile);
        for (std::size_t j = 0; j < mm; ++j) {
            Vec dij(dim);
            for (std::size_t c = 0; c < dim; ++c)
                dij[c] = d[j * dim + c];
            dij += space.connection_correction(p, s.local.coord[i], s.local.coord[j]);
            hc[i][j] = s.normal_part(dij);
        }
    }

    const Mat& C = s.local.coeffs;
    s.h.assign(mm, std::vector<Vec>(mm, Vec(dim)));
    for (std::size_t a = 0; a < mm; ++a)
        for (std::size_t b = 0; b < mm; ++b)
            for (std::size_t i = 0; i < mm; ++i)
                for (std::size_t j = 0; j < mm; ++j) {
                    const double w = C(i, a) * C(j, b);
                    if (w != 0.0)
                        s.h[a][b] += w * hc[i][j];
                }

    s.h_coeff.assign(s.codim(), Mat(mm, mm));
    for (std::size_t al = 0; al < s.codim(); ++al)
        for (std::size_t a = 0; a < mm; ++a)
            for (std::size_t b = 0; b < mm; ++b)
                s.h_coeff[al](a, b) = g(s.h[a][b], s.normal[al]);

    s.H = Vec(dim);
    s.gauss_symmetry = 0.0;
    for (std::size_t a = 0; a < mm; ++a) {
        s.H += s.h[a][a];
        for (std::size_t b = a + 1; b < mm; ++b)
            s.gauss_symmetry = std::max(s.gauss_symmetry, g.norm(s.h[a][b] - s.h[b][a]));
    }
    s.second_order = true;
    return s;
}

CheckFragment check_operator_identities(const PointState& s, const ToleranceProfile& profile)
{
    const std::size_t mm = s.m();
    const std::size_t nc = s.codim();
    const Mat r1 = s.P * s.P + s.t * s.F + Mat::identity(mm);
    const Mat r3 = s.F * s.P + s.f * s.F;
    double r2 = 0.0, r4 = 0.0;
    if (nc > 0) {
        r2 = (s.f * s.f + s.F * s.t + Mat::identity(nc)).max_abs();
        r4 = (s.t * s.f + s.P * s.t).max_abs();
    }
    std::vector<Vec> all = s.local.tangent;
    all.insert(all.end(), s.normal.begin(), s.normal.end());
    const double gram = gram_residual(all, s.ip());
    const double skew = (s.P + s.P.transpose()).max_abs();

    CheckFragment out{
        at_most("frame.P2_plus_tF", r1.max_abs(), profile.tol_first),
        at_most("frame.f2_plus_Ft", r2, profile.tol_first),
        at_most("frame.FP_plus_fF", nc > 0 ? r3.max_abs() : 0.0, profile.tol_first),
        at_most("frame.tf_plus_Pt", r4, profile.tol_first),
        at_most("frame.orthonormality", gram, profile.tol_first),
        at_most("frame.P_skew", skew, profile.tol_first),
    };
    if (s.second_order)
        out.push_back(at_most("frame.gauss_symmetry", s.gauss_symmetry, profile.tol_second));
    return out;
}

FieldSampler FieldCalculus::tangent_field(const Vec& coeffs) const
{
    const Chart* chart = chart_;
    return [chart, coeffs](const Vec& v) {
        chart->require_admitted(v);
        const std::vector<Vec> cols = chart->jacobian(v);
        Vec out(chart->ambient_dim());
        for (std::size_t i = 0; i < cols.size(); ++i)
            out += coeffs[i] * cols[i];
        return out;
    };
}

FieldSampler FieldCalculus::normal_field(const Vec& c) const
{
    const Chart* chart = chart_;
    const AmbientSpace* space = space_;
    return [chart, space, c](const Vec& v) { return local_frame(*chart, *space, v).normal_part(c); };
}

FieldSampler FieldCalculus::J_of(FieldSampler field) const
{
    return [field = std::move(field)](const Vec& v) { return complex_structure(field(v)); };
}

FieldSampler FieldCalculus::tangential_of(FieldSampler field) const
{
    const Chart* chart = chart_;
    const AmbientSpace* space = space_;
    return [chart, space, field = std::move(field)](const Vec& v) {
        return local_frame(*chart, *space, v).tangential(field(v));
    };
}

FieldSampler FieldCalculus::normal_of(FieldSampler field) const
{
    const Chart* chart = chart_;
    const AmbientSpace* space = space_;
    return [chart, space, field = std::move(field)](const Vec& v) {
        return local_frame(*chart, *space, v).normal_part(field(v));
    };
}

Vec FieldCalculus::flat_derivative(const FieldSampler& field, const LocalFrame& at,
                                   const Vec& dir) const
{
    return fd_directional(field, at.u, dir, profile_);
}

Vec FieldCalculus::derivative(const FieldSampler& field, const LocalFrame& at, const Vec& dir) const
{
    const Vec d = flat_derivative(field, at, dir);
    return d + space_->connection_correction(at.ambient, at.push_forward(dir), field(at.u));
}

NormalConnection normal_connection(const Chart& chart, const AmbientSpace& space, const Vec& u,
                                   const FieldSampler& xi_field, std::size_t dir,
                                   const ToleranceProfile& profile)
{
    if (dir >= chart.m())
        throw NumericalError("normal_connection: direction index out of range");
    const PointState s = second_fundamental(chart, space, u, profile);
    const FieldCalculus calc(chart, space, profile);

    const FieldSampler checked = [&chart, &space, &xi_field](const Vec& v) {
        const Vec xi = xi_field(v);
        const LocalFrame lf = local_frame(chart, space, v);
        const InnerProduct g = lf.ip();
        if (g.norm(lf.tangential(xi)) > 1e-6 * std::max(1.0, g.norm(xi)))
            throw NumericalError("xi_field is not normal at " + to_string(v));
        return xi;
    };
    const Vec xi = checked(u);
    const Vec full = calc.derivative(checked, s.local, Vec::unit(chart.m(), dir));
    NormalConnection out;
    out.weingarten = s.tangential(full);
    out.value = full - out.weingarten;
    out.shape_mismatch = s.ip().norm(out.weingarten + s.shape(xi, s.local.coord[dir]));
    return out;
}

CheckFragment check_weyl_relations(const Chart& chart, const AmbientSpace& space, const Vec& u,
                                   const ToleranceProfile& profile, const WeylOptions& options)
{
    const PointState s = second_fundamental(chart, space, u, profile);
    const FieldCalculus calc(chart, space, profile);
    const InnerProduct g = s.ip();
    const AmbientPoint& p = s.local.ambient;
    const std::size_t mm = s.m();

    double r_h = 0.0, r_conn = 0.0, r_shape = 0.0, r_perp = 0.0;
    for (std::size_t a = 0; a < mm; ++a) {
        const Vec ca = s.local.coeffs.column(a);
        const Vec& U = s.local.tangent[a];
        for (std::size_t b = 0; b < mm; ++b) {
            const Vec& V = s.local.tangent[b];
            const FieldSampler vf = calc.tangent_field(s.local.coeffs.column(b));
            const Vec flat = calc.flat_derivative(vf, s.local, ca);
            const Vec full = flat + space.connection_correction(p, U, V);
            const Vec nabla = s.tangential(full);
            const Vec h = full - nabla;
            const Vec weyl_nabla = s.tangential(flat);
            const Vec weyl_h = flat - weyl_nabla;

            Vec expect_conn = p.omega_of(U) * V;
            expect_conn += p.omega_of(V) * U;
            expect_conn -= g(U, V) * s.B_T;
            expect_conn *= 0.5;
            r_conn = std::max(r_conn, g.norm(weyl_nabla - (nabla - expect_conn)));

            Vec expect_h = h;
            if (!options.drop_normal_lee_term)
                expect_h += (0.5 * g(U, V)) * s.B_N;
            r_h = std::max(r_h, g.norm(weyl_h - expect_h));
        }
        for (const Vec& nu : s.normal) {
            const FieldSampler xf = calc.normal_field(nu);
            const Vec flat = calc.flat_derivative(xf, s.local, ca);
            const Vec full = flat + space.connection_correction(p, U, nu);
            const Vec shape = -s.tangential(full);
            const Vec perp = full + shape;
            const Vec weyl_shape = -s.tangential(flat);
            const Vec weyl_perp = flat + weyl_shape;
            r_shape = std::max(r_shape, g.norm(weyl_shape - (shape + (0.5 * p.omega_of(nu)) * U)));
            r_perp = std::max(r_perp, g.norm(weyl_perp - (perp - (0.5 * p.omega_of(U)) * nu)));
        }
    }
    return {
        at_most("weyl.second_fundamental", r_h, profile.tol_second),
        at_most("weyl.induced_connection", r_conn, profile.tol_second),
        at_most("weyl.shape_operator", r_shape, profile.tol_second),
        at_most("weyl.normal_connection", r_perp, profile.tol_second),
    };
}

CheckFragment check_PFtf_derivatives(const Chart& chart, const AmbientSpace& space, const Vec& u,
                                     const ToleranceProfile& profile)
{
    const PointState s = second_fundamental(chart, space, u, profile);
    const FieldCalculus calc(chart, space, profile);
    const InnerProduct g = s.ip();
    const AmbientPoint& p = s.local.ambient;
    const std::size_t mm = s.m();

    double r_P = 0.0, r_F = 0.0, r_t = 0.0, r_f = 0.0;
    for (std::size_t a = 0; a < mm; ++a) {
        const Vec ca = s.local.coeffs.column(a);
        const Vec& U = s.local.tangent[a];
        const Vec PU = s.P_of(U);
        const Vec FU = s.F_of(U);
        for (std::size_t b = 0; b < mm; ++b) {
            const Vec& V = s.local.tangent[b];
            const FieldSampler vf = calc.tangent_field(s.local.coeffs.column(b));
            const Vec nabla_UV = s.tangential(calc.derivative(vf, s.local, ca));
            const Vec PV = s.P_of(V);
            const Vec FV = s.F_of(V);
            const Vec hUV = s.h_of(U, V);

            const Vec d_PV = calc.derivative(calc.tangential_of(calc.J_of(vf)), s.local, ca);
            const Vec lhs_P = s.tangential(d_PV) - s.P_of(nabla_UV);
            Vec rhs_P = space.anti_lee_form(p, V) * U;
            rhs_P -= p.omega_of(V) * PU;
            rhs_P += g(PU, V) * s.B_T;
            rhs_P -= g(U, V) * s.A_T;
            rhs_P *= 0.5;
            rhs_P += s.shape(FV, U) + s.t_of(hUV);
            r_P = std::max(r_P, g.norm(lhs_P - rhs_P));

            const Vec d_FV = calc.derivative(calc.normal_of(calc.J_of(vf)), s.local, ca);
            const Vec lhs_F = s.normal_part(d_FV) - s.F_of(nabla_UV);
            Vec rhs_F = g(PU, V) * s.B_N;
            rhs_F -= g(U, V) * s.A_N;
            rhs_F -= p.omega_of(V) * FU;
            rhs_F *= 0.5;
            rhs_F += s.f_of(hUV) - s.h_of(U, PV);
            r_F = std::max(r_F, g.norm(lhs_F - rhs_F));
        }
        for (const Vec& nu : s.normal) {
            const FieldSampler xf = calc.normal_field(nu);
            const Vec perp = s.normal_part(calc.derivative(xf, s.local, ca));
            const Vec shape = s.shape(nu, U);

            const Vec d_t = calc.derivative(calc.tangential_of(calc.J_of(xf)), s.local, ca);
            const Vec lhs_t = s.tangential(d_t) - s.t_of(perp);
            Vec rhs_t = g(FU, nu) * s.B_T;
            rhs_t -= p.omega_of(nu) * PU;
            rhs_t += space.anti_lee_form(p, nu) * U;
            rhs_t *= 0.5;
            rhs_t += s.shape(s.f_of(nu), U) - s.P_of(shape);
            r_t = std::max(r_t, g.norm(lhs_t - rhs_t));

            const Vec d_f = calc.derivative(calc.normal_of(calc.J_of(xf)), s.local, ca);
            const Vec lhs_f = s.normal_part(d_f) - s.f_of(perp);
            Vec rhs_f = g(FU, nu) * s.B_N;
            rhs_f -= p.omega_of(nu) * FU;
            rhs_f *= 0.5;
            rhs_f += -s.h_of(U, s.t_of(nu)) - s.F_of(shape);
            r_f = std::max(r_f, g.norm(lhs_f - rhs_f));
        }
    }
    return {
        at_most("immersion.nabla_P", r_P, profile.tol_second),
        at_most("immersion.nabla_F", r_F, profile.tol_second),
        at_most("immersion.nabla_t", r_t, profile.tol_second),
        at_most("immersion.nabla_f", r_f, profile.tol_second),
    };
}

} // namespace bislant
