#include "bislant/warped.hpp"

#include "bislant/error.hpp"

#include <algorithm>
#include <cmath>

namespace bislant {

double WarpDeclaration::value(const Vec& u) const
{
    return lambda.eval(u.span());
}

Vec WarpDeclaration::log_gradient(const Vec& u) const
{
    const double l = value(u);
    Vec g(lambda.gradient(u.span()));
    g *= 1.0 / l;
    return g;
}

namespace {

void require_positive(const WarpDeclaration& warp, const Vec& u)
{
    const double l = warp.value(u);
    if (!(l > 0.0))
        throw NumericalError("invalid warp declaration: lambda = " + std::to_string(l) + " at " +
                             to_string(u));
}

Mat block(const Mat& g, const std::vector<std::size_t>& idx)
{
    Mat out(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b)
            out(a, b) = g(idx[a], idx[b]);
    return out;
}

Mat induced_metric(const Chart& chart, const AmbientSpace& space, const Vec& u)
{
    const LocalFrame lf = local_frame(chart, space, u);
    const InnerProduct g = lf.ip();
    Mat out(chart.m(), chart.m());
    for (std::size_t i = 0; i < chart.m(); ++i)
        for (std::size_t j = 0; j < chart.m(); ++j)
            out(i, j) = g(lf.coord[i], lf.coord[j]);
    return out;
}

// Solves G x = b for small symmetric positive-definite G (Gaussian elimination, partial pivoting).
Vec solve(Mat G, Vec b)
{
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(G(i, k)) > std::abs(G(piv, k)))
                piv = i;
        if (G(piv, k) == 0.0)
            throw NumericalError("singular induced metric");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(G(k, j), G(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = G(i, k) / G(k, k);
            for (std::size_t j = k; j < n; ++j)
                G(i, j) -= f * G(k, j);
            b[i] -= f * b[k];
        }
    }
    Vec x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j)
            s -= G(k, j) * x[j];
        x[k] = s / G(k, k);
    }
    return x;
}

} // namespace

CheckFragment validate_warp(const Chart& chart, const AmbientSpace& space,
                            const DistributionSplit& split, const WarpDeclaration& warp,
                            const Vec& u, const ToleranceProfile& profile)
{
    require_positive(warp, u);
    const std::vector<double> grad = warp.lambda.gradient(u.span());
    double fiber_dependence = 0.0;
    for (auto j : split.I2)
        fiber_dependence = std::max(fiber_dependence, std::abs(grad[j]));

    const Mat G = induced_metric(chart, space, u);
    double off = 0.0;
    for (auto i : split.I1)
        for (auto j : split.I2)
            off = std::max(off, std::abs(G(i, j)) / std::sqrt(G(i, i) * G(j, j)));

    // Fiber block divided by lambda^2 must not change when only base parameters move.
    const double l0 = warp.value(u);
    const Mat ratio0 = (1.0 / (l0 * l0)) * block(G, split.I2);
    double separability = 0.0;
    for (auto i : split.I1)
        for (double shift : {-0.05, 0.05}) {
            Vec v = u;
            v[i] += shift;
            if (!chart.admitted(v))
                continue;
            const double l = warp.value(v);
            if (!(l > 0.0))
                continue;
            const Mat ratio = (1.0 / (l * l)) * block(induced_metric(chart, space, v), split.I2);
            separability = std::max(separability, (ratio - ratio0).frobenius() / ratio0.frobenius());
        }

    return {
        at_most("warp.base_only", fiber_dependence, profile.tol_first),
        at_most("warp.block_diagonal", off, profile.tol_first),
        at_most("warp.fiber_separability", separability, profile.tol_first),
    };
}

CheckFragment check_lemma_identities(const Chart& chart, const AmbientSpace& space,
                                     const DistributionSplit& split, const WarpDeclaration& warp,
                                     const Vec& u, const ToleranceProfile& profile)
{
    require_positive(warp, u);
    const PointState s = second_fundamental(chart, space, u, profile);
    const InnerProduct g = s.ip();
    const Vec& B = s.local.ambient.lee;
    const SplitBasis sb = split_basis(s, split);
    const Vec dlog = warp.log_gradient(u);

    double r[6] = {0, 0, 0, 0, 0, 0};
    for (std::size_t a = 0; a < sb.d1.size(); ++a) {
        const Vec& X = sb.d1[a];
        const Vec FX = s.F_of(X);
        r[4] = std::max(r[4], std::abs(dot(dlog, sb.c1[a]) - 0.5 * g(B, X)));
        for (const Vec& Y : sb.d1) {
            const Vec FY = s.F_of(Y);
            for (const Vec& Z : sb.d2) {
                const Vec FZ = s.F_of(Z);
                const Vec hXZ = s.h_of(X, Z);
                r[0] = std::max(r[0], std::abs(g(hXZ, FY) - g(s.h_of(Y, Z), FX)));
                r[2] = std::max(r[2], std::abs(g(s.h_of(X, Y), FZ) -
                                               (g(hXZ, FY) - 0.5 * g(X, Y) * g(B, FZ))));
            }
        }
        for (const Vec& Z : sb.d2) {
            const Vec FZ = s.F_of(Z);
            const Vec hXZ = s.h_of(X, Z);
            for (const Vec& W : sb.d2) {
                const Vec FW = s.F_of(W);
                r[1] = std::max(r[1], std::abs(g(hXZ, FW) - g(s.h_of(X, W), FZ)));
                r[3] = std::max(r[3], std::abs(g(s.h_of(Z, W), FX) -
                                               (g(hXZ, FW) - 0.5 * g(Z, W) * g(B, FX))));
            }
        }
    }
    for (const Vec& Z : sb.d2)
        r[5] = std::max(r[5], std::abs(g(B, Z)));

    return {
        at_most("lemma.1", r[0], profile.tol_second),
        at_most("lemma.2", r[1], profile.tol_second),
        at_most("lemma.3", r[2], profile.tol_second),
        at_most("lemma.4", r[3], profile.tol_second),
        at_most("lemma.5", r[4], profile.tol_first),
        at_most("lemma.6", r[5], profile.tol_first),
    };
}

Characterization check_characterization(const Chart& chart, const AmbientSpace& space,
                                        const DistributionSplit& split,
                                        const WarpDeclaration& warp, const Vec& u,
                                        const ToleranceProfile& profile)
{
    require_positive(warp, u);
    const PointState s = second_fundamental(chart, space, u, profile);
    const FieldCalculus calc(chart, space, profile);
    const InnerProduct g = s.ip();
    const AmbientPoint& p = s.local.ambient;
    const SplitBasis sb = split_basis(s, split);
    const Vec dlog = warp.log_gradient(u);
    const double sin2_2 = 1.0 - slant_angle(s, split.I2, profile).cos2_theta;

    double omega_z = 0.0;
    for (const Vec& Z : sb.d2)
        omega_z = std::max(omega_z, std::abs(p.omega_of(Z)));

    double d1_display = 0.0;
    for (std::size_t a = 0; a < sb.d1.size(); ++a)
        for (std::size_t c = 0; c < sb.d1.size(); ++c)
            for (const Vec& Z : sb.d2)
                d1_display =
                    std::max(d1_display, std::abs(condition_display(calc, s, sb.c1[a], sb.c1[c], Z)));

    double d2_umbilic = 0.0;
    for (std::size_t a = 0; a < sb.d2.size(); ++a)
        for (std::size_t c = 0; c < sb.d2.size(); ++c)
            for (std::size_t b = 0; b < sb.d1.size(); ++b) {
                const Vec& X = sb.d1[b];
                const double x_log = dot(dlog, sb.c1[b]);
                const double model =
                    sin2_2 * (0.5 * p.omega_of(X) - x_log) * g(sb.d2[a], sb.d2[c]);
                d2_umbilic = std::max(
                    d2_umbilic,
                    std::abs(condition_display(calc, s, sb.c2[a], sb.c2[c], X) - model));
            }

    double nabla_xz = 0.0, nabla_zx = 0.0;
    for (std::size_t b = 0; b < sb.d1.size(); ++b) {
        const Vec& X = sb.d1[b];
        const double half = 0.5 * p.omega_of(X);
        for (std::size_t a = 0; a < sb.d2.size(); ++a) {
            const Vec& Z = sb.d2[a];
            const Vec xz = s.tangential(calc.derivative(calc.tangent_field(sb.c2[a]), s.local, sb.c1[b]));
            const Vec zx = s.tangential(calc.derivative(calc.tangent_field(sb.c1[b]), s.local, sb.c2[a]));
            nabla_xz = std::max(nabla_xz, g.norm(xz - half * Z));
            nabla_zx = std::max(nabla_zx, g.norm(zx - half * Z));
        }
    }

    Characterization out;
    const std::size_t dim = s.x().size();
    out.grad_log_lambda = Vec(dim);
    for (std::size_t a = 0; a < s.m(); ++a)
        out.grad_log_lambda += dot(dlog, s.local.coeffs.column(a)) * s.local.tangent[a];
    out.grad_log_lambda_coord = s.local.push_forward(solve(s.metric, dlog));
    const double grad_res = g.norm(out.grad_log_lambda - 0.5 * s.B_T);
    const double frame_agreement = g.norm(out.grad_log_lambda - out.grad_log_lambda_coord);

    const DistributionConditions d2 = check_d2_conditions(chart, space, split, u, profile);
    out.mean_curvature = d2.mean_curvature;
    const double mean_res = g.norm(out.mean_curvature + 0.5 * s.B_T);

    out.checks = {
        at_most("char.omega_on_d2", omega_z, profile.tol_first),
        at_most("char.d1_display", d1_display, profile.tol_second),
        at_most("char.d2_umbilic_display", d2_umbilic, profile.tol_second),
        at_most("char.nabla_XZ", nabla_xz, profile.tol_second),
        at_most("char.nabla_ZX", nabla_zx, profile.tol_second),
        at_most("char.grad_log_lambda", grad_res, profile.tol_first),
        at_most("char.grad_frame_agreement", frame_agreement, profile.tol_first),
        at_most("char.mean_curvature", mean_res, profile.tol_second),
    };
    return out;
}

namespace {

SlantRecord gated_slant(const PointState& s, const std::vector<std::size_t>& idx,
                        const ToleranceProfile& profile, const char* which)
{
    const SlantRecord rec = slant_angle(s, idx, profile);
    const double c = std::cos(rec.theta);
    const double sn = std::sin(rec.theta);
    if (std::abs(c) < 1e-3 || std::abs(sn) < 1e-3)
        throw DegeneracyError(std::string("slant angle ") + which + " = " +
                              std::to_string(rec.theta) + " too close to 0 or pi/2");
    return rec;
}

// Gram-Schmidt that drops vectors lying (numerically) in the span already built.
void extend_basis(std::vector<Vec>& basis, const Vec& v, const InnerProduct& g,
                  std::vector<Vec>* added = nullptr)
{
    Vec w = v;
    for (int pass = 0; pass < 2; ++pass)
        for (const Vec& b : basis)
            w -= g(w, b) * b;
    const double n = g.norm(w);
    if (n <= 1e-9 * std::max(1.0, g.norm(v)))
        return;
    w *= 1.0 / n;
    basis.push_back(w);
    if (added)
        added->push_back(w);
}

// X^, P^X pairs spanning an orthonormal basis of a slant distribution.
void darboux_pairs(const PointState& s, const std::vector<Vec>& basis, double theta,
                   std::vector<Vec>& hat, std::vector<Vec>& p_hat)
{
    const InnerProduct g = s.ip();
    const double sec = 1.0 / std::cos(theta);
    std::vector<Vec> chosen;
    for (const Vec& cand : basis) {
        if (chosen.size() == basis.size())
            break;
        Vec w = cand;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : chosen)
                w -= g(w, b) * b;
        const double n = g.norm(w);
        if (n <= 1e-8)
            continue;
        w *= 1.0 / n;
        const Vec pw = sec * s.P_of(w);
        hat.push_back(w);
        p_hat.push_back(pw);
        chosen.push_back(w);
        chosen.push_back((1.0 / g.norm(pw)) * pw);
    }
    if (chosen.size() != basis.size())
        throw NumericalError("could not build P-adapted pairs for a slant distribution");
}

} // namespace

AdaptedFrame adapted_frame(const PointState& s, const DistributionSplit& split,
                           const ToleranceProfile& profile)
{
    const SlantRecord r1 = gated_slant(s, split.I1, profile, "theta1");
    const SlantRecord r2 = gated_slant(s, split.I2, profile, "theta2");
    if (r1.eig_spread > profile.tol_eig || r2.eig_spread > profile.tol_eig)
        throw NumericalError("adapted frame needs pointwise slant distributions");
    const InnerProduct g = s.ip();
    const SplitBasis sb = split_basis(s, split);

    AdaptedFrame out;
    out.theta1 = r1.theta;
    out.theta2 = r2.theta;

    std::vector<Vec> x, px, z, pz;
    darboux_pairs(s, sb.d1, r1.theta, x, px);
    darboux_pairs(s, sb.d2, r2.theta, z, pz);

    const double csc1 = 1.0 / std::sin(r1.theta), sec1 = 1.0 / std::cos(r1.theta);
    const double csc2 = 1.0 / std::sin(r2.theta), sec2 = 1.0 / std::cos(r2.theta);
    std::vector<Vec> fx, fpx, fz, fpz;
    for (const Vec& v : x) {
        fx.push_back(csc1 * s.F_of(v));
        fpx.push_back((csc1 * sec1) * s.F_of(s.P_of(v)));
    }
    for (const Vec& v : z) {
        fz.push_back(csc2 * s.F_of(v));
        fpz.push_back((csc2 * sec2) * s.F_of(s.P_of(v)));
    }

    auto add = [&out](const std::string& name, const std::vector<Vec>& vs) {
        for (std::size_t i = 0; i < vs.size(); ++i)
            out.vectors.push_back({name + std::to_string(i + 1), vs[i]});
    };
    add("X", x);
    add("PX", px);
    add("Z", z);
    add("PZ", pz);
    add("FX", fx);
    add("FPX", fpx);
    add("FZ", fz);
    add("FPZ", fpz);

    // mu: complement of FD1 + FD2 in the normal space, completed by J-pairs.
    std::vector<Vec> span;
    for (const auto& lv : out.vectors)
        extend_basis(span, lv.v, g);
    std::vector<Vec> xi, jxi;
    const std::size_t dim = s.x().size();
    for (const Vec& nu : s.normal) {
        if (span.size() >= dim)
            break;
        std::vector<Vec> added;
        extend_basis(span, nu, g, &added);
        if (added.empty())
            continue;
        const Vec j = s.J(added.front());
        xi.push_back(added.front());
        jxi.push_back(j);
        extend_basis(span, j, g);
    }
    add("xi", xi);
    add("Jxi", jxi);

    std::vector<Vec> all;
    for (const auto& lv : out.vectors)
        all.push_back(lv.v);
    if (all.size() != dim)
        throw NumericalError("adapted frame has " + std::to_string(all.size()) + " vectors, expected " +
                             std::to_string(dim));
    out.gram_residual = gram_residual(all, g);

    const double c1 = std::cos(r1.theta), s1 = std::sin(r1.theta);
    const double c2 = std::cos(r2.theta), s2 = std::sin(r2.theta);
    for (std::size_t i = 0; i < x.size(); ++i)
        out.j_decomposition =
            std::max(out.j_decomposition, g.norm(s.J(x[i]) - c1 * px[i] - s1 * fx[i]));
    for (std::size_t i = 0; i < z.size(); ++i)
        out.j_decomposition =
            std::max(out.j_decomposition, g.norm(s.J(z[i]) - c2 * pz[i] - s2 * fz[i]));
    return out;
}

ChenRecord chen_inequality(const Chart& chart, const AmbientSpace& space,
                           const DistributionSplit& split, const Vec& u,
                           const ToleranceProfile& profile, const ChenOptions& options)
{
    const PointState s = second_fundamental(chart, space, u, profile);
    const InnerProduct g = s.ip();
    const SlantRecord r1 = options.allow_degenerate_angles ? slant_angle(s, split.I1, profile)
                                                           : gated_slant(s, split.I1, profile, "theta1");
    const SlantRecord r2 = options.allow_degenerate_angles ? slant_angle(s, split.I2, profile)
                                                           : gated_slant(s, split.I2, profile, "theta2");
    const SplitBasis sb = split_basis(s, split);

    std::vector<Vec> fd1, fd2, mu;
    std::vector<Vec> built;
    for (const Vec& v : sb.d1)
        extend_basis(built, s.F_of(v), g, &fd1);
    for (const Vec& v : sb.d2)
        extend_basis(built, s.F_of(v), g, &fd2);
    for (const Vec& nu : s.normal)
        extend_basis(built, nu, g, &mu);

    ChenRecord rec;
    rec.theta1 = r1.theta;
    rec.theta2 = r2.theta;

    std::vector<Vec> frame = sb.d1;
    frame.insert(frame.end(), sb.d2.begin(), sb.d2.end());
    const std::size_t k1 = sb.d1.size();
    const std::array<const std::vector<Vec>*, 3> spaces{&fd1, &fd2, &mu};
    for (std::size_t a = 0; a < frame.size(); ++a)
        for (std::size_t b = 0; b < frame.size(); ++b) {
            const Vec h = s.h_of(frame[a], frame[b]);
            rec.lhs += g(h, h);
            const bool a1 = a < k1, b1 = b < k1;
            const std::size_t pair = (a1 && b1) ? 0 : (!a1 && !b1) ? 2 : 1;
            for (std::size_t c = 0; c < 3; ++c) {
                const Vec part = project(h, *spaces[c], g);
                rec.component_norms[pair][c] += g(part, part);
            }
        }
    for (const auto& row : rec.component_norms)
        for (double v : row)
            rec.block_sum += v;
    for (const auto& row : rec.component_norms)
        rec.mu_norm += row[2];
    rec.mu_norm = std::sqrt(rec.mu_norm);

    Vec H1(s.x().size()), H2(s.x().size());
    for (const Vec& v : sb.d1)
        H1 += s.h_of(v, v);
    for (const Vec& v : sb.d2)
        H2 += s.h_of(v, v);
    const Vec& B = s.local.ambient.lee;
    const Vec B1 = project(B, fd1, g);
    const Vec B2 = project(B, fd2, g);
    const double sin1 = std::sin(r1.theta), sin2 = std::sin(r2.theta);
    const double n1 = static_cast<double>(split.n1()), n2 = static_cast<double>(split.n2());
    rec.terms[0] = 0.5 * n1 * sin2 * sin2 * g(B2, B2);
    rec.terms[1] = 0.5 * n2 * sin1 * sin1 * g(B1, B1);
    rec.terms[2] = sin2 * g(project(H1, fd2, g), B2);
    rec.terms[3] = sin1 * g(project(H2, fd1, g), B1);
    rec.rhs = rec.terms[0] + rec.terms[1] + rec.terms[2] + rec.terms[3];
    rec.slack = rec.lhs - rec.rhs;
    rec.mean_curvature_norm = g.norm(s.H);
    rec.mixed_tg = mixed_tg_check(s, split, profile);
    return rec;
}

EqualityDiagnosis equality_case(const ChenRecord& record, const ToleranceProfile& profile)
{
    EqualityDiagnosis d;
    d.mu_vanishes = record.mu_norm <= profile.tol_second;
    d.minimal = record.mean_curvature_norm <= profile.tol_second;
    d.mixed_totally_geodesic = record.mixed_tg <= profile.tol_second;
    if (record.slack > profile.tol_second) {
        d.status = EqualityStatus::Strict;
        d.text = "strict inequality; equality-case assertions not applicable";
    } else if (record.slack < -profile.tol_second) {
        d.status = EqualityStatus::Violated;
        d.text = "inequality violated: slack " + std::to_string(record.slack);
    } else if (!d.mu_vanishes) {
        d.status = EqualityStatus::Violated;
        d.text = "equality holds but h has a mu-component of norm " + std::to_string(record.mu_norm);
    } else if (d.minimal != d.mixed_totally_geodesic) {
        d.status = EqualityStatus::Violated;
        d.text = std::string("equality holds but minimal=") + (d.minimal ? "yes" : "no") +
                 " while mixed totally geodesic=" + (d.mixed_totally_geodesic ? "yes" : "no");
    } else {
        d.status = EqualityStatus::Consistent;
        d.text = "equality case consistent";
    }
    return d;
}

std::string_view to_string(EqualityStatus status)
{
    switch (status) {
    case EqualityStatus::Strict: return "strict";
    case EqualityStatus::Consistent: return "consistent";
    case EqualityStatus::Violated: return "violated";
    }
    return "unknown";
}

} // namespace bislant
