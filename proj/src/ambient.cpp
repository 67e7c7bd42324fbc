#include "bislant/ambient.hpp"

#include "bislant/error.hpp"

#include <algorithm>
#include <cmath>

namespace bislant {

std::vector<std::string> ambient_variables(std::size_t n)
{
    std::vector<std::string> names;
    names.reserve(2 * n);
    for (std::size_t k = 1; k <= 2 * n; ++k)
        names.push_back("x" + std::to_string(k));
    return names;
}

Vec complex_structure(const Vec& v)
{
    if (v.size() % 2 != 0)
        throw NumericalError("complex_structure: odd length " + std::to_string(v.size()));
    const std::size_t n = v.size() / 2;
    Vec out(v.size());
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = -v[k + n];
        out[k + n] = v[k];
    }
    return out;
}

AmbientSpace::AmbientSpace(std::size_t n, Expression sigma, double lee_sign)
    : n_(n), sigma_(std::move(sigma)), lee_sign_(lee_sign)
{
    if (n == 0)
        throw NumericalError("ambient complex dimension must be positive");
    if (sigma_.variables() != ambient_variables(n))
        throw NumericalError("sigma must be an expression over x1..x" + std::to_string(2 * n));
    if (lee_sign != 1.0 && lee_sign != -1.0)
        throw NumericalError("lee_sign must be +1 or -1");
}

AmbientSpace AmbientSpace::kahler(std::size_t n)
{
    return AmbientSpace(n, Expression::constant(0.0, ambient_variables(n)));
}

Vec AmbientSpace::apply_J(const Vec& v) const
{
    if (v.size() != 2 * n_)
        throw NumericalError("apply_J: expected length " + std::to_string(2 * n_) + ", got " +
                             std::to_string(v.size()));
    return complex_structure(v);
}

AmbientPoint AmbientSpace::at(const Vec& x) const
{
    if (x.size() != 2 * n_)
        throw NumericalError("ambient point has wrong length");
    AmbientPoint p;
    p.x = x;
    p.sigma = sigma_.eval(x.span());
    p.scale = std::exp(p.sigma);
    if (!std::isfinite(p.scale) || p.scale <= 0.0)
        throw DomainError("conformal factor exp(sigma) not finite at " + to_string(x));
    p.omega = Vec(sigma_.gradient(x.span()));
    p.omega *= lee_sign_;
    p.lee = p.omega * (1.0 / p.scale);
    return p;
}

InnerProduct AmbientSpace::metric(const Vec& x) const
{
    return at(x).metric();
}

double AmbientSpace::fundamental_form(const AmbientPoint& p, const Vec& u, const Vec& v) const
{
    // Written so that swapping u and v negates every term exactly.
    double s = 0.0;
    for (std::size_t k = 0; k < n_; ++k)
        s += u[k] * v[k + n_] - u[k + n_] * v[k];
    return p.scale * s;
}

double AmbientSpace::anti_lee_form(const AmbientPoint& p, const Vec& v) const
{
    return p.omega_of(apply_J(v));
}

Vec AmbientSpace::anti_lee(const AmbientPoint& p) const
{
    return -apply_J(p.lee);
}

Vec AmbientSpace::connection_correction(const AmbientPoint& p, const Vec& u, const Vec& v) const
{
    const double guv = p.scale * dot(u, v);
    Vec out = p.omega_of(u) * v;
    out += p.omega_of(v) * u;
    out -= guv * p.lee;
    out *= 0.5;
    return out;
}

Vec apply_J(const AmbientSpace& space, const Vec& v)
{
    return space.apply_J(v);
}

InnerProduct metric(const AmbientSpace& space, const Vec& x)
{
    return space.metric(x);
}

LeeData lee_data(const AmbientSpace& space, const Vec& x)
{
    AmbientPoint p = space.at(x);
    return {std::move(p.omega), std::move(p.lee)};
}

Vec weyl_derivative(const AmbientSpace& space, const FieldSampler& field, const Vec& x,
                    const Vec& u, const ToleranceProfile& profile)
{
    if (u.size() != space.dim() || x.size() != space.dim())
        throw NumericalError("weyl_derivative: dimension mismatch");
    return fd_directional(field, x, u, profile);
}

Vec levi_civita(const AmbientSpace& space, const FieldSampler& field, const Vec& x, const Vec& u,
                const ToleranceProfile& profile)
{
    const AmbientPoint p = space.at(x);
    Vec d = weyl_derivative(space, field, x, u, profile);
    return d + space.connection_correction(p, u, field(x));
}

namespace {

// Omega coefficients Omega_jk = e^sigma <J e_j, e_k>, flattened row-major.
Vec omega_coefficients(const AmbientSpace& space, const Vec& x)
{
    const std::size_t d = space.dim();
    const AmbientPoint p = space.at(x);
    Vec out(d * d);
    for (std::size_t j = 0; j < d; ++j) {
        const Vec je = space.apply_J(Vec::unit(d, j));
        for (std::size_t k = 0; k < d; ++k)
            out[j * d + k] = p.scale * je[k];
    }
    return out;
}

} // namespace

CheckFragment check_structure(const AmbientSpace& space, const Vec& x,
                              const ToleranceProfile& profile, const StructureOptions& options)
{
    const std::size_t d = space.dim();
    const AmbientPoint p = space.at(x);
    const InnerProduct g = p.metric();

    // (a) dOmega(i,j,k) = d_i Omega_jk - d_j Omega_ik + d_k Omega_ij against Omega ^ omega.
    std::vector<Vec> d_omega2(d);
    const FieldSampler omega2 = [&space](const Vec& y) { return omega_coefficients(space, y); };
    for (std::size_t i = 0; i < d; ++i)
        d_omega2[i] = fd_directional(omega2, x, Vec::unit(d, i), profile);
    const Vec o2 = omega_coefficients(space, x);
    auto O = [&](std::size_t a, std::size_t b) { return o2[a * d + b]; };
    auto dO = [&](std::size_t i, std::size_t a, std::size_t b) { return d_omega2[i][a * d + b]; };

    double res_a = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            for (std::size_t k = j + 1; k < d; ++k) {
                const double lhs = dO(i, j, k) - dO(j, i, k) + dO(k, i, j);
                const double rhs =
                    O(i, j) * p.omega[k] - O(i, k) * p.omega[j] + O(j, k) * p.omega[i];
                res_a = std::max(res_a, std::abs(lhs - rhs));
            }

    // (b) nabla-J formula on coordinate fields.
    const Vec A = options.anti_lee_sign * space.apply_J(p.lee);
    double res_b = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const Vec U = Vec::unit(d, i);
        for (std::size_t j = 0; j < d; ++j) {
            const Vec V = Vec::unit(d, j);
            const Vec JV = space.apply_J(V);
            const FieldSampler jv_field = [JV](const Vec&) { return JV; };
            const FieldSampler v_field = [V](const Vec&) { return V; };
            const Vec lhs = levi_civita(space, jv_field, x, U, profile) -
                            space.apply_J(levi_civita(space, v_field, x, U, profile));
            Vec rhs = space.anti_lee_form(p, V) * U;
            rhs -= p.omega_of(V) * space.apply_J(U);
            rhs -= g(U, V) * A;
            rhs += space.fundamental_form(p, U, V) * p.lee;
            rhs *= 0.5;
            res_b = std::max(res_b, g.norm(lhs - rhs));
        }
    }

    // (c) (nabla_i omega)_j = d_i omega_j - omega(nabla_{e_i} e_j) must be symmetric.
    const FieldSampler omega_field = [&space](const Vec& y) { return space.at(y).omega; };
    std::vector<Vec> d_omega(d);
    for (std::size_t i = 0; i < d; ++i)
        d_omega[i] = fd_directional(omega_field, x, Vec::unit(d, i), profile);
    double res_c = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const Vec ei = Vec::unit(d, i);
            const Vec ej = Vec::unit(d, j);
            const double nij = d_omega[i][j] - p.omega_of(space.connection_correction(p, ei, ej));
            const double nji = d_omega[j][i] - p.omega_of(space.connection_correction(p, ej, ei));
            res_c = std::max(res_c, std::abs(nij - nji));
        }

    return {
        at_most("ambient.d_fundamental_form", res_a, profile.tol_second),
        at_most("ambient.nabla_J", res_b, profile.tol_second),
        at_most("ambient.nabla_lee_symmetry", res_c, profile.tol_second),
    };
}

} // namespace bislant
