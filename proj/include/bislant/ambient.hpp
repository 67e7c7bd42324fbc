#pragma once

// Globally conformal Kähler ambient space: R^{2n} with the canonical complex
// structure J(x, y) = (-y, x) and metric g = e^sigma g0, g0 Euclidean.
// The Lee form is omega = d(sigma), its g-dual B = e^{-sigma} grad0(sigma).
// Theta = omega o J and A = -J B (so that g(A, X) = Theta(X)).

#include "bislant/check.hpp"
#include "bislant/expr.hpp"
#include "bislant/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace bislant {

/// Names of the ambient coordinates x1..x_{2n}; slots n+1..2n are the y block.
std::vector<std::string> ambient_variables(std::size_t n);

/// Canonical J on R^{2n}: (x, y) -> (-y, x). The length must be even.
Vec complex_structure(const Vec& v);

/// Pointwise ambient data at x.
struct AmbientPoint {
    Vec x;
    double sigma = 0.0;
    double scale = 1.0;  // e^sigma
    Vec omega;           // Lee form components
    Vec lee;             // Lee vector B

    InnerProduct metric() const { return InnerProduct::conformal(x.size(), scale); }
    double omega_of(const Vec& v) const { return dot(omega, v); }
};

class AmbientSpace {
public:
    /// `lee_sign` multiplies the Lee form; -1 reproduces the omega = +df
    /// convention and is only useful as a negative control.
    AmbientSpace(std::size_t n, Expression sigma, double lee_sign = 1.0);

    static AmbientSpace kahler(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    std::size_t dim() const noexcept { return 2 * n_; }
    const Expression& sigma() const noexcept { return sigma_; }
    double lee_sign() const noexcept { return lee_sign_; }

    Vec apply_J(const Vec& v) const;
    AmbientPoint at(const Vec& x) const;
    InnerProduct metric(const Vec& x) const;

    /// Omega(U, V) = g(JU, V).
    double fundamental_form(const AmbientPoint& p, const Vec& u, const Vec& v) const;
    /// Theta(V) = omega(JV).
    double anti_lee_form(const AmbientPoint& p, const Vec& v) const;
    /// A = -J B.
    Vec anti_lee(const AmbientPoint& p) const;

    /// 1/2 {omega(U)V + omega(V)U - g(U,V)B}: the Levi-Civita minus flat part.
    Vec connection_correction(const AmbientPoint& p, const Vec& u, const Vec& v) const;

private:
    std::size_t n_;
    Expression sigma_;
    double lee_sign_;
};

struct LeeData {
    Vec omega;
    Vec lee;
};

Vec apply_J(const AmbientSpace& space, const Vec& v);
InnerProduct metric(const AmbientSpace& space, const Vec& x);
LeeData lee_data(const AmbientSpace& space, const Vec& x);

/// Levi-Civita derivative of `field` at x along U: flat derivative plus correction.
Vec levi_civita(const AmbientSpace& space, const FieldSampler& field, const Vec& x, const Vec& u,
                const ToleranceProfile& profile);

/// Weyl derivative, i.e. the flat directional derivative of the Kähler reference.
Vec weyl_derivative(const AmbientSpace& space, const FieldSampler& field, const Vec& x,
                    const Vec& u, const ToleranceProfile& profile);

struct StructureOptions {
    /// A = anti_lee_sign * J B; +1 is a negative control.
    double anti_lee_sign = -1.0;
};

/// Residuals of dOmega = Omega ^ omega, the nabla-J formula and the symmetry of nabla omega,
/// over all coordinate pairs and triples at x.
CheckFragment check_structure(const AmbientSpace& space, const Vec& x,
                              const ToleranceProfile& profile, const StructureOptions& options = {});

} // namespace bislant
