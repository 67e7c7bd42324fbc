#pragma once

// Extrinsic geometry of a parametric immersion u -> x(u) into the ambient space.

#include "bislant/ambient.hpp"
#include "bislant/check.hpp"
#include "bislant/expr.hpp"
#include "bislant/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace bislant {

class Chart {
public:
    /// `components` are expressions over `params`; a point is admitted iff every guard is > 0.
    Chart(std::vector<std::string> params, std::vector<Expression> components,
          std::vector<Expression> guards = {});

    std::size_t m() const noexcept { return params_.size(); }
    std::size_t ambient_dim() const noexcept { return components_.size(); }
    const std::vector<std::string>& params() const noexcept { return params_; }
    const std::vector<Expression>& components() const noexcept { return components_; }
    const std::vector<Expression>& guards() const noexcept { return guards_; }

    /// False when a guard is <= 0 or cannot be evaluated.
    bool admitted(const Vec& u) const;
    /// Throws GuardViolation naming the first failing guard.
    void require_admitted(const Vec& u) const;

    Vec position(const Vec& u) const;
    /// Columns d x / d u_i, exact (dual numbers).
    std::vector<Vec> jacobian(const Vec& u) const;

private:
    std::vector<std::string> params_;
    std::vector<Expression> components_;
    std::vector<Expression> guards_;
};

/// Tangent/normal splitting of the ambient tangent space at x(u).
struct LocalFrame {
    Vec u;
    AmbientPoint ambient;
    std::vector<Vec> coord;    // d x / d u_i
    std::vector<Vec> tangent;  // g-orthonormal, same flag as coord
    Mat coeffs;                // tangent[a] = sum_i coeffs(i, a) coord[i]

    InnerProduct ip() const { return ambient.metric(); }
    Vec tangential(const Vec& w) const;
    Vec normal_part(const Vec& w) const;
    /// sum_i c_i coord[i]
    Vec push_forward(const Vec& c) const;
};

LocalFrame local_frame(const Chart& chart, const AmbientSpace& space, const Vec& u);

struct PointState {
    LocalFrame local;
    Mat metric;                // g_ij in the coordinate frame
    std::vector<Vec> normal;   // g-orthonormal normal frame
    Mat P;                     // P(b, a) = g(J e_a, e_b)
    Mat F;                     // F(alpha, a) = g(J e_a, nu_alpha)
    Mat t;                     // t(a, alpha) = g(J nu_alpha, e_a)
    Mat f;                     // f(beta, alpha) = g(J nu_alpha, nu_beta)
    Vec B_T, B_N, A_T, A_N;

    // Filled by second_fundamental.
    bool second_order = false;
    std::vector<std::vector<Vec>> h;  // h[a][b] = h(e_a, e_b) as an ambient vector
    std::vector<Mat> h_coeff;         // h_coeff[alpha](a, b) = g(h(e_a, e_b), nu_alpha)
    Vec H;                            // trace of h
    double gauss_symmetry = 0.0;      // max ||h(e_a,e_b) - h(e_b,e_a)||

    std::size_t m() const noexcept { return local.tangent.size(); }
    std::size_t codim() const noexcept { return normal.size(); }
    const Vec& x() const noexcept { return local.ambient.x; }
    InnerProduct ip() const { return local.ip(); }

    Vec tangential(const Vec& w) const { return local.tangential(w); }
    Vec normal_part(const Vec& w) const { return local.normal_part(w); }

    // Operators on ambient vectors (inputs assumed tangent or normal as appropriate).
    Vec J(const Vec& w) const;
    Vec P_of(const Vec& tangent) const { return tangential(J(tangent)); }
    Vec F_of(const Vec& tangent) const { return normal_part(J(tangent)); }
    Vec t_of(const Vec& normal) const { return tangential(J(normal)); }
    Vec f_of(const Vec& normal) const { return normal_part(J(normal)); }

    /// Requires second_order.
    Vec h_of(const Vec& u, const Vec& v) const;
    /// Shape operator: g(shape(xi, U), V) = g(h(U, V), xi).
    Vec shape(const Vec& xi, const Vec& u) const;
};

/// Frames, induced metric and P/F/t/f. Throws GuardViolation or RankError.
PointState frame(const Chart& chart, const AmbientSpace& space, const Vec& u);

/// frame() plus h, H and shape operators; second derivatives by differencing the exact Jacobian.
PointState second_fundamental(const Chart& chart, const AmbientSpace& space, const Vec& u,
                              const ToleranceProfile& profile);

/// Residuals of the four block identities of J^2 = -I, frame orthonormality and skewness of P.
CheckFragment check_operator_identities(const PointState& state, const ToleranceProfile& profile);

/// Builds samplers over parameter space and differentiates them along the submanifold.
/// Tangent fields are extended with constant coefficients in the coordinate frame.
class FieldCalculus {
public:
    FieldCalculus(const Chart& chart, const AmbientSpace& space, const ToleranceProfile& profile)
        : chart_(&chart), space_(&space), profile_(profile) {}

    LocalFrame local(const Vec& u) const { return local_frame(*chart_, *space_, u); }

    /// u' -> sum_i c_i d x / d u_i (u')
    FieldSampler tangent_field(const Vec& coeffs) const;
    /// u' -> normal part of the constant vector c at x(u')
    FieldSampler normal_field(const Vec& c) const;
    FieldSampler J_of(FieldSampler field) const;
    FieldSampler tangential_of(FieldSampler field) const;
    FieldSampler normal_of(FieldSampler field) const;

    /// Flat (Weyl) derivative of an ambient-valued field along sum_i dir_i d_i at `at`.
    Vec flat_derivative(const FieldSampler& field, const LocalFrame& at, const Vec& dir) const;
    /// Levi-Civita derivative of g along the same direction.
    Vec derivative(const FieldSampler& field, const LocalFrame& at, const Vec& dir) const;

    const ToleranceProfile& profile() const noexcept { return profile_; }
    const AmbientSpace& space() const noexcept { return *space_; }
    const Chart& chart() const noexcept { return *chart_; }

private:
    const Chart* chart_;
    const AmbientSpace* space_;
    ToleranceProfile profile_;
};

struct NormalConnection {
    Vec value;              // normal connection of xi along d_i
    Vec weingarten;         // tangential part of the ambient derivative
    double shape_mismatch;  // || weingarten + shape(xi, d_i) ||
};

/// `xi_field` must be normal at every stencil point (within 1e-6 relative).
NormalConnection normal_connection(const Chart& chart, const AmbientSpace& space, const Vec& u,
                                   const FieldSampler& xi_field, std::size_t dir,
                                   const ToleranceProfile& profile);

struct WeylOptions {
    /// Negative control: omit the 1/2 g(U,V) B^N term of the h relation.
    bool drop_normal_lee_term = false;
};

/// Residuals of the four Riemannian/Weyl relations for h, the induced connection,
/// the shape operator and the normal connection.
CheckFragment check_weyl_relations(const Chart& chart, const AmbientSpace& space, const Vec& u,
                                   const ToleranceProfile& profile, const WeylOptions& options = {});

/// Residuals of the covariant-derivative formulas for P, F, t and f.
CheckFragment check_PFtf_derivatives(const Chart& chart, const AmbientSpace& space, const Vec& u,
                                     const ToleranceProfile& profile);

} // namespace bislant
