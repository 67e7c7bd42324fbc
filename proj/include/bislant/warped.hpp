#pragma once

// Warped-product checks: the six pointwise identities, the characterization conditions,
// the orthonormal adapted frame and the Chen-type inequality.

#include "bislant/slant.hpp"

#include <array>
#include <string>
#include <vector>

namespace bislant {

struct WarpDeclaration {
    Expression lambda;  // over the chart parameters; must depend on the I1 parameters only

    double value(const Vec& u) const;
    /// d(ln lambda)/du_i, exact.
    Vec log_gradient(const Vec& u) const;
};

/// Positivity, base-only dependence, block-diagonal induced metric and fiber separability.
/// Throws NumericalError if lambda is not positive at u.
CheckFragment validate_warp(const Chart& chart, const AmbientSpace& space,
                            const DistributionSplit& split, const WarpDeclaration& warp,
                            const Vec& u, const ToleranceProfile& profile);

/// Records lemma.1 .. lemma.6 over orthonormal frames of both distributions.
CheckFragment check_lemma_identities(const Chart& chart, const AmbientSpace& space,
                                     const DistributionSplit& split, const WarpDeclaration& warp,
                                     const Vec& u, const ToleranceProfile& profile);

struct Characterization {
    CheckFragment checks;
    Vec grad_log_lambda;        // orthonormal-frame computation
    Vec grad_log_lambda_coord;  // coordinate-frame computation (inverse metric)
    Vec mean_curvature;         // umbilic fit for D^{theta2}
};

Characterization check_characterization(const Chart& chart, const AmbientSpace& space,
                                        const DistributionSplit& split,
                                        const WarpDeclaration& warp, const Vec& u,
                                        const ToleranceProfile& profile);

struct LabeledVector {
    std::string label;
    Vec v;
};

struct AdaptedFrame {
    std::vector<LabeledVector> vectors;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double gram_residual = 0.0;
    double j_decomposition = 0.0;  // max ||J e - cos P^e - sin F^e|| over X^_i and Z^_j
};

/// Orthonormal frame {X, PX, Z, PZ, FX, FPX, FZ, FPZ, xi, J xi} with csc/sec normalizations.
/// Throws DegeneracyError when |cos theta| or |sin theta| < 1e-3.
AdaptedFrame adapted_frame(const PointState& state, const DistributionSplit& split,
                           const ToleranceProfile& profile);

struct ChenRecord {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    std::array<double, 4> terms{};  // the four summands of rhs, in display order
    // component_norms[pair][space]: pair 0 = (D1,D1), 1 = mixed (counted twice), 2 = (D2,D2);
    // space 0 = FD1, 1 = FD2, 2 = mu.
    std::array<std::array<double, 3>, 3> component_norms{};
    double block_sum = 0.0;
    double mu_norm = 0.0;              // sqrt of the mu-components of h
    double mean_curvature_norm = 0.0;  // ||H||
    double mixed_tg = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

struct ChenOptions {
    bool allow_degenerate_angles = false;
};

ChenRecord chen_inequality(const Chart& chart, const AmbientSpace& space,
                           const DistributionSplit& split, const Vec& u,
                           const ToleranceProfile& profile, const ChenOptions& options = {});

enum class EqualityStatus { Strict, Consistent, Violated };

struct EqualityDiagnosis {
    EqualityStatus status = EqualityStatus::Strict;
    std::string text;
    bool mu_vanishes = false;
    bool minimal = false;
    bool mixed_totally_geodesic = false;
};

EqualityDiagnosis equality_case(const ChenRecord& record, const ToleranceProfile& profile);

std::string_view to_string(EqualityStatus status);

} // namespace bislant
