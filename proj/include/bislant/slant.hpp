#pragma once

// Coordinate-aligned distributions, pointwise slant angles and the condition battery
// (involutive / totally geodesic / totally umbilic) for each of the two distributions.

#include "bislant/immersion.hpp"

#include <optional>
#include <vector>

namespace bislant {

struct DistributionSplit {
    std::vector<std::size_t> I1;  // zero-based parameter indices
    std::vector<std::size_t> I2;
    std::optional<Expression> declared_cos2_theta1;  // over the chart parameters
    std::optional<Expression> declared_cos2_theta2;

    /// Throws NumericalError unless I1, I2 partition {0..m-1} into non-empty even-sized sets.
    void validate(std::size_t m) const;
    std::size_t n1() const noexcept { return I1.size() / 2; }
    std::size_t n2() const noexcept { return I2.size() / 2; }
};

struct SlantRecord {
    double theta = 0.0;
    double cos2_theta = 0.0;
    double eig_spread = 0.0;
    double invariance_residual = 0.0;
    std::vector<double> eigenvalues;
    bool proper = false;
};

/// Slant data of span{d_i : i in indices}. Throws NumericalError if the span is not P-invariant.
SlantRecord slant_angle(const PointState& state, const std::vector<std::size_t>& indices,
                        const ToleranceProfile& profile);

/// g-orthonormal bases of the two distributions (D2 is orthonormalized after D1) with
/// the coordinate coefficients of each basis vector.
struct SplitBasis {
    std::vector<Vec> d1, d2;
    std::vector<Vec> c1, c2;   // d1[k] = sum_i c1[k][i] d_i
    double orthogonality = 0;  // max |g(d1_a, d2_b)| after orthonormalizing each block alone
};

SplitBasis split_basis(const PointState& state, const DistributionSplit& split);

/// Outcome expectations for the condition battery (from the scenario).
struct ConditionExpectations {
    std::optional<bool> totally_geodesic;
    std::optional<bool> totally_umbilic;
};

struct DistributionConditions {
    CheckFragment checks;
    double involutive = 0.0;           // |lhs - rhs| of the involutivity display
    double totally_geodesic = 0.0;     // max of |omega(other)| and |display|
    double umbilic_fit = 0.0;          // least-squares residual of the umbilic display
    double display_vs_geometry = 0.0;  // display against the directly computed derivative
    double omega_other = 0.0;          // max |omega| on the other distribution's frame
    Vec mean_curvature;                // fitted umbilic vector (lies in the other distribution)
};

/// Conditions for D^{theta1} with Z, W ranging over D^{theta2}.
DistributionConditions check_d1_conditions(const Chart& chart, const AmbientSpace& space,
                                           const DistributionSplit& split, const Vec& u,
                                           const ToleranceProfile& profile,
                                           const ConditionExpectations& expect = {});

/// Mirror image: conditions for D^{theta2} with X ranging over D^{theta1}.
DistributionConditions check_d2_conditions(const Chart& chart, const AmbientSpace& space,
                                           const DistributionSplit& split, const Vec& u,
                                           const ToleranceProfile& profile,
                                           const ConditionExpectations& expect = {});

/// The display g(A_{FPX} Z - A_{FX} PZ, Y) + g(nabla-perp_Y FX, FZ) for coordinate-constant
/// extensions of X, Y (coefficients cx, cy) and a tangent vector Z at the state's point.
double condition_display(const FieldCalculus& calc, const PointState& state, const Vec& cx,
                         const Vec& cy, const Vec& z);

/// max ||h(e_a, e_b)|| over a in the D1 basis and b in the D2 basis.
double mixed_tg_check(const PointState& state, const DistributionSplit& split,
                      const ToleranceProfile& profile);

} // namespace bislant
