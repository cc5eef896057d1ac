#pragma once
/**
 * @file control.hpp
 * @brief Per-agent, per-instant computations: target-estimator rate,
 *        angular-separation estimate, control input, and gain validation.
 *
 * Everything here is a pure function of local measurements; no agent state
 * or other agents' data crosses these interfaces. That code-structure rule
 * is what keeps the controller communication-free.
 */

#include "circumnav/geom.hpp"

#include <vector>

namespace circumnav {

struct ControlGains {
    double k_est = 1.0;  ///< estimation gain (> 0)
    double k_c = 1.0;    ///< radial gain (> 0)
    double k_omega = 1.0;///< tangential gain (> 0)
    double alpha = 0.0;  ///< tangential bias (radians); see validate_alpha
};

/// Desired angular separations, one per directed ring edge (i, i+1 mod n).
/// Entries must sum to 2*pi (zero-sum consensus subspace requirement).
class SeparationTarget {
public:
    static constexpr double kSumTolerance = 1e-9;

    /// Throws ConfigError unless the entries sum to 2*pi within tolerance.
    static SeparationTarget checked(std::vector<Angle> per_edge);

    int size() const { return static_cast<int>(per_edge_.size()); }
    Angle edge(int i) const { return per_edge_[i]; }
    const std::vector<Angle>& per_edge() const { return per_edge_; }

private:
    std::vector<Angle> per_edge_;
};

/// Rate of the target-position estimate: the displacement from the estimate
/// to the agent, projected onto the complement of the bearing, scaled by
/// k_est. Always orthogonal to the bearing.
Vec2 estimator_rate(const Vec2& position, const Vec2& estimate, const UnitVec2& bearing_to_target,
                    double k_est);

/// Lower bound (exclusive) of the separation estimate's range.
inline constexpr double kSeparationEstimateMin = -kPi;
/// Upper bound (exclusive) of the separation estimate's range.
inline constexpr double kSeparationEstimateMax = 3.0 * kPi;

/// Communication-free approximation of the angular separation from the
/// locally measured spacing psi:
///     2*psi - 3*pi  if psi >= pi,
///     2*psi + pi    otherwise.
/// The result lives in [-pi, 3*pi) and is returned UNWRAPPED; callers must
/// not canonicalize it, or downstream error arithmetic breaks.
double separation_estimate(Angle psi);

/// The control law: radial correction toward the desired circle plus a
/// strictly positive tangential drive,
///     u = k_c (dhat - d_star) phi + k_omega (alpha + (beta_hat - beta_star)) phi_bar,
/// with phi_bar the bearing rotated clockwise by a quarter turn.
Vec2 control_input(const UnitVec2& bearing_to_target, double dhat, double beta_hat, double d_star,
                   Angle beta_star, const ControlGains& gains);

/// Analysis-only variant of control_input with the separation estimate
/// replaced by the ground-truth separation (information a real agent cannot
/// sense without communication).
Vec2 baseline_control_input(const UnitVec2& bearing_to_target, double dhat, Angle beta_true,
                            double d_star, Angle beta_star, const ControlGains& gains);

/// Margin by which the tangential coefficient stays positive:
///     kappa_alpha = alpha - sup |beta_hat - beta_star| >= alpha - 3*pi,
/// using the a-priori range bound (estimate in [-pi, 3*pi), target in
/// [0, 2*pi)). Returns kappa_alpha; throws AlphaTooSmall when it is <= 0,
/// in which case the positive-rotation guarantee is void.
double validate_alpha(double alpha, const SeparationTarget& beta_star);

} // namespace circumnav
