#include "circumnav/control.hpp"

#include <cmath>
#include <utility>

namespace circumnav {

SeparationTarget SeparationTarget::checked(std::vector<Angle> per_edge) {
    if (per_edge.size() < 2)
        throw ConfigError("SeparationTarget: need at least two edges");
    double sum = 0.0;
    for (const Angle& a : per_edge) sum += a.radians();
    if (std::abs(sum - kTwoPi) > kSumTolerance)
        throw ConfigError("SeparationTarget: separations must sum to 2*pi");
    SeparationTarget target;
    target.per_edge_ = std::move(per_edge);
    return target;
}

Vec2 estimator_rate(const Vec2& position, const Vec2& estimate, const UnitVec2& bearing_to_target,
                    double k_est) {
    const Vec2 displacement = position - estimate;
    const double along = bearing_to_target.vec().dot(displacement);
    return k_est * (displacement - along * bearing_to_target.vec());
}

double separation_estimate(Angle psi) {
    const double p = psi.radians();
    return (p >= kPi) ? 2.0 * p - 3.0 * kPi : 2.0 * p + kPi;
}

namespace {

// Shared two-term law; the proposed and baseline controllers differ only in
// which separation value feeds the tangential coefficient.
Vec2 two_term_law(const UnitVec2& phi, double dhat, double separation, double d_star,
                  Angle beta_star, const ControlGains& gains) {
    const double radial = gains.k_c * (dhat - d_star);
    const double tangential = gains.k_omega * (gains.alpha + (separation - beta_star.radians()));
    const UnitVec2 phi_bar = rotate_cw_quarter(phi);
    return radial * phi.vec() + tangential * phi_bar.vec();
}

} // namespace

Vec2 control_input(const UnitVec2& bearing_to_target, double dhat, double beta_hat, double d_star,
                   Angle beta_star, const ControlGains& gains) {
    return two_term_law(bearing_to_target, dhat, beta_hat, d_star, beta_star, gains);
}

Vec2 baseline_control_input(const UnitVec2& bearing_to_target, double dhat, Angle beta_true,
                            double d_star, Angle beta_star, const ControlGains& gains) {
    return two_term_law(bearing_to_target, dhat, beta_true.radians(), d_star, beta_star, gains);
}

double validate_alpha(double alpha, const SeparationTarget& beta_star) {
    (void)beta_star; // a-priori bound does not depend on the target values
    const double kappa = alpha - 3.0 * kPi;
    if (!(kappa > 0.0))
        throw AlphaTooSmall("validate_alpha: alpha must exceed 3*pi");
    return kappa;
}

} // namespace circumnav
