#pragma once
/**
 * @file analysis.hpp
 * @brief Post-hoc computation of proof-side quantities over a trajectory
 *        log: error series, excitation certificate, perturbation
 *        decomposition and bounds, nominal consensus reference, the
 *        unit-gain distance oracle, and settling times.
 *
 * Analysis is omniscient by design: it reads ground truth the controller
 * never sees. Nothing here feeds back into the control path.
 */

#include "circumnav/sim.hpp"

#include <span>
#include <vector>

namespace circumnav {

/// Per-sample, per-agent error series on the log's time grid.
/// Flattened index = sample * n + agent; j is always the ring neighbor.
struct ErrorSeries {
    int n = 0;
    std::vector<double> time;

    std::vector<double> xtilde_norm; ///< estimate error norm (m)
    std::vector<double> distance;    ///< agent-target distance d_i (m)
    std::vector<double> delta;       ///< d_i - d_star (m)
    std::vector<double> rho;         ///< d_i - dhat_i (m)
    std::vector<double> beta_true;   ///< actual separation, [0, 2*pi) (rad)
    std::vector<double> btilde;      ///< beta_ij - beta_star_ij (rad)
    std::vector<double> thetatilde;  ///< beta_ij - beta_hat_ij (rad)
    std::vector<double> betatilde;   ///< beta_hat_ij - beta_star_ij (rad)

    std::vector<std::uint8_t> ordered; ///< per sample: ring order maintained

    /// Per-agent corridor floor implied by the initial conditions:
    /// min(d_i(0), d_star - xtilde_i(0)). Positive for every agent exactly
    /// when the bounded-distance hypothesis holds.
    std::vector<double> corridor_floor;

    std::size_t samples() const { return time.size(); }
    std::size_t flat(std::size_t sample, int agent) const { return sample * n + agent; }
    bool corridor_hypothesis() const;
};

ErrorSeries compute_errors(const TrajectoryLog& log, const ScenarioConfig& config);

/// Numerical persistence-of-excitation certificate: the minimum, over a
/// uniform grid of probe directions, all window start times, and all agents,
/// of the trapezoidal quadrature of (U . phi_bar)^2 across the window.
/// Positive certifies excitation. Requires window <= t_end, directions >= 4.
double pe_certificate(const TrajectoryLog& log, const ScenarioConfig& config,
                      double window_seconds, int directions);

/// Per-agent variant (minimum over directions and window starts only).
std::vector<double> pe_certificate_per_agent(const TrajectoryLog& log,
                                             const ScenarioConfig& config, double window_seconds,
                                             int directions);

/// Consensus/perturbation split of the separation-error dynamics.
struct PerturbationSeries {
    int n = 0;
    std::vector<double> time;
    std::vector<double> q;      ///< nominal consensus term (rad/s), flattened
    std::vector<double> g;      ///< perturbation term (rad/s), flattened
    std::vector<double> g_norm; ///< per-sample Euclidean norm of g

    double varpi_apriori = 0.0;  ///< sqrt(n) k_omega (alpha + 14 pi) / min corridor floor;
                                 ///< NaN when the corridor hypothesis fails
    double varpi_posterior = 0.0;///< same formula with the realized min distance
    double max_g_norm = 0.0;     ///< empirical sup of ||g|| (tighter than either bound)

    std::size_t flat(std::size_t sample, int agent) const { return sample * n + agent; }
};

PerturbationSeries perturbation_decompose(const ErrorSeries& errors, const ScenarioConfig& config);

/// Solution of the nominal linear consensus system
///     db/dt = -(k_omega / d_star) L b
/// from b0 (which must sum to zero within 1e-9, else SumNotZero), sampled on
/// the config's log grid. Integrated with fine-substep Runge-Kutta.
struct NominalTrajectory {
    int n = 0;
    std::vector<double> time;
    std::vector<double> btilde; ///< flattened, sample * n + agent

    std::size_t flat(std::size_t sample, int agent) const { return sample * n + agent; }
    double norm_at(std::size_t sample) const;
};

NominalTrajectory nominal_reference(const std::vector<double>& b0, const ScenarioConfig& config);

/// Exact-solution oracle for the distance error at unit radial gain:
///     delta_i(t) = delta_i(0) e^{-t} + integral_0^t e^{-(t-tau)} rho_i(tau) dtau,
/// evaluated by trapezoidal quadrature of the logged rho on the log grid.
/// Throws WrongGain unless k_c == 1.
std::vector<double> delta_oracle(const ErrorSeries& errors, const ScenarioConfig& config);

/// First time after which |series| stays below tolerance through the end;
/// +infinity when it never does, 0 when it always is.
double settling_time(std::span<const double> time, std::span<const double> series,
                     double tolerance);

/// Bearing angle of agent `agent` against the +x axis, unwrapped across the
/// seam so that monotone rotation shows up as a monotone series. Valid when
/// per-sample rotation stays below pi.
std::vector<double> unwrapped_bearing_angle(const TrajectoryLog& log, const ScenarioConfig& config,
                                            int agent);

/// Least-squares slope of ln(values) against time over [t_lo, t_hi],
/// skipping samples at or below `floor_value`. NaN if fewer than two
/// usable samples.
double log_linear_slope(std::span<const double> time, std::span<const double> values, double t_lo,
                        double t_hi, double floor_value);

} // namespace circumnav
