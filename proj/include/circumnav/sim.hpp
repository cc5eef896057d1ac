#pragma once
/**
 * @file sim.hpp
 * @brief Fixed-step integration of the coupled agent/estimator dynamics
 *        under a scenario configuration; produces a trajectory log.
 *
 * All agents update synchronously from the same pre-step snapshot: in-place
 * sequential updates would leak one-step information between agents, which
 * the communication-free setting forbids.
 *
 * Per-agent evaluations inside a step are independent and form the
 * data-parallel kernel. EvalMode selects the serial reference or the
 * OpenMP-parallel version; both produce bit-identical results because each
 * agent writes only its own slots and no cross-agent reductions exist.
 */

#include "circumnav/control.hpp"
#include "circumnav/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace circumnav {

enum class Integrator { Euler, Rk4 };

enum class EvalMode {
    Serial,   ///< reference implementation, plain loop
    Parallel, ///< OpenMP parallel-for over agents
    Auto      ///< Parallel for large crowds, Serial otherwise
};

/// Agent counts at or above this use the parallel kernel under EvalMode::Auto.
inline constexpr int kAutoParallelThreshold = 128;

struct ScenarioConfig {
    std::string name = "scenario";
    int n = 0;
    Vec2 target;
    double d_star = 1.0;              ///< desired circumnavigation radius (m)
    std::vector<Angle> beta_star;     ///< desired separation per ring edge
    ControlGains gains;
    std::vector<Vec2> initial_positions;
    std::vector<Vec2> initial_estimates;
    double dt = 1e-3;                 ///< integration step (s)
    double t_end = 60.0;              ///< horizon (s)
    Integrator integrator = Integrator::Rk4;
    std::uint64_t seed = 0;           ///< randomized-scenario generation only
    int log_stride = 1;               ///< log every k-th step (final always kept)
    double eps_dist = kMinSeparation; ///< degenerate-bearing guard (m)
    bool allow_unsafe_alpha = false;  ///< skip the kappa_alpha > 0 gate
    bool baseline_controller = false; ///< ground-truth-separation variant

    /// Throws ConfigError/AlphaTooSmall on any violated invariant.
    void validate() const;

    /// World at t = 0.
    WorldState initial_world() const;

    SeparationTarget separation_target() const;
};

/// Time derivative of the world plus the per-agent intermediates worth
/// logging. Index = agent id.
struct StateDerivative {
    std::vector<Vec2> position_rate; ///< control input u_i (m/s)
    std::vector<Vec2> estimate_rate; ///< estimator rate (m/s)
    std::vector<double> psi;         ///< measured spacing toward ring neighbor
    std::vector<double> beta_hat;    ///< separation estimate, [-pi, 3*pi)
    std::vector<double> dhat;        ///< believed distance to target (m)

    void resize(int n);
};

/// Evaluate the coupled dynamics at a world snapshot.
/// Throws DegenerateBearing annotated with time and agent ids.
StateDerivative derivative(const WorldState& world, const ScenarioConfig& config,
                           EvalMode mode = EvalMode::Auto);

/// Allocation-free variant for hot loops; `out` is resized as needed.
void derivative(const WorldState& world, const ScenarioConfig& config, StateDerivative& out,
                EvalMode mode = EvalMode::Auto);

/// Advance one step (explicit Euler or classical Runge-Kutta 4).
WorldState step(const WorldState& world, const ScenarioConfig& config,
                EvalMode mode = EvalMode::Auto);

/// Complete record of one run on a uniform grid of sample times.
struct TrajectoryLog {
    int n = 0;
    std::vector<double> time;

    // Flattened series, index = sample * n + agent.
    std::vector<Vec2> position;
    std::vector<Vec2> estimate;
    std::vector<Vec2> control;
    std::vector<double> psi;
    std::vector<double> beta_hat;
    std::vector<double> dhat;

    /// First sample time at which the counterclockwise ring ordering around
    /// the target was lost (warning metric; the controller never uses it).
    std::optional<double> ordering_lost_time;

    /// Realized agent-target distance range over the logged samples.
    double min_distance = 0.0;
    double max_distance = 0.0;

    std::size_t samples() const { return time.size(); }
    std::size_t flat(std::size_t sample, int agent) const { return sample * n + agent; }
};

/// Run the scenario to t_end. Deterministic: identical configs produce
/// bit-identical logs, independent of EvalMode and thread count.
/// Throws DegenerateBearing or NonFiniteState with the offending time.
TrajectoryLog run(const ScenarioConfig& config, EvalMode mode = EvalMode::Auto);

} // namespace circumnav
