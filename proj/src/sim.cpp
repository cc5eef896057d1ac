#include "circumnav/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace circumnav {

void ScenarioConfig::validate() const {
    if (n < 2) throw ConfigError(name + ": need n >= 2 agents");
    if (!(d_star > 0.0)) throw ConfigError(name + ": d_star must be positive");
    if (!(dt > 0.0)) throw ConfigError(name + ": dt must be positive");
    if (t_end < 0.0) throw ConfigError(name + ": t_end must be nonnegative");
    if (log_stride < 1) throw ConfigError(name + ": log_stride must be >= 1");
    if (!(eps_dist > 0.0)) throw ConfigError(name + ": eps_dist must be positive");
    if (!(gains.k_est > 0.0 && gains.k_c > 0.0 && gains.k_omega > 0.0))
        throw ConfigError(name + ": gains k_est, k_c, k_omega must be positive");
    if (static_cast<int>(beta_star.size()) != n)
        throw ConfigError(name + ": beta_star needs one entry per ring edge");
    if (static_cast<int>(initial_positions.size()) != n ||
        static_cast<int>(initial_estimates.size()) != n)
        throw ConfigError(name + ": need n initial positions and n initial estimates");
    if (!target.is_finite()) throw ConfigError(name + ": non-finite target");
    for (const Vec2& p : initial_positions)
        if (!p.is_finite()) throw ConfigError(name + ": non-finite initial position");
    for (const Vec2& e : initial_estimates)
        if (!e.is_finite()) throw ConfigError(name + ": non-finite initial estimate");

    const SeparationTarget target_check = separation_target(); // throws on bad sum
    if (!allow_unsafe_alpha)
        validate_alpha(gains.alpha, target_check); // throws AlphaTooSmall

    for (int i = 0; i < n; ++i) {
        if ((initial_positions[i] - target).norm() <= eps_dist)
            throw ConfigError(name + ": agent " + std::to_string(i + 1) +
                              " starts on top of the target");
        for (int j = i + 1; j < n; ++j)
            if ((initial_positions[i] - initial_positions[j]).norm() <= eps_dist)
                throw ConfigError(name + ": agents " + std::to_string(i + 1) + " and " +
                                  std::to_string(j + 1) + " start at the same point");
    }
}

WorldState ScenarioConfig::initial_world() const {
    WorldState world;
    world.time = 0.0;
    world.target = target;
    world.agents.resize(n);
    for (int i = 0; i < n; ++i) {
        world.agents[i].position = initial_positions[i];
        world.agents[i].estimate = initial_estimates[i];
    }
    return world;
}

SeparationTarget ScenarioConfig::separation_target() const {
    return SeparationTarget::checked(beta_star);
}

void StateDerivative::resize(int n) {
    // No zero fill: every agent writes all of its slots (or the evaluation
    // throws and the contents are discarded).
    position_rate.resize(n);
    estimate_rate.resize(n);
    psi.resize(n);
    beta_hat.resize(n);
    dhat.resize(n);
}

namespace {

// One agent's slice of the derivative. Uses only that agent's local
// measurements (plus ground truth when the baseline variant is selected).
inline void eval_agent(int i, const WorldState& world, const ScenarioConfig& config,
                       StateDerivative& out) {
    const RingTopology ring{config.n};
    const int j = ring.neighbor(i);
    const AgentState& agent = world.agents[i];

    const UnitVec2 phi = unit_bearing(agent.position, world.target, config.eps_dist);
    const double dhat = (agent.position - agent.estimate).norm();
    const Angle psi = measured_psi(world, i, j, config.eps_dist);
    const double beta_hat = separation_estimate(psi);

    Vec2 u;
    if (config.baseline_controller) {
        const Angle beta_true = true_separation(world, i, j, config.eps_dist);
        u = baseline_control_input(phi, dhat, beta_true, config.d_star, config.beta_star[i],
                                   config.gains);
    } else {
        u = control_input(phi, dhat, beta_hat, config.d_star, config.beta_star[i], config.gains);
    }

    out.position_rate[i] = u;
    out.estimate_rate[i] = estimator_rate(agent.position, agent.estimate, phi, config.gains.k_est);
    out.psi[i] = psi.radians();
    out.beta_hat[i] = beta_hat;
    out.dhat[i] = dhat;
}

[[noreturn]] void rethrow_with_context(const DegenerateBearing& e, double time, int agent) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "degenerate bearing at t=%.9g for agent %d: %s", time,
                  agent + 1, e.what());
    throw DegenerateBearing(buf);
}

bool use_parallel(EvalMode mode, int n) {
#ifdef _OPENMP
    if (mode == EvalMode::Parallel) return true;
    if (mode == EvalMode::Auto) return n >= kAutoParallelThreshold;
#else
    (void)mode;
    (void)n;
#endif
    return false;
}

void derivative_into(const WorldState& world, const ScenarioConfig& config, EvalMode mode,
                     StateDerivative& out) {
    const int n = config.n;
    out.resize(n);

    if (use_parallel(mode, n)) {
        bool failed = false;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            try {
                eval_agent(i, world, config, out);
            } catch (const DegenerateBearing&) {
#pragma omp atomic write
                failed = true;
            }
        }
        if (failed) {
            // Replay serially so the reported agent is the lowest id,
            // matching the serial path.
            for (int i = 0; i < n; ++i) {
                try {
                    eval_agent(i, world, config, out);
                } catch (const DegenerateBearing& e) {
                    rethrow_with_context(e, world.time, i);
                }
            }
        }
        return;
    }

    for (int i = 0; i < n; ++i) {
        try {
            eval_agent(i, world, config, out);
        } catch (const DegenerateBearing& e) {
            rethrow_with_context(e, world.time, i);
        }
    }
}

// Scratch buffers so the integrator loop does not allocate per step.
struct StepScratch {
    StateDerivative k1, k2, k3, k4;
    WorldState stage;
};

void advance_state(const WorldState& base, const StateDerivative& rate, double h,
                   WorldState& out) {
    const int n = base.agent_count();
    out.target = base.target;
    out.agents.resize(n);
    for (int i = 0; i < n; ++i) {
        out.agents[i].position = base.agents[i].position + h * rate.position_rate[i];
        out.agents[i].estimate = base.agents[i].estimate + h * rate.estimate_rate[i];
    }
    out.time = base.time + h;
}

WorldState step_with(const WorldState& world, const ScenarioConfig& config,
                     const StateDerivative& k1, EvalMode mode, StepScratch& scratch) {
    const double dt = config.dt;
    const int n = config.n;
    WorldState next;

    if (config.integrator == Integrator::Euler) {
        advance_state(world, k1, dt, next);
        return next;
    }

    // Classical four-stage Runge-Kutta.
    advance_state(world, k1, 0.5 * dt, scratch.stage);
    derivative_into(scratch.stage, config, mode, scratch.k2);
    advance_state(world, scratch.k2, 0.5 * dt, scratch.stage);
    derivative_into(scratch.stage, config, mode, scratch.k3);
    advance_state(world, scratch.k3, dt, scratch.stage);
    derivative_into(scratch.stage, config, mode, scratch.k4);

    next.target = world.target;
    next.agents.resize(n);
    const double w = dt / 6.0;
    for (int i = 0; i < n; ++i) {
        next.agents[i].position =
            world.agents[i].position +
            w * (k1.position_rate[i] + 2.0 * scratch.k2.position_rate[i] +
                 2.0 * scratch.k3.position_rate[i] + scratch.k4.position_rate[i]);
        next.agents[i].estimate =
            world.agents[i].estimate +
            w * (k1.estimate_rate[i] + 2.0 * scratch.k2.estimate_rate[i] +
                 2.0 * scratch.k3.estimate_rate[i] + scratch.k4.estimate_rate[i]);
    }
    next.time = world.time + dt;
    return next;
}

void check_finite(const WorldState& world) {
    for (int i = 0; i < world.agent_count(); ++i) {
        if (!world.agents[i].position.is_finite() || !world.agents[i].estimate.is_finite()) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "non-finite state at t=%.9g, agent %d", world.time,
                          i + 1);
            throw NonFiniteState(buf);
        }
    }
}

std::int64_t step_count(double t_end, double dt) {
    if (t_end <= 0.0) return 0;
    // Tolerate an ulp-level excess in t_end/dt so that e.g. 60/1e-3 stays 60000.
    return static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
}

void append_sample(TrajectoryLog& log, const WorldState& world, const StateDerivative& rate,
                   const ScenarioConfig& config) {
    log.time.push_back(world.time);
    for (int i = 0; i < config.n; ++i) {
        log.position.push_back(world.agents[i].position);
        log.estimate.push_back(world.agents[i].estimate);
        log.control.push_back(rate.position_rate[i]);
        log.psi.push_back(rate.psi[i]);
        log.beta_hat.push_back(rate.beta_hat[i]);
        log.dhat.push_back(rate.dhat[i]);
    }

    double min_d = std::numeric_limits<double>::infinity();
    double max_d = 0.0;
    for (int i = 0; i < config.n; ++i) {
        const double d = (world.agents[i].position - world.target).norm();
        min_d = std::min(min_d, d);
        max_d = std::max(max_d, d);
    }
    log.min_distance = std::min(log.min_distance, min_d);
    log.max_distance = std::max(log.max_distance, max_d);

    if (!log.ordering_lost_time && !angularly_ordered(world, config.eps_dist))
        log.ordering_lost_time = world.time;
}

} // namespace

StateDerivative derivative(const WorldState& world, const ScenarioConfig& config, EvalMode mode) {
    StateDerivative out;
    derivative_into(world, config, mode, out);
    return out;
}

void derivative(const WorldState& world, const ScenarioConfig& config, StateDerivative& out,
                EvalMode mode) {
    derivative_into(world, config, mode, out);
}

WorldState step(const WorldState& world, const ScenarioConfig& config, EvalMode mode) {
    StateDerivative k1;
    derivative_into(world, config, mode, k1);
    StepScratch scratch;
    return step_with(world, config, k1, mode, scratch);
}

TrajectoryLog run(const ScenarioConfig& config, EvalMode mode) {
    config.validate();

    const std::int64_t steps = step_count(config.t_end, config.dt);

    TrajectoryLog log;
    log.n = config.n;
    log.min_distance = std::numeric_limits<double>::infinity();
    log.max_distance = 0.0;
    const std::size_t expected = static_cast<std::size_t>(steps / config.log_stride) + 2;
    log.time.reserve(expected);
    log.position.reserve(expected * config.n);
    log.estimate.reserve(expected * config.n);
    log.control.reserve(expected * config.n);
    log.psi.reserve(expected * config.n);
    log.beta_hat.reserve(expected * config.n);
    log.dhat.reserve(expected * config.n);

    WorldState world = config.initial_world();
    StateDerivative k1;
    StepScratch scratch;

    for (std::int64_t k = 0; k < steps; ++k) {
        derivative_into(world, config, mode, k1);
        if (k % config.log_stride == 0) append_sample(log, world, k1, config);
        world = step_with(world, config, k1, mode, scratch);
        world.time = static_cast<double>(k + 1) * config.dt; // uniform grid, no accumulation
        check_finite(world);
    }

    // Final sample is always logged.
    derivative_into(world, config, mode, k1);
    append_sample(log, world, k1, config);
    return log;
}

} // namespace circumnav
