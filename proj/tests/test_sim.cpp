#include "circumnav/sim.hpp"

#include "circumnav/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace circumnav;

namespace {

ScenarioConfig section5() {
    return parse_scenario_file(std::string(CIRCUMNAV_SCENARIO_DIR) + "/section5.scenario");
}

// All agents exactly on the desired circle at the target spacing.
ScenarioConfig on_circle_config(double alpha) {
    ScenarioConfig c;
    c.name = "equilibrium";
    c.n = 5;
    c.target = {0.3, -0.2};
    c.d_star = 1.2;
    c.beta_star = {Angle::wrap(5 * kPi / 18), Angle::wrap(kPi / 9), Angle::wrap(5 * kPi / 18),
                   Angle::wrap(5 * kPi / 18), Angle::wrap(19 * kPi / 18)};
    c.gains = {5.0, 1.5, 1.0, alpha};
    c.dt = 1e-3;
    c.t_end = 1.0;
    double theta = 0.4;
    for (int i = 0; i < c.n; ++i) {
        c.initial_positions.push_back(
            c.target + Vec2{c.d_star * std::cos(theta), c.d_star * std::sin(theta)});
        c.initial_estimates.push_back(c.target);
        theta += c.beta_star[i].radians();
    }
    return c;
}

double state_distance(const WorldState& a, const WorldState& b) {
    double sq = 0.0;
    for (int i = 0; i < a.agent_count(); ++i) {
        sq += (a.agents[i].position - b.agents[i].position).norm_squared();
        sq += (a.agents[i].estimate - b.agents[i].estimate).norm_squared();
    }
    return std::sqrt(sq);
}

WorldState final_state(ScenarioConfig config, double dt, double t_end) {
    config.dt = dt;
    config.t_end = t_end;
    config.log_stride = 1 << 30;
    const TrajectoryLog log = run(config);
    WorldState w;
    w.target = config.target;
    w.time = log.time.back();
    const std::size_t last = log.samples() - 1;
    for (int i = 0; i < config.n; ++i)
        w.agents.push_back({log.position[log.flat(last, i)], log.estimate[log.flat(last, i)]});
    return w;
}

} // namespace

TEST_CASE("derivative on the equilibrium manifold is purely tangential") {
    const ScenarioConfig c = on_circle_config(3.5 * kPi);
    const WorldState w = c.initial_world();
    const StateDerivative d = derivative(w, c);
    for (int i = 0; i < c.n; ++i) {
        const UnitVec2 phi = unit_bearing(w.agents[i].position, c.target);
        CHECK(std::abs(d.position_rate[i].dot(phi.vec())) <= 1e-9);      // no radial part
        CHECK(d.position_rate[i].norm() ==
              doctest::Approx(c.gains.k_omega * c.gains.alpha).epsilon(1e-9));
        CHECK(d.estimate_rate[i].norm() <= 1e-12);
        CHECK(std::abs(d.beta_hat[i] - c.beta_star[i].radians()) <= 1e-9);
    }
}

TEST_CASE("two antipodal on-circle agents move at equal tangential speeds") {
    ScenarioConfig c;
    c.name = "antipodal";
    c.n = 2;
    c.target = {0, 0};
    c.d_star = 1.0;
    c.beta_star = {Angle::wrap(kPi), Angle::wrap(kPi)};
    c.gains = {5.0, 1.5, 1.0, 3.5 * kPi};
    c.initial_positions = {{1, 0}, {-1, 0}};
    c.initial_estimates = {{0, 0}, {0, 0}};
    const StateDerivative d = derivative(c.initial_world(), c);
    CHECK(d.position_rate[0].norm() == doctest::Approx(d.position_rate[1].norm()).epsilon(1e-12));
    CHECK(d.position_rate[0].norm() == doctest::Approx(3.5 * kPi).epsilon(1e-12));
    // opposite tangents
    CHECK(std::abs(d.position_rate[0].x + d.position_rate[1].x) <= 1e-12);
    CHECK(std::abs(d.position_rate[0].y + d.position_rate[1].y) <= 1e-12);
}

TEST_CASE("derivative matches the hand-composed control pipeline at t = 0") {
    const ScenarioConfig c = section5();
    const WorldState w = c.initial_world();
    const StateDerivative d = derivative(w, c);
    const RingTopology ring{c.n};
    for (int i = 0; i < c.n; ++i) {
        const int j = ring.neighbor(i);
        const UnitVec2 phi = unit_bearing(w.agents[i].position, c.target, c.eps_dist);
        const double dhat = (w.agents[i].position - w.agents[i].estimate).norm();
        const Angle psi = measured_psi(w, i, j, c.eps_dist);
        const double beta_hat = separation_estimate(psi);
        const Vec2 u = control_input(phi, dhat, beta_hat, c.d_star, c.beta_star[i], c.gains);
        const Vec2 xr =
            estimator_rate(w.agents[i].position, w.agents[i].estimate, phi, c.gains.k_est);
        CHECK(d.position_rate[i].x == doctest::Approx(u.x).epsilon(1e-14));
        CHECK(d.position_rate[i].y == doctest::Approx(u.y).epsilon(1e-14));
        CHECK(d.estimate_rate[i].x == doctest::Approx(xr.x).epsilon(1e-14));
        CHECK(d.estimate_rate[i].y == doctest::Approx(xr.y).epsilon(1e-14));
        CHECK(d.psi[i] == psi.radians());
        CHECK(d.beta_hat[i] == beta_hat);
        CHECK(d.dhat[i] == dhat);
    }
}

TEST_CASE("step leaves a zero-derivative state unchanged except for time") {
    // alpha = 0 puts the on-circle, perfect-estimate state exactly at rest;
    // step() takes the config as-is (the alpha gate lives in validate()).
    ScenarioConfig c = on_circle_config(0.0);
    const WorldState w = c.initial_world();
    for (Integrator integ : {Integrator::Euler, Integrator::Rk4}) {
        c.integrator = integ;
        const WorldState next = step(w, c);
        CHECK(next.time == doctest::Approx(c.dt));
        for (int i = 0; i < c.n; ++i) {
            CHECK(state_distance(next, w) <= 1e-12);
        }
    }
}

TEST_CASE("one RK4 step matches the Taylor expansion to second order") {
    ScenarioConfig c = section5();
    const WorldState w = c.initial_world();
    const StateDerivative d0 = derivative(w, c);

    auto taylor_gap = [&](double dt) {
        c.dt = dt;
        const WorldState next = step(w, c);
        double worst = 0.0;
        for (int i = 0; i < c.n; ++i) {
            const Vec2 taylor = w.agents[i].position + dt * d0.position_rate[i];
            worst = std::max(worst, (next.agents[i].position - taylor).norm());
        }
        return worst;
    };
    const double gap1 = taylor_gap(1e-3);
    const double gap2 = taylor_gap(5e-4);
    CHECK(gap1 <= 1e-3); // second-order remainder at dt = 1e-3
    // halving dt shrinks the remainder about fourfold
    CHECK(gap1 / gap2 == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("rk4 self-converges at fourth order") {
    const ScenarioConfig c = section5();
    const WorldState s4 = final_state(c, 8e-3, 1.0);
    const WorldState s2 = final_state(c, 4e-3, 1.0);
    const WorldState s1 = final_state(c, 2e-3, 1.0);
    const double order = std::log2(state_distance(s4, s2) / state_distance(s2, s1));
    CHECK(order >= 3.5);
    CHECK(order <= 4.5);
}

TEST_CASE("euler and rk4 agree to first order") {
    ScenarioConfig c = section5();
    auto euler_gap = [&](double dt) {
        ScenarioConfig ce = c;
        ce.integrator = Integrator::Euler;
        return state_distance(final_state(ce, dt, 0.5), final_state(c, dt, 0.5));
    };
    const double gap1 = euler_gap(2e-3);
    const double gap2 = euler_gap(1e-3);
    CHECK(gap1 / gap2 == doctest::Approx(2.0).epsilon(0.4));
}

TEST_CASE("runs are deterministic") {
    ScenarioConfig c = section5();
    c.t_end = 1.0;
    const TrajectoryLog a = run(c);
    const TrajectoryLog b = run(c);
    REQUIRE(a.samples() == b.samples());
    CHECK(std::memcmp(a.position.data(), b.position.data(), a.position.size() * sizeof(Vec2)) ==
          0);
    CHECK(std::memcmp(a.estimate.data(), b.estimate.data(), a.estimate.size() * sizeof(Vec2)) ==
          0);
    CHECK(std::memcmp(a.control.data(), b.control.data(), a.control.size() * sizeof(Vec2)) == 0);
    CHECK(a.psi == b.psi);
    CHECK(a.beta_hat == b.beta_hat);
    CHECK(a.dhat == b.dhat);
}

TEST_CASE("parallel evaluation is bit-identical to the serial reference") {
    // small crowd, forced parallel
    ScenarioConfig c = section5();
    c.t_end = 1.0;
    const TrajectoryLog serial = run(c, EvalMode::Serial);
    const TrajectoryLog parallel = run(c, EvalMode::Parallel);
    REQUIRE(serial.samples() == parallel.samples());
    CHECK(std::memcmp(serial.position.data(), parallel.position.data(),
                      serial.position.size() * sizeof(Vec2)) == 0);
    CHECK(std::memcmp(serial.estimate.data(), parallel.estimate.data(),
                      serial.estimate.size() * sizeof(Vec2)) == 0);
    CHECK(serial.beta_hat == parallel.beta_hat);

    // large crowd, single derivative evaluation
    ScenarioConfig big;
    big.name = "crowd";
    big.n = 256;
    big.target = {0, 0};
    big.d_star = 1.2;
    big.gains = {5.0, 1.5, 1.0, 3.5 * kPi};
    for (int i = 0; i < big.n; ++i) {
        const double theta = kTwoPi * i / big.n;
        const double radius = 1.0 + 0.4 * std::sin(3.0 * theta);
        big.beta_star.push_back(Angle::wrap(kTwoPi / big.n));
        big.initial_positions.push_back({radius * std::cos(theta), radius * std::sin(theta)});
        big.initial_estimates.push_back({0.2 * std::sin(7.0 * theta), 0.2 * std::cos(5.0 * theta)});
    }
    const WorldState w = big.initial_world();
    const StateDerivative ds = derivative(w, big, EvalMode::Serial);
    const StateDerivative dp = derivative(w, big, EvalMode::Parallel);
    CHECK(std::memcmp(ds.position_rate.data(), dp.position_rate.data(),
                      ds.position_rate.size() * sizeof(Vec2)) == 0);
    CHECK(std::memcmp(ds.estimate_rate.data(), dp.estimate_rate.data(),
                      ds.estimate_rate.size() * sizeof(Vec2)) == 0);
    CHECK(ds.psi == dp.psi);
}

TEST_CASE("zero-horizon run logs exactly the initial state") {
    ScenarioConfig c = section5();
    c.t_end = 0.0;
    const TrajectoryLog log = run(c);
    REQUIRE(log.samples() == 1);
    CHECK(log.time[0] == 0.0);
    for (int i = 0; i < c.n; ++i) {
        CHECK(log.position[i].x == c.initial_positions[i].x);
        CHECK(log.position[i].y == c.initial_positions[i].y);
    }
}

TEST_CASE("log stride keeps the final sample") {
    ScenarioConfig c = section5();
    c.t_end = 0.05;
    c.log_stride = 7;
    const TrajectoryLog log = run(c);
    CHECK(log.time.back() == doctest::Approx(0.05).epsilon(1e-12));
    // samples at steps 0, 7, 14, ..., 49, then the final step 50
    CHECK(log.samples() == 9);
}

TEST_CASE("an agent driven into the target aborts with a degenerate bearing") {
    ScenarioConfig c;
    c.name = "collision";
    c.n = 2;
    c.target = {0, 0};
    c.d_star = 0.1;
    c.eps_dist = 0.5;
    c.beta_star = {Angle::wrap(kPi), Angle::wrap(kPi)};
    c.gains = {1e-6, 10.0, 1e-6, 3.5 * kPi};
    c.integrator = Integrator::Euler;
    c.dt = 0.1;
    c.t_end = 1.0;
    c.initial_positions = {{0.6, 0}, {-2.0, 0}};
    c.initial_estimates = {{0, 0}, {0, 0}};
    // agent 1 starts 0.6 m out with a perfect estimate; the radial term pulls
    // it 0.5 m inward per step, under the 0.5 m separation floor
    CHECK_THROWS_AS(run(c), DegenerateBearing);
    try {
        run(c);
    } catch (const DegenerateBearing& e) {
        CHECK(std::string(e.what()).find("agent 1") != std::string::npos);
        CHECK(std::string(e.what()).find("t=") != std::string::npos);
    }
}

TEST_CASE("a blown-up integration reports a non-finite state") {
    ScenarioConfig c = section5();
    c.integrator = Integrator::Euler;
    c.dt = 1e3; // estimator update factor ~ -5000 per step
    c.t_end = 200e3;
    CHECK_THROWS_AS(run(c), NonFiniteState);
}

TEST_CASE("ordering loss is recorded as a warning, not an abort") {
    // An inner (fast) agent starts right behind an outer (slow) one and
    // overtakes it during the transient.
    ScenarioConfig c;
    c.name = "overtake";
    c.n = 3;
    c.target = {0, 0};
    c.d_star = 1.2;
    c.beta_star = {Angle::wrap(kTwoPi / 3), Angle::wrap(kTwoPi / 3), Angle::wrap(kTwoPi / 3)};
    c.gains = {5.0, 1.5, 1.0, 3.5 * kPi};
    c.dt = 1e-3;
    c.t_end = 0.5;
    const double gap = 20.0 * kPi / 180.0;
    c.initial_positions = {{0.5, 0},
                           {2.0 * std::cos(gap), 2.0 * std::sin(gap)},
                           {1.2 * std::cos(3.5), 1.2 * std::sin(3.5)}};
    c.initial_estimates = {{0, 0}, {0, 0}, {0, 0}};
    const TrajectoryLog log = run(c);
    REQUIRE(log.ordering_lost_time.has_value());
    CHECK(*log.ordering_lost_time == doctest::Approx(0.065).epsilon(0.2));
}

TEST_CASE("config validation rejects broken scenarios") {
    ScenarioConfig good = section5();
    CHECK_NOTHROW(good.validate());

    ScenarioConfig c = good;
    c.beta_star[0] = Angle::wrap(c.beta_star[0].radians() + 0.1);
    CHECK_THROWS_AS(c.validate(), ConfigError); // sum != 2*pi

    c = good;
    c.gains.alpha = 2.0 * kPi;
    CHECK_THROWS_AS(c.validate(), AlphaTooSmall);
    c.allow_unsafe_alpha = true;
    CHECK_NOTHROW(c.validate());

    c = good;
    c.initial_positions[2] = c.initial_positions[1];
    CHECK_THROWS_AS(c.validate(), ConfigError); // coincident agents

    c = good;
    c.initial_positions[0] = c.target;
    CHECK_THROWS_AS(c.validate(), ConfigError); // on top of the target

    c = good;
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = good;
    c.n = 1;
    c.beta_star.resize(1);
    c.initial_positions.resize(1);
    c.initial_estimates.resize(1);
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
