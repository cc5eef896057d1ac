#include "circumnav/analysis.hpp"

#include "circumnav/scenario.hpp"

#include <doctest.h>

#include <cmath>

using namespace circumnav;

namespace {

ScenarioConfig section5() {
    return parse_scenario_file(std::string(CIRCUMNAV_SCENARIO_DIR) + "/section5.scenario");
}

ScenarioConfig on_circle_config() {
    ScenarioConfig c;
    c.name = "equilibrium";
    c.n = 4;
    c.target = {0.5, 0.1};
    c.d_star = 1.2;
    c.beta_star.assign(4, Angle::wrap(kPi / 2));
    c.gains = {5.0, 1.5, 1.0, 3.5 * kPi};
    c.dt = 1e-3;
    c.t_end = 1.0;
    double theta = 0.2;
    for (int i = 0; i < c.n; ++i) {
        c.initial_positions.push_back(
            c.target + Vec2{c.d_star * std::cos(theta), c.d_star * std::sin(theta)});
        c.initial_estimates.push_back(c.target);
        theta += kPi / 2;
    }
    return c;
}

// Synthetic single-agent-pair log: agent 0 fixed, agent 1 placed far away so
// ring measurements stay defined; only agent 0's bearing matters to the test.
TrajectoryLog frozen_log(std::size_t samples, double dt) {
    TrajectoryLog log;
    log.n = 2;
    for (std::size_t s = 0; s < samples; ++s) {
        log.time.push_back(s * dt);
        log.position.push_back({1.0, 0.0});
        log.estimate.push_back({0.0, 0.0});
        log.control.push_back({0.0, 0.0});
        log.psi.push_back(0.0);
        log.beta_hat.push_back(0.0);
        log.dhat.push_back(1.0);
        log.position.push_back({-1.0, 0.0});
        log.estimate.push_back({0.0, 0.0});
        log.control.push_back({0.0, 0.0});
        log.psi.push_back(0.0);
        log.beta_hat.push_back(0.0);
        log.dhat.push_back(1.0);
    }
    return log;
}

// Uniform circular motion at angular rate omega, radius 1.
TrajectoryLog circular_log(int n_agents, std::size_t samples, double dt, double omega) {
    TrajectoryLog log;
    log.n = n_agents;
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = s * dt;
        log.time.push_back(t);
        for (int i = 0; i < n_agents; ++i) {
            const double theta = omega * t + kTwoPi * i / n_agents;
            log.position.push_back({std::cos(theta), std::sin(theta)});
            log.estimate.push_back({0.0, 0.0});
            log.control.push_back({0.0, 0.0});
            log.psi.push_back(0.0);
            log.beta_hat.push_back(0.0);
            log.dhat.push_back(1.0);
        }
    }
    return log;
}

ScenarioConfig bare_config(int n, double k_omega = 1.0, double d_star = 1.0) {
    ScenarioConfig c;
    c.n = n;
    c.d_star = d_star;
    c.gains = {1.0, 1.0, k_omega, 3.5 * kPi};
    c.dt = 1e-3;
    c.t_end = 1.0;
    return c;
}

} // namespace

TEST_CASE("compute_errors on an equilibrium run is identically zero") {
    const ScenarioConfig c = on_circle_config();
    const TrajectoryLog log = run(c);
    const ErrorSeries err = compute_errors(log, c);
    for (std::size_t k = 0; k < err.delta.size(); ++k) {
        CHECK(std::abs(err.xtilde_norm[k]) <= 1e-9);
        CHECK(std::abs(err.delta[k]) <= 1e-9);
        CHECK(std::abs(err.rho[k]) <= 1e-9);
        CHECK(std::abs(err.btilde[k]) <= 1e-9);
        CHECK(std::abs(err.thetatilde[k]) <= 1e-9);
        CHECK(std::abs(err.betatilde[k]) <= 1e-9);
    }
    for (std::size_t s = 0; s < err.samples(); ++s) CHECK(err.ordered[s] == 1);
}

TEST_CASE("perfect estimates zero out xtilde and rho but not delta") {
    ScenarioConfig c = on_circle_config();
    // push agents off the circle, estimates stay perfect
    c.initial_positions[0] = c.target + Vec2{1.5, 0.0};
    c.t_end = 0.0;
    const TrajectoryLog log = run(c);
    const ErrorSeries err = compute_errors(log, c);
    CHECK(err.xtilde_norm[0] == 0.0);
    CHECK(std::abs(err.rho[0]) <= 1e-15);
    CHECK(err.delta[0] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("error identity betatilde = btilde - thetatilde holds pointwise") {
    ScenarioConfig c = section5();
    c.t_end = 2.0;
    const ErrorSeries err = compute_errors(run(c), c);
    for (std::size_t k = 0; k < err.betatilde.size(); ++k)
        CHECK(std::abs(err.betatilde[k] - (err.btilde[k] - err.thetatilde[k])) <= 1e-12);
}

TEST_CASE("pe certificate of a frozen agent is zero for some direction") {
    const TrajectoryLog log = frozen_log(101, 0.1);
    const ScenarioConfig c = bare_config(2);
    CHECK(pe_certificate(log, c, 5.0, 16) <= 1e-15);
}

TEST_CASE("pe certificate over one period of circular motion is half the window") {
    const double omega = kTwoPi; // period 1 s
    const TrajectoryLog log = circular_log(2, 1001, 1e-3, omega);
    const ScenarioConfig c = bare_config(2);
    const std::vector<double> per_agent = pe_certificate_per_agent(log, c, 1.0, 16);
    for (double cert : per_agent) CHECK(cert == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("pe certificate rejects bad arguments") {
    const TrajectoryLog log = frozen_log(11, 0.1);
    const ScenarioConfig c = bare_config(2);
    CHECK_THROWS_AS(pe_certificate(log, c, 5.0, 3), ConfigError);
    CHECK_THROWS_AS(pe_certificate(log, c, 100.0, 16), ConfigError);
}

TEST_CASE("perturbation series vanishes on-circle and respects the bound formula") {
    // delta = 0 and thetatilde = 0 make every term of g cancel
    ErrorSeries err;
    err.n = 5;
    const std::size_t samples = 3;
    err.time = {0.0, 0.1, 0.2};
    const double d_star = 1.2;
    for (std::size_t s = 0; s < samples; ++s)
        for (int i = 0; i < 5; ++i) {
            err.distance.push_back(d_star);
            err.delta.push_back(0.0);
            err.btilde.push_back(0.3 * i - 0.6);
            err.thetatilde.push_back(0.0);
            err.betatilde.push_back(0.3 * i - 0.6);
            err.xtilde_norm.push_back(0.0);
            err.rho.push_back(0.0);
            err.beta_true.push_back(0.0);
        }
    err.ordered.assign(samples, 1);
    err.corridor_floor.assign(5, 0.5);

    ScenarioConfig c = bare_config(5, 1.0, d_star);
    const PerturbationSeries pert = perturbation_decompose(err, c);
    for (double g : pert.g) CHECK(std::abs(g) <= 1e-15);

    // a-priori bound with min corridor floor 0.5:
    // sqrt(5) * k_omega * (3.5*pi + 14*pi) / 0.5
    const double expected = std::sqrt(5.0) * 1.0 * (17.5 * kPi) / 0.5;
    CHECK(pert.varpi_apriori == doctest::Approx(expected).epsilon(1e-12));
    CHECK(pert.varpi_apriori == doctest::Approx(245.87).epsilon(1e-4));
}

TEST_CASE("nominal reference: zero stays zero and bad sums are rejected") {
    const ScenarioConfig c = bare_config(3);
    const NominalTrajectory traj = nominal_reference({0.0, 0.0, 0.0}, c);
    for (double v : traj.btilde) CHECK(v == 0.0);
    CHECK_THROWS_AS(nominal_reference({1.0, 0.0, 0.0}, c), SumNotZero);
}

TEST_CASE("nominal reference matches the two-agent eigen decay") {
    ScenarioConfig c = bare_config(2, 1.0, 1.0); // k_omega / d_star = 1
    c.t_end = 1.5;
    c.log_stride = 100;
    const NominalTrajectory traj = nominal_reference({kPi / 4, -kPi / 4}, c);
    for (std::size_t s = 0; s < traj.time.size(); ++s) {
        const double expected = (kPi / 4) * std::exp(-2.0 * traj.time[s]);
        CHECK(std::abs(traj.btilde[traj.flat(s, 0)] - expected) <= 1e-9);
        CHECK(std::abs(traj.btilde[traj.flat(s, 1)] + expected) <= 1e-9);
    }
}

TEST_CASE("nominal reference obeys the connectivity decay envelope") {
    ScenarioConfig c = bare_config(5, 1.0, 1.2);
    c.t_end = 4.0;
    c.log_stride = 10;
    const std::vector<double> b0 = {0.5, -0.25, 0.25, -0.25, -0.25};
    const NominalTrajectory traj = nominal_reference(b0, c);
    const double lambda2 = algebraic_connectivity(ring_laplacian(RingTopology{5}));
    const double rate = c.gains.k_omega * lambda2 / c.d_star;
    const double norm0 = traj.norm_at(0);
    for (std::size_t s = 0; s < traj.time.size(); ++s)
        CHECK(traj.norm_at(s) <= norm0 * std::exp(-rate * traj.time[s]) * (1.0 + 1e-6));
}

TEST_CASE("delta oracle reproduces the homogeneous and step responses") {
    const int n = 2;
    ErrorSeries err;
    err.n = n;
    const double dt = 1e-3;
    const std::size_t samples = 20001; // 20 s
    SUBCASE("rho = 0 decays as exp(-t)") {
        for (std::size_t s = 0; s < samples; ++s) {
            err.time.push_back(s * dt);
            for (int i = 0; i < n; ++i) {
                err.delta.push_back(i == 0 ? 1.0 : 0.5); // delta(0) per agent
                err.rho.push_back(0.0);
            }
        }
        const ScenarioConfig c = bare_config(n);
        const std::vector<double> oracle = delta_oracle(err, c);
        for (std::size_t s = 0; s < samples; s += 500) {
            CHECK(std::abs(oracle[err.flat(s, 0)] - std::exp(-err.time[s])) <= 1e-12);
            CHECK(std::abs(oracle[err.flat(s, 1)] - 0.5 * std::exp(-err.time[s])) <= 1e-12);
        }
    }
    SUBCASE("constant rho converges to rho") {
        const double rho = 0.7;
        for (std::size_t s = 0; s < samples; ++s) {
            err.time.push_back(s * dt);
            for (int i = 0; i < n; ++i) {
                err.delta.push_back(1.0);
                err.rho.push_back(rho);
            }
        }
        const ScenarioConfig c = bare_config(n);
        const std::vector<double> oracle = delta_oracle(err, c);
        CHECK(std::abs(oracle[err.flat(samples - 1, 0)] - rho) <= 1e-4);
    }
}

TEST_CASE("delta oracle refuses non-unit radial gain") {
    ErrorSeries err;
    err.n = 2;
    err.time = {0.0, 1e-3};
    err.delta = {0, 0, 0, 0};
    err.rho = {0, 0, 0, 0};
    ScenarioConfig c = bare_config(2);
    c.gains.k_c = 1.5;
    CHECK_THROWS_AS(delta_oracle(err, c), WrongGain);
}

TEST_CASE("settling_time on analytic series") {
    std::vector<double> time, zero, decay;
    for (int k = 0; k <= 5000; ++k) {
        time.push_back(k * 1e-3);
        zero.push_back(0.0);
        decay.push_back(std::exp(-time.back()));
    }
    CHECK(settling_time(time, zero, 0.01) == 0.0);
    CHECK(settling_time(time, decay, std::exp(-3.0)) == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(std::isinf(settling_time(time, decay, std::exp(-10.0))));
}

TEST_CASE("unwrapped bearing angle grows monotonically on a healthy run") {
    ScenarioConfig c = section5();
    c.t_end = 2.0;
    const TrajectoryLog log = run(c);
    for (int i = 0; i < c.n; ++i) {
        const std::vector<double> gamma = unwrapped_bearing_angle(log, c, i);
        for (std::size_t s = 1; s < gamma.size(); ++s) CHECK(gamma[s] > gamma[s - 1]);
        // several full revolutions in 2 s
        CHECK(gamma.back() - gamma.front() > kTwoPi);
    }
}

TEST_CASE("log_linear_slope recovers a known decay rate") {
    std::vector<double> time, values;
    for (int k = 0; k <= 2000; ++k) {
        time.push_back(k * 1e-3);
        values.push_back(3.0 * std::exp(-1.7 * time.back()));
    }
    const double slope = log_linear_slope(time, values, 0.0, 2.0, 0.0);
    CHECK(slope == doctest::Approx(-1.7).epsilon(1e-9));
}
