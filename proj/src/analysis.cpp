#include "circumnav/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace circumnav {

namespace {
constexpr double kOrderedTolerance = 1e-6; // |sum beta - 2*pi| below this = in order
}

bool ErrorSeries::corridor_hypothesis() const {
    for (double f : corridor_floor)
        if (!(f > 0.0)) return false;
    return !corridor_floor.empty();
}

ErrorSeries compute_errors(const TrajectoryLog& log, const ScenarioConfig& config) {
    const int n = log.n;
    const std::size_t samples = log.samples();
    const RingTopology ring{n};

    ErrorSeries err;
    err.n = n;
    err.time = log.time;
    err.xtilde_norm.resize(samples * n);
    err.distance.resize(samples * n);
    err.delta.resize(samples * n);
    err.rho.resize(samples * n);
    err.beta_true.resize(samples * n);
    err.btilde.resize(samples * n);
    err.thetatilde.resize(samples * n);
    err.betatilde.resize(samples * n);
    err.ordered.resize(samples);

    WorldState world;
    world.target = config.target;
    world.agents.resize(n);

    for (std::size_t s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) {
            world.agents[i].position = log.position[log.flat(s, i)];
            world.agents[i].estimate = log.estimate[log.flat(s, i)];
        }
        double beta_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::size_t k = s * n + i;
            const int j = ring.neighbor(i);
            const double d = (world.agents[i].position - world.target).norm();
            const double beta = true_separation(world, i, j, config.eps_dist).radians();
            const double beta_hat = log.beta_hat[log.flat(s, i)];
            const double beta_star = config.beta_star[i].radians();

            err.xtilde_norm[k] = (world.agents[i].estimate - world.target).norm();
            err.distance[k] = d;
            err.delta[k] = d - config.d_star;
            err.rho[k] = d - log.dhat[log.flat(s, i)];
            err.beta_true[k] = beta;
            err.btilde[k] = beta - beta_star;
            err.thetatilde[k] = beta - beta_hat;
            err.betatilde[k] = beta_hat - beta_star;
            beta_sum += beta;
        }
        err.ordered[s] = std::abs(beta_sum - kTwoPi) < kOrderedTolerance ? 1 : 0;
    }

    err.corridor_floor.resize(n);
    for (int i = 0; i < n; ++i) {
        const double d0 = err.distance[i];
        const double xtilde0 = err.xtilde_norm[i];
        err.corridor_floor[i] = std::min(d0, config.d_star - xtilde0);
    }
    return err;
}

namespace {

// Composite-trapezoid prefix sums: integral over [t_a, t_b] on the grid is
// prefix[b] - prefix[a].
std::vector<double> trapezoid_prefix(std::span<const double> time, std::span<const double> f) {
    std::vector<double> prefix(time.size(), 0.0);
    for (std::size_t k = 1; k < time.size(); ++k)
        prefix[k] = prefix[k - 1] + 0.5 * (f[k] + f[k - 1]) * (time[k] - time[k - 1]);
    return prefix;
}

} // namespace

std::vector<double> pe_certificate_per_agent(const TrajectoryLog& log,
                                             const ScenarioConfig& config, double window_seconds,
                                             int directions) {
    if (directions < 4) throw ConfigError("pe_certificate: need at least 4 probe directions");
    const std::size_t samples = log.samples();
    if (samples < 2) throw ConfigError("pe_certificate: log too short");
    if (window_seconds > log.time.back() - log.time.front() + 1e-12)
        throw ConfigError("pe_certificate: window longer than the run");

    const double dt_log = log.time[1] - log.time[0];
    const std::size_t window = std::max<std::size_t>(1, std::llround(window_seconds / dt_log));

    std::vector<double> result(log.n, std::numeric_limits<double>::infinity());
    std::vector<double> integrand(samples);

    for (int agent = 0; agent < log.n; ++agent) {
        for (int k = 0; k < directions; ++k) {
            const double theta = kTwoPi * k / directions;
            const Vec2 probe{std::cos(theta), std::sin(theta)};
            for (std::size_t s = 0; s < samples; ++s) {
                const UnitVec2 phi =
                    unit_bearing(log.position[log.flat(s, agent)], config.target, config.eps_dist);
                const double along = probe.dot(rotate_cw_quarter(phi).vec());
                integrand[s] = along * along;
            }
            const std::vector<double> prefix = trapezoid_prefix(log.time, integrand);
            for (std::size_t s = 0; s + window < samples; ++s)
                result[agent] = std::min(result[agent], prefix[s + window] - prefix[s]);
            if (window >= samples) // single full-length window
                result[agent] = std::min(result[agent], prefix[samples - 1]);
        }
    }
    return result;
}

double pe_certificate(const TrajectoryLog& log, const ScenarioConfig& config,
                      double window_seconds, int directions) {
    const std::vector<double> per_agent =
        pe_certificate_per_agent(log, config, window_seconds, directions);
    return *std::min_element(per_agent.begin(), per_agent.end());
}

PerturbationSeries perturbation_decompose(const ErrorSeries& errors, const ScenarioConfig& config) {
    const int n = errors.n;
    const std::size_t samples = errors.samples();
    const RingTopology ring{n};
    const double k_omega = config.gains.k_omega;
    const double alpha = config.gains.alpha;

    PerturbationSeries pert;
    pert.n = n;
    pert.time = errors.time;
    pert.q.resize(samples * n);
    pert.g.resize(samples * n);
    pert.g_norm.resize(samples);

    double realized_min_distance = std::numeric_limits<double>::infinity();

    for (std::size_t s = 0; s < samples; ++s) {
        double norm_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const int j = ring.neighbor(i);
            const std::size_t ki = s * n + i;
            const std::size_t kj = s * n + j;
            const double d_i = errors.distance[ki];
            const double d_j = errors.distance[kj];
            const double bt_i = errors.btilde[ki];
            const double bt_j = errors.btilde[kj];
            const double th_i = errors.thetatilde[ki];
            const double th_j = errors.thetatilde[kj];

            const double q = (k_omega / config.d_star) * (bt_j - bt_i);
            const double g = alpha * k_omega * (1.0 / d_j - 1.0 / d_i) -
                             (k_omega / config.d_star) * (bt_j - bt_i) +
                             k_omega * ((bt_j - th_j) / d_j - (bt_i - th_i) / d_i);
            pert.q[ki] = q;
            pert.g[ki] = g;
            norm_sq += g * g;
            realized_min_distance = std::min(realized_min_distance, d_i);
        }
        pert.g_norm[s] = std::sqrt(norm_sq);
        pert.max_g_norm = std::max(pert.max_g_norm, pert.g_norm[s]);
    }

    const double numerator = std::sqrt(static_cast<double>(n)) * k_omega * (alpha + 14.0 * kPi);
    if (errors.corridor_hypothesis()) {
        const double floor =
            *std::min_element(errors.corridor_floor.begin(), errors.corridor_floor.end());
        pert.varpi_apriori = numerator / floor;
    } else {
        pert.varpi_apriori = std::numeric_limits<double>::quiet_NaN();
    }
    pert.varpi_posterior = numerator / realized_min_distance;
    return pert;
}

double NominalTrajectory::norm_at(std::size_t sample) const {
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = btilde[flat(sample, i)];
        sq += v * v;
    }
    return std::sqrt(sq);
}

NominalTrajectory nominal_reference(const std::vector<double>& b0, const ScenarioConfig& config) {
    const int n = static_cast<int>(b0.size());
    if (n < 2) throw ConfigError("nominal_reference: need at least two components");
    double sum = 0.0;
    for (double v : b0) sum += v;
    if (std::abs(sum) > 1e-9)
        throw SumNotZero("nominal_reference: initial error must sum to zero");

    const LaplacianMatrix laplacian = ring_laplacian(RingTopology{n});
    const double rate = config.gains.k_omega / config.d_star;

    auto apply = [&](const std::vector<double>& b, std::vector<double>& out) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += laplacian.at(i, j) * b[j];
            out[i] = -rate * acc;
        }
    };

    // Substep of at most 1e-3 s keeps the fourth-order error far below the
    // 1e-6 envelope slack even for coarse log grids.
    const int substeps = std::max(1, static_cast<int>(std::ceil(config.dt / 1e-3)));
    const double h = config.dt / substeps;

    const std::int64_t steps =
        config.t_end <= 0.0 ? 0 : static_cast<std::int64_t>(std::ceil(config.t_end / config.dt - 1e-9));

    NominalTrajectory traj;
    traj.n = n;

    std::vector<double> b = b0;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    auto log_sample = [&](double t) {
        traj.time.push_back(t);
        traj.btilde.insert(traj.btilde.end(), b.begin(), b.end());
    };

    for (std::int64_t step = 0; step < steps; ++step) {
        if (step % config.log_stride == 0) log_sample(static_cast<double>(step) * config.dt);
        for (int sub = 0; sub < substeps; ++sub) {
            apply(b, k1);
            for (int i = 0; i < n; ++i) tmp[i] = b[i] + 0.5 * h * k1[i];
            apply(tmp, k2);
            for (int i = 0; i < n; ++i) tmp[i] = b[i] + 0.5 * h * k2[i];
            apply(tmp, k3);
            for (int i = 0; i < n; ++i) tmp[i] = b[i] + h * k3[i];
            apply(tmp, k4);
            for (int i = 0; i < n; ++i)
                b[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    log_sample(static_cast<double>(steps) * config.dt);
    return traj;
}

std::vector<double> delta_oracle(const ErrorSeries& errors, const ScenarioConfig& config) {
    if (std::abs(config.gains.k_c - 1.0) > 1e-12)
        throw WrongGain("delta_oracle: exact solution requires k_c = 1");

    const int n = errors.n;
    const std::size_t samples = errors.samples();
    std::vector<double> oracle(samples * n);

    for (int i = 0; i < n; ++i) {
        const double delta0 = errors.delta[i];
        double convolution = 0.0;
        oracle[i] = delta0;
        for (std::size_t s = 1; s < samples; ++s) {
            const double step = errors.time[s] - errors.time[s - 1];
            const double decay = std::exp(-step);
            // Trapezoid panel of e^{-(t-tau)} rho(tau); earlier panels damp
            // by the same factor, so the running integral just decays too.
            convolution = decay * convolution +
                          0.5 * step *
                              (decay * errors.rho[errors.flat(s - 1, i)] +
                               errors.rho[errors.flat(s, i)]);
            oracle[errors.flat(s, i)] = delta0 * std::exp(-errors.time[s]) + convolution;
        }
    }
    return oracle;
}

double settling_time(std::span<const double> time, std::span<const double> series,
                     double tolerance) {
    if (!(tolerance > 0.0)) throw ConfigError("settling_time: tolerance must be positive");
    if (time.size() != series.size() || time.empty())
        throw ConfigError("settling_time: mismatched or empty series");

    std::size_t last_violation = time.size(); // sentinel: none
    for (std::size_t s = time.size(); s-- > 0;) {
        if (std::abs(series[s]) >= tolerance) {
            last_violation = s;
            break;
        }
    }
    if (last_violation == time.size()) return 0.0;
    if (last_violation + 1 == time.size()) return std::numeric_limits<double>::infinity();
    return time[last_violation + 1];
}

std::vector<double> unwrapped_bearing_angle(const TrajectoryLog& log, const ScenarioConfig& config,
                                            int agent) {
    std::vector<double> gamma(log.samples());
    double previous = 0.0;
    for (std::size_t s = 0; s < log.samples(); ++s) {
        const UnitVec2 phi =
            unit_bearing(log.position[log.flat(s, agent)], config.target, config.eps_dist);
        const double raw = phi.angle();
        if (s == 0) {
            gamma[s] = raw;
        } else {
            gamma[s] = gamma[s - 1] + wrap_to_pi(raw - previous);
        }
        previous = raw;
    }
    return gamma;
}

double log_linear_slope(std::span<const double> time, std::span<const double> values, double t_lo,
                        double t_hi, double floor_value) {
    double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
    std::size_t count = 0;
    for (std::size_t s = 0; s < time.size(); ++s) {
        if (time[s] < t_lo || time[s] > t_hi) continue;
        if (!(values[s] > floor_value)) continue;
        const double y = std::log(values[s]);
        sum_t += time[s];
        sum_y += y;
        sum_tt += time[s] * time[s];
        sum_ty += time[s] * y;
        ++count;
    }
    if (count < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = count * sum_tt - sum_t * sum_t;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (count * sum_ty - sum_t * sum_y) / denom;
}

} // namespace circumnav
