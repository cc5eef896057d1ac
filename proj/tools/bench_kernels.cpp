// Timing comparison of the serial reference derivative kernel against the
// OpenMP-parallel one, over growing crowd sizes. The two paths must agree
// bit for bit; this program also spot-checks that while timing.

#include "circumnav/scenario.hpp"
#include "circumnav/sim.hpp"

#include <cstdio>
#include <cmath>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
static double now() { return omp_get_wtime(); }
#else
#include <chrono>
static double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}
#endif

int main(int argc, char** argv) {
    using namespace circumnav;

    int repeats = 200;
    if (argc > 1) repeats = std::atoi(argv[1]);

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%8s %12s %12s %9s %s\n", "n", "serial[ms]", "parallel[ms]", "speedup",
                "bit-identical");

    for (int n : {64, 512, 4096}) {
        // Hand-built crowd: deterministic, no validity probing (the kernel
        // does not care whether the formation would stay in order).
        ScenarioConfig config;
        config.name = "bench";
        config.n = n;
        config.target = {0, 0};
        config.d_star = 1.2;
        config.gains = {5.0, 1.5, 1.0, 3.5 * kPi};
        for (int i = 0; i < n; ++i) {
            const double theta = kTwoPi * i / n;
            const double radius = 1.0 + 0.4 * std::sin(3.0 * theta);
            config.beta_star.push_back(Angle::wrap(kTwoPi / n));
            config.initial_positions.push_back(
                {radius * std::cos(theta), radius * std::sin(theta)});
            config.initial_estimates.push_back(
                {0.2 * std::sin(7.0 * theta), 0.2 * std::cos(5.0 * theta)});
        }
        const WorldState world = config.initial_world();

        // Warm-up and correctness: the parallel kernel must reproduce the
        // serial reference exactly.
        const StateDerivative ref = derivative(world, config, EvalMode::Serial);
        const StateDerivative par = derivative(world, config, EvalMode::Parallel);
        const bool identical =
            std::memcmp(ref.position_rate.data(), par.position_rate.data(),
                        ref.position_rate.size() * sizeof(Vec2)) == 0 &&
            std::memcmp(ref.estimate_rate.data(), par.estimate_rate.data(),
                        ref.estimate_rate.size() * sizeof(Vec2)) == 0;

        StateDerivative scratch;
        double t0 = now();
        for (int r = 0; r < repeats; ++r) derivative(world, config, scratch, EvalMode::Serial);
        const double serial_ms = (now() - t0) * 1e3 / repeats;

        t0 = now();
        for (int r = 0; r < repeats; ++r) derivative(world, config, scratch, EvalMode::Parallel);
        const double parallel_ms = (now() - t0) * 1e3 / repeats;

        std::printf("%8d %12.4f %12.4f %8.2fx %s\n", n, serial_ms, parallel_ms,
                    serial_ms / parallel_ms, identical ? "yes" : "NO");
        if (!identical) return 1;
    }
    return 0;
}
