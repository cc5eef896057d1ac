#pragma once
/**
 * @file scenario.hpp
 * @brief Scenario and sweep file formats, plus seeded random scenario
 *        generation for sweeps and property batteries.
 *
 * Scenario files are plain text: `key value` lines, `key { ... }` sections,
 * and `key [a, b, ...]` arrays whose entries may hold several scalars
 * (coordinate pairs). `#` starts a comment. Angles accept plain radians or
 * rational multiples of pi ("5pi/18", "pi/9", "3.5pi").
 */

#include "circumnav/sim.hpp"

#include <string>
#include <vector>

namespace circumnav {

/// Parse "5pi/18", "pi", "-pi/2", "3.5pi", or a plain number, into radians.
double parse_angle_token(const std::string& token);

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& name_hint);
ScenarioConfig parse_scenario_file(const std::string& path);

/// Canonical text form; parse(serialize(parse(f))) == parse(f).
std::string serialize_scenario(const ScenarioConfig& config);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// One axis of a sweep grid.
struct SweepAxis {
    std::string key;            ///< n, seed, dt, t_end, k_est, k_c, k_omega, alpha, integrator
    std::vector<double> values; ///< integrator encoded as 0 = euler, 1 = rk4
};

struct SweepSpec {
    std::string name = "sweep";
    ScenarioConfig base;
    std::vector<SweepAxis> axes;
};

/// Sweep file: `name`, `base <scenario-path>` (relative to the sweep file)
/// or `base { ...scenario body... }`, and a `grid { key [values] ... }`.
SweepSpec parse_sweep_file(const std::string& path);

/// Cartesian product of the grid over the base scenario. Points that change
/// n or seed get regenerated initial conditions (seeded, deterministic);
/// otherwise the base initial conditions are kept.
std::vector<ScenarioConfig> expand_sweep(const SweepSpec& spec);

/// Deterministic randomized scenario: agents scattered in ring order around
/// the target at radii in [0.6, 1.8] d_star, estimates within 0.5 d_star of
/// the target (so the distance-corridor hypothesis holds), and a random
/// positive separation target summing to 2*pi.
ScenarioConfig randomized_scenario(int n, std::uint64_t seed, double d_star = 1.2);

} // namespace circumnav
