#pragma once
/**
 * @file cli.hpp
 * @brief Entry points behind the command-line tool: run, verify, sweep.
 *
 * Exit codes: 0 success; 1 configuration problem (bad file, invalid
 * scenario, alpha gate); 2 runtime failure (degenerate bearing, non-finite
 * state); 3 verification checks failed / sweep had crashed runs.
 */

#include "circumnav/scenario.hpp"

#include <optional>
#include <string>

namespace circumnav {

struct CliOptions {
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<int> log_stride;
    std::optional<Integrator> integrator;
    bool plots = false;
    bool allow_unsafe_alpha = false;
    bool baseline = false;
    EvalMode mode = EvalMode::Auto;
};

/// Apply command-line overrides on top of a parsed scenario.
ScenarioConfig apply_options(ScenarioConfig config, const CliOptions& options);

/// Run one scenario; write trajectory.csv, summary.txt, and (optionally)
/// the four SVG panels into `out_dir`.
int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const CliOptions& options);

/// Run, then evaluate the full invariant battery; write verify_report.json
/// and summary.txt. The log stride is forced to 1 so the finite-difference
/// checks see the integration grid.
int cmd_verify(const std::string& scenario_path, const std::string& out_dir,
               const CliOptions& options);

/// Run every grid point of a sweep file (points execute in parallel), one
/// summary per point plus an order-independent aggregate.csv.
int cmd_sweep(const std::string& sweep_path, const std::string& out_dir,
              const CliOptions& options);

} // namespace circumnav
