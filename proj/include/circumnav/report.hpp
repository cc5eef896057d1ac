#pragma once
/**
 * @file report.hpp
 * @brief Run summaries and the run-level verification battery.
 *
 * verify_run() evaluates every module invariant that is observable on a
 * trajectory log. Checks whose hypotheses the scenario does not satisfy
 * report Skipped, not Fail. Convergence checks are horizon-bound: a run too
 * short to settle fails them honestly.
 */

#include "circumnav/analysis.hpp"

#include <string>
#include <vector>

namespace circumnav {

/// Settling tolerances used by summaries and convergence checks.
inline constexpr double kSettleTolSeparation = 0.01; // rad
inline constexpr double kSettleTolDistance = 0.01;   // m
inline constexpr double kSettleTolEstimate = 0.01;   // m

struct CheckResult {
    enum class Status { Pass, Fail, Skipped };
    std::string name;
    Status status = Status::Skipped;
    double margin = 0.0; ///< how far inside the bound (negative = violated)
    std::string detail;
};

struct RunSummary {
    std::string scenario;
    int n = 0;
    double t_end = 0.0;

    double final_xtilde_max = 0.0; ///< max over agents at t_end
    double final_delta_max = 0.0;
    double final_btilde_max = 0.0;

    double settling_xtilde = 0.0; ///< worst agent, kSettleTol* tolerances
    double settling_delta = 0.0;
    double settling_btilde = 0.0;

    double kappa_alpha = 0.0; ///< NaN when the alpha gate was overridden and fails
    double lambda2 = 0.0;
    double varpi_apriori = 0.0;
    double varpi_posterior = 0.0;
    double max_g_norm = 0.0;

    double min_distance = 0.0;
    double max_distance = 0.0;
    bool ordering_maintained = true;
    double ordering_lost_time = 0.0; ///< meaningful only when !ordering_maintained

    std::vector<CheckResult> checks;
};

std::vector<CheckResult> verify_run(const TrajectoryLog& log, const ScenarioConfig& config,
                                    const ErrorSeries& errors);

RunSummary summarize_run(const TrajectoryLog& log, const ScenarioConfig& config,
                         const ErrorSeries& errors, bool with_checks);

/// Plain-text key/value rendering of a summary.
std::string summary_text(const RunSummary& summary);

/// Machine-readable report (JSON).
std::string report_json(const RunSummary& summary);

} // namespace circumnav
