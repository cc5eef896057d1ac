#pragma once
/**
 * @file output.hpp
 * @brief Trajectory CSV and deterministic SVG line charts.
 */

#include "circumnav/analysis.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace circumnav {

/// Column schema (header row): t, then per agent i (1-based):
///   x_i, y_i, xhat_i, yhat_i, u_x_i, u_y_i, psi_i, betahat_i, dhat_i,
///   d_i, delta_i, btilde_i, xtilde_norm_i.
/// Values are printed with %.17g; identical runs produce identical bytes.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log, const ErrorSeries& errors);
void write_trajectory_csv(const std::string& path, const TrajectoryLog& log,
                          const ErrorSeries& errors);

/// One data series for a chart.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Fixed-size, fixed-style SVG line chart. Long series are decimated with a
/// deterministic stride.
void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series, bool equal_axes = false);

/// The four standard panels: agent trajectories, estimate-error norms,
/// distance errors, and separation errors. Files are written into `dir`.
void write_run_plots(const std::string& dir, const TrajectoryLog& log, const ErrorSeries& errors,
                     const ScenarioConfig& config);

} // namespace circumnav
