#include "circumnav/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace circumnav {

namespace {

void put(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

} // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log, const ErrorSeries& errors) {
    out << "t";
    for (int i = 1; i <= log.n; ++i) {
        out << ",x_" << i << ",y_" << i << ",xhat_" << i << ",yhat_" << i << ",u_x_" << i
            << ",u_y_" << i << ",psi_" << i << ",betahat_" << i << ",dhat_" << i << ",d_" << i
            << ",delta_" << i << ",btilde_" << i << ",xtilde_norm_" << i;
    }
    out << "\n";

    for (std::size_t s = 0; s < log.samples(); ++s) {
        put(out, log.time[s]);
        for (int i = 0; i < log.n; ++i) {
            const std::size_t k = log.flat(s, i);
            const double cols[13] = {
                log.position[k].x,  log.position[k].y,  log.estimate[k].x, log.estimate[k].y,
                log.control[k].x,   log.control[k].y,   log.psi[k],        log.beta_hat[k],
                log.dhat[k],        errors.distance[k], errors.delta[k],   errors.btilde[k],
                errors.xtilde_norm[k]};
            for (double c : cols) {
                out << ',';
                put(out, c);
            }
        }
        out << "\n";
    }
}

void write_trajectory_csv(const std::string& path, const TrajectoryLog& log,
                          const ErrorSeries& errors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write CSV to '" + path + "'");
    write_trajectory_csv(out, log, errors);
}

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 520;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;
constexpr std::size_t kMaxPointsPerSeries = 2000;

const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series, bool equal_axes) {
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const PlotSeries& s : series) {
        for (double v : s.x) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
        for (double v : s.y) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
    }
    if (!(x_min < x_max)) { x_min -= 1.0; x_max += 1.0; }
    if (!(y_min < y_max)) { y_min -= 1.0; y_max += 1.0; }
    if (equal_axes) {
        const double half = 0.5 * std::max(x_max - x_min, y_max - y_min);
        const double cx = 0.5 * (x_min + x_max), cy = 0.5 * (y_min + y_max);
        x_min = cx - half; x_max = cx + half;
        y_min = cy - half; y_max = cy + half;
    }
    const double x_pad = 0.04 * (x_max - x_min);
    const double y_pad = 0.06 * (y_max - y_min);
    x_min -= x_pad; x_max += x_pad;
    y_min -= y_pad; y_max += y_pad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\""
        << " text-anchor=\"middle\">" << title << "</text>\n";

    // Axes with 6 ticks per side.
    svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = x_min + (x_max - x_min) * t / 5.0;
        const double yv = y_min + (y_max - y_min) * t / 5.0;
        svg << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << kMarginTop << "\" x2=\"" << num(px(xv))
            << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"#ddd\"/>\n";
        svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(py(yv)) << "\" x2=\""
            << kMarginLeft + plot_w << "\" y2=\"" << num(py(yv)) << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << kHeight - kMarginBottom + 16
            << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        svg << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << num(py(yv) + 4)
            << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << kHeight / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
        << " transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const PlotSeries& s = series[k];
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / kMaxPointsPerSeries);
        svg << "<polyline fill=\"none\" stroke=\"" << kPalette[k % 8]
            << "\" stroke-width=\"1.4\" points=\"";
        for (std::size_t p = 0; p < s.x.size(); p += stride)
            svg << num(px(s.x[p])) << "," << num(py(s.y[p])) << " ";
        if (!s.x.empty() && (s.x.size() - 1) % stride != 0)
            svg << num(px(s.x.back())) << "," << num(py(s.y.back()));
        svg << "\"/>\n";
        svg << "<text x=\"" << kMarginLeft + 10 << "\" y=\"" << kMarginTop + 16 + 15 * k
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kPalette[k % 8] << "\">"
            << s.label << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write SVG to '" + path + "'");
    out << svg.str();
}

void write_run_plots(const std::string& dir, const TrajectoryLog& log, const ErrorSeries& errors,
                     const ScenarioConfig& config) {
    const std::size_t samples = log.samples();

    std::vector<PlotSeries> paths;
    for (int i = 0; i < log.n; ++i) {
        PlotSeries s;
        s.label = "agent " + std::to_string(i + 1);
        s.x.reserve(samples);
        s.y.reserve(samples);
        for (std::size_t k = 0; k < samples; ++k) {
            s.x.push_back(log.position[log.flat(k, i)].x);
            s.y.push_back(log.position[log.flat(k, i)].y);
        }
        paths.push_back(std::move(s));
    }
    { // desired circle around the target, for reference
        PlotSeries circle;
        circle.label = "desired orbit";
        for (int t = 0; t <= 128; ++t) {
            const double a = kTwoPi * t / 128;
            circle.x.push_back(config.target.x + config.d_star * std::cos(a));
            circle.y.push_back(config.target.y + config.d_star * std::sin(a));
        }
        paths.push_back(std::move(circle));
    }
    write_line_chart_svg(dir + "/trajectories.svg", "Agent trajectories", "x [m]", "y [m]", paths,
                         /*equal_axes=*/true);

    auto per_agent_panel = [&](const std::vector<double>& flat, const std::string& file,
                               const std::string& title, const std::string& y_label) {
        std::vector<PlotSeries> panel;
        for (int i = 0; i < log.n; ++i) {
            PlotSeries s;
            s.label = "agent " + std::to_string(i + 1);
            s.x = log.time;
            s.y.reserve(samples);
            for (std::size_t k = 0; k < samples; ++k) s.y.push_back(flat[k * log.n + i]);
            panel.push_back(std::move(s));
        }
        write_line_chart_svg(dir + "/" + file, title, "t [s]", y_label, panel);
    };

    per_agent_panel(errors.xtilde_norm, "xtilde.svg", "Estimate error norms", "||xtilde_i|| [m]");
    per_agent_panel(errors.delta, "delta.svg", "Distance errors", "delta_i [m]");
    per_agent_panel(errors.btilde, "btilde.svg", "Separation errors", "btilde_i [rad]");
}

} // namespace circumnav
