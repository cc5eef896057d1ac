#include "circumnav/cli.hpp"

#include "circumnav/output.hpp"
#include "circumnav/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace circumnav {

namespace fs = std::filesystem;

ScenarioConfig apply_options(ScenarioConfig config, const CliOptions& options) {
    if (options.dt) config.dt = *options.dt;
    if (options.t_end) config.t_end = *options.t_end;
    if (options.log_stride) config.log_stride = *options.log_stride;
    if (options.integrator) config.integrator = *options.integrator;
    if (options.allow_unsafe_alpha) config.allow_unsafe_alpha = true;
    if (options.baseline) config.baseline_controller = true;
    return config;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

int classify(const std::exception& e) {
    if (dynamic_cast<const DegenerateBearing*>(&e) || dynamic_cast<const NonFiniteState*>(&e))
        return 2;
    return 1;
}

} // namespace

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const CliOptions& options) {
    try {
        const ScenarioConfig config = apply_options(parse_scenario_file(scenario_path), options);
        config.validate();
        fs::create_directories(out_dir);

        const TrajectoryLog log = run(config, options.mode);
        const ErrorSeries errors = compute_errors(log, config);

        write_trajectory_csv(out_dir + "/trajectory.csv", log, errors);
        const RunSummary summary = summarize_run(log, config, errors, /*with_checks=*/false);
        write_text(fs::path(out_dir) / "summary.txt", summary_text(summary));
        if (options.plots) write_run_plots(out_dir, log, errors, config);

        std::cout << summary_text(summary);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
}

int cmd_verify(const std::string& scenario_path, const std::string& out_dir,
               const CliOptions& options) {
    try {
        ScenarioConfig config = apply_options(parse_scenario_file(scenario_path), options);
        config.log_stride = 1; // checks difference the integration grid
        config.validate();
        fs::create_directories(out_dir);

        const TrajectoryLog log = run(config, options.mode);
        const ErrorSeries errors = compute_errors(log, config);
        const RunSummary summary = summarize_run(log, config, errors, /*with_checks=*/true);

        write_text(fs::path(out_dir) / "verify_report.json", report_json(summary));
        write_text(fs::path(out_dir) / "summary.txt", summary_text(summary));
        if (options.plots) write_run_plots(out_dir, log, errors, config);

        int failures = 0;
        for (const CheckResult& c : summary.checks) {
            std::printf("[%s] %s margin=%.6g %s\n",
                        c.status == CheckResult::Status::Pass      ? "PASS"
                        : c.status == CheckResult::Status::Skipped ? "SKIP"
                                                                   : "FAIL",
                        c.name.c_str(), c.margin, c.detail.c_str());
            if (c.status == CheckResult::Status::Fail) ++failures;
        }
        if (failures > 0) {
            std::cerr << failures << " check(s) failed\n";
            return 3;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
}

int cmd_sweep(const std::string& sweep_path, const std::string& out_dir,
              const CliOptions& options) {
    std::vector<ScenarioConfig> points;
    try {
        SweepSpec spec = parse_sweep_file(sweep_path);
        spec.base = apply_options(spec.base, options);
        points = expand_sweep(spec);
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const int total = static_cast<int>(points.size());
    std::vector<RunSummary> summaries(total);
    std::vector<std::string> failures(total);
    std::vector<int> ok(total, 0);

    // Grid points are independent; one writer per run directory.
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < total; ++p) {
        try {
            const ScenarioConfig& config = points[p];
            config.validate();
            const TrajectoryLog log = run(config, EvalMode::Serial);
            const ErrorSeries errors = compute_errors(log, config);
            summaries[p] = summarize_run(log, config, errors, /*with_checks=*/false);

            char dir_name[32];
            std::snprintf(dir_name, sizeof(dir_name), "run_%04d", p);
            const fs::path run_dir = fs::path(out_dir) / dir_name;
            fs::create_directories(run_dir);
            write_text(run_dir / "summary.txt", summary_text(summaries[p]));
            write_text(run_dir / "scenario.txt", serialize_scenario(config));
            ok[p] = 1;
        } catch (const std::exception& e) {
            failures[p] = e.what();
        }
    }

    // Aggregate is assembled in grid order, so completion order cannot
    // change the output.
    std::ostringstream aggregate;
    aggregate << "index,scenario,n,dt,t_end,k_est,k_c,k_omega,alpha,seed,status,"
                 "final_xtilde_max,final_delta_max,final_btilde_max,"
                 "settling_btilde,lambda2,max_g_norm\n";
    int crashed = 0;
    for (int p = 0; p < total; ++p) {
        const ScenarioConfig& c = points[p];
        aggregate << p << ',' << c.name << ',' << c.n << ',' << c.dt << ',' << c.t_end << ','
                  << c.gains.k_est << ',' << c.gains.k_c << ',' << c.gains.k_omega << ','
                  << c.gains.alpha << ',' << c.seed << ',';
        if (ok[p]) {
            const RunSummary& s = summaries[p];
            aggregate << "ok," << s.final_xtilde_max << ',' << s.final_delta_max << ','
                      << s.final_btilde_max << ',' << s.settling_btilde << ',' << s.lambda2 << ','
                      << s.max_g_norm << "\n";
        } else {
            ++crashed;
            std::string what = failures[p];
            std::replace(what.begin(), what.end(), ',', ';');
            aggregate << "failed: " << what << ",,,,,,\n";
        }
    }
    try {
        write_text(fs::path(out_dir) / "aggregate.csv", aggregate.str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::cout << "sweep: " << (total - crashed) << "/" << total << " runs completed\n";
    if (crashed > 0) {
        std::cerr << crashed << " run(s) failed\n";
        return 3;
    }
    return 0;
}

} // namespace circumnav
