// rivtool: residual information drift detection from the command line.

#include <CLI11.hpp>
#include <cstring>
#include <iostream>

#include "riv/cli/commands.hpp"
#include "riv/cli/csv.hpp"

namespace {

using namespace riv::cli;

void add_schedule_flags(CLI::App* cmd, riv::Schedule& s) {
    cmd->add_option("--lambda", s.lambda, "pruning regularization factor")->capture_default_str();
    cmd->add_option("--w", s.w, "cell-size scale: cells hold at most n*w*n^-l samples")->capture_default_str();
    cmd->add_option("--l", s.l, "cell-size exponent in (0, 1/3)")->capture_default_str();
    cmd->add_option("--a0", s.a0, "threshold scale: a_n = a0*n^(-1/6)")->capture_default_str();
}

void add_model_flags(CLI::App* cmd, DataConfig& data, ModelChoice& model) {
    cmd->add_option("--x", data.x_cols, "input column names")->delimiter(',');
    cmd->add_option("--y", data.y_cols, "output column names")->delimiter(',');
    cmd->add_option("--predictions", data.prediction_path, "prediction table CSV (x_1..x_p, yhat_1..yhat_q)");
    cmd->add_option("--fit", model.fit, "fit a nominal model on the data (linear)");
    cmd->add_option("--nominal", model.nominal, "use the nominal map of a synthetic family");
}

// Finds "--config <path>" or "--config=<path>" in argv.
std::optional<std::string> find_config(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return std::string(argv[i + 1]);
        if (std::strncmp(argv[i], "--config=", 9) == 0) return std::string(argv[i] + 9);
    }
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Residual information value (RIV) model drift detection"};
    app.require_subcommand(1);

    EstimateOptions estimate;
    SynthOptions synth;
    SweepOptions sweep;
    MonitorOptions monitor;
    BenchOptions bench;
    std::optional<std::size_t> window_size;
    std::optional<std::size_t> window_stride;
    bool no_debias_estimate = false;
    bool no_debias_monitor = false;
    std::string config_path;

    // Flags override config file values, so the file is applied before parsing.
    const auto config_file = find_config(argc, argv);
    const std::string sub = argc > 1 ? argv[1] : "";
    try {
        if (config_file) {
            const auto cfg = load_config_file(*config_file);
            if (sub == "estimate") apply_config(cfg, estimate);
            if (sub == "synth") apply_config(cfg, synth);
            if (sub == "sweep") apply_config(cfg, sweep);
            if (sub == "monitor") apply_config(cfg, monitor);
            if (sub == "bench") apply_config(cfg, bench);
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (monitor.data.data_path.empty()) monitor.data.data_path = "-";

    auto* est = app.add_subcommand("estimate", "RIV (and optional RIF) of a whole CSV file");
    est->add_option("--config", config_path, "JSON config file (flags override)");
    est->add_option("--data", estimate.data.data_path, "data CSV");
    add_model_flags(est, estimate.data, estimate.model);
    est->add_flag("--rif", estimate.rif, "also report per-input RIF values");
    est->add_flag("--no-debias", no_debias_estimate, "skip residual bias correction");
    est->add_option("--csv", estimate.csv_out, "also write the report as CSV");
    add_schedule_flags(est, estimate.schedule);

    auto* syn = app.add_subcommand("synth", "generate a synthetic benchmark system sample");
    syn->add_option("--config", config_path, "JSON config file (flags override)");
    syn->add_option("--family", synth.family, "linear|polynomial|trigonometric|mlp|arx|narx")->capture_default_str();
    syn->add_option("--delta", synth.delta, "drift delta1,delta2")->delimiter(',');
    syn->add_option("--n", synth.n, "rows")->capture_default_str();
    syn->add_option("--seed", synth.seed, "seed")->capture_default_str();
    syn->add_option("--out", synth.out, "output CSV path");

    auto* swp = app.add_subcommand("sweep", "delta-grid sweep of a drift quantification method");
    swp->add_option("--config", config_path, "JSON config file (flags override)");
    swp->add_option("--family", sweep.family, "system family")->capture_default_str();
    std::string method(riv::harness::to_string(sweep.grid.method));
    swp->add_option("--method", method, "riv|mapc|rmse")->capture_default_str();
    swp->add_option("--delta-min", sweep.grid.delta_min)->capture_default_str();
    swp->add_option("--delta-max", sweep.grid.delta_max)->capture_default_str();
    swp->add_option("--step", sweep.grid.step)->capture_default_str();
    swp->add_option("--seeds", sweep.grid.seeds, "replicate seeds")->delimiter(',');
    swp->add_option("--n", sweep.grid.n, "samples per cell")->capture_default_str();
    swp->add_option("--out", sweep.out_dir, "output directory");
    swp->add_option("--threads", sweep.threads, "worker threads (0 = all cores)");
    swp->add_flag("--full-scale", sweep.full_scale, "201x201 grid over 10 seeds (slow)");
    add_schedule_flags(swp, sweep.schedule);

    auto* mon = app.add_subcommand("monitor", "sliding-window RIV monitor emitting JSON lines");
    mon->add_option("--config", config_path, "JSON config file (flags override)");
    mon->add_option("--data", monitor.data.data_path, "data CSV, '-' for stdin")->capture_default_str();
    add_model_flags(mon, monitor.data, monitor.model);
    mon->add_option("--window", window_size, "window size in rows (>= 16)");
    mon->add_option("--stride", window_stride, "rows between windows (default: window size)");
    mon->add_flag("--rif", monitor.rif, "also report per-input RIF values");
    mon->add_flag("--no-debias", no_debias_monitor, "skip per-window bias correction");
    add_schedule_flags(mon, monitor.schedule);

    auto* ben = app.add_subcommand("bench", "empirical significance level or power");
    ben->add_option("--config", config_path, "JSON config file (flags override)");
    ben->add_option("--family", bench.family, "system family")->capture_default_str();
    ben->add_option("--delta", bench.delta, "drift delta1,delta2")->delimiter(',');
    ben->add_option("--n", bench.n, "samples per trial")->capture_default_str();
    ben->add_option("--trials", bench.trials, "number of trials")->capture_default_str();
    ben->add_option("--truth", bench.truth, "h0 or h1")->capture_default_str();
    ben->add_option("--seed", bench.seed, "base seed")->capture_default_str();
    ben->add_option("--threads", bench.threads, "worker threads (0 = all cores)");
    add_schedule_flags(ben, bench.schedule);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*est) {
        if (no_debias_estimate) estimate.debias = false;
        return cmd_estimate(estimate, std::cout, std::cerr);
    }
    if (*syn) return cmd_synth(synth, std::cout, std::cerr);
    if (*swp) {
        try {
            sweep.grid.method = riv::harness::parse_method(method);
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return kExitUsage;
        }
        return cmd_sweep(sweep, std::cout, std::cerr);
    }
    if (*mon) {
        if (no_debias_monitor) monitor.debias = false;
        if (window_size) {
            Window w = monitor.data.window.value_or(Window{});
            w.size = *window_size;
            if (!monitor.data.window) w.stride = *window_size;
            monitor.data.window = w;
        }
        if (window_stride) {
            if (!monitor.data.window) {
                std::cerr << "config error: --stride needs --window\n";
                return kExitUsage;
            }
            monitor.data.window->stride = *window_stride;
        }
        std::ios::sync_with_stdio(false);
        return cmd_monitor(monitor, std::cin, std::cout, std::cerr);
    }
    if (*ben) return cmd_bench(bench, std::cout, std::cerr);
    return kExitUsage;
}
