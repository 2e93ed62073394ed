#pragma once

#include <iosfwd>

#include "riv/cli/config.hpp"
#include "riv/harness.hpp"

namespace riv::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,         ///< ran, no detection
    kExitUsage = 1,      ///< usage or configuration error
    kExitDetection = 2,  ///< ran, at least one decision rejected H0
    kExitData = 3,       ///< unreadable or malformed data
};

/// Whole-file residual information report as JSON on `out`.
int cmd_estimate(const EstimateOptions& options, std::ostream& out, std::ostream& err);

/// Writes x1,x2,y rows of a synthetic system to options.out.
int cmd_synth(const SynthOptions& options, std::ostream& out, std::ostream& err);

/// Writes mean.csv, std.csv and meta.json into options.out_dir.
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

/// Sliding-window monitor emitting one JSON line per window. `input` is read
/// when the data path is "-".
int cmd_monitor(const MonitorOptions& options, std::istream& input, std::ostream& out, std::ostream& err);

/// Empirical significance level or power as JSON.
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

/// Serialises a grid result as two CSV matrices plus a JSON sidecar.
void write_grid_result(const harness::GridResult& result, const std::string& directory);

}  // namespace riv::cli
