#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "riv/estimator.hpp"
#include "riv/harness.hpp"
#include "riv/systems.hpp"

namespace riv::cli {

inline constexpr std::size_t kMinWindow = 16;

struct Window {
    std::size_t size = 0;
    std::size_t stride = 1;
};

/// Which columns of which file feed the pipeline.
struct DataConfig {
    std::string data_path;
    std::vector<std::string> x_cols;
    std::vector<std::string> y_cols;
    std::optional<std::string> prediction_path;
    std::optional<Window> window;

    /// Column-list and window checks that do not need the file. Throws ConfigError.
    void validate() const;
};

/// How the nominal model is obtained.
struct ModelChoice {
    std::string fit;      ///< "linear" or empty
    std::string nominal;  ///< synthetic family name or empty
};

struct EstimateOptions {
    DataConfig data;
    Schedule schedule;
    ModelChoice model;
    bool rif = false;
    bool debias = true;
    std::optional<std::string> csv_out;
};

struct SynthOptions {
    std::string family = "linear";
    std::array<double, 2> delta{0.0, 0.0};
    std::size_t n = 2000;
    std::uint64_t seed = 0;
    std::string out;
};

struct SweepOptions {
    std::string family = "linear";
    harness::GridSpec grid;
    Schedule schedule;
    std::string out_dir;
    std::size_t threads = 0;
    bool full_scale = false;
};

struct MonitorOptions {
    DataConfig data;  ///< data_path "-" reads standard input
    Schedule schedule;
    ModelChoice model;
    bool rif = false;
    bool debias = true;
};

struct BenchOptions {
    std::string family = "linear";
    std::array<double, 2> delta{0.0, 0.0};
    std::size_t n = 2000;
    std::size_t trials = 100;
    std::string truth = "h0";
    std::uint64_t seed = 0;
    Schedule schedule;
    std::size_t threads = 0;
};

/// Reads a JSON config file. Throws ConfigError.
nlohmann::json load_config_file(const std::string& path);

/// Copy recognised keys of a config object into options; unknown keys are an error.
void apply_config(const nlohmann::json& config, EstimateOptions& options);
void apply_config(const nlohmann::json& config, SynthOptions& options);
void apply_config(const nlohmann::json& config, SweepOptions& options);
void apply_config(const nlohmann::json& config, MonitorOptions& options);
void apply_config(const nlohmann::json& config, BenchOptions& options);

nlohmann::json to_json(const Schedule& schedule);

}  // namespace riv::cli
