#include "riv/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "riv/cli/csv.hpp"

namespace riv::cli {

using nlohmann::json;

void DataConfig::validate() const {
    if (data_path.empty()) throw ConfigError("no data file given");
    if (x_cols.empty()) throw ConfigError("no input (x) columns given");
    if (y_cols.empty()) throw ConfigError("no output (y) columns given");
    std::set<std::string> seen;
    for (const auto& c : x_cols) {
        if (!seen.insert(c).second) throw ConfigError("column '" + c + "' listed twice");
    }
    for (const auto& c : y_cols) {
        if (!seen.insert(c).second) throw ConfigError("column '" + c + "' listed twice or used as both x and y");
    }
    if (window) {
        if (window->size < kMinWindow) {
            throw ConfigError("window size " + std::to_string(window->size) + " is below the minimum of " +
                              std::to_string(kMinWindow));
        }
        if (window->stride < 1) throw ConfigError("window stride must be at least 1");
    }
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        json j = json::parse(in);
        if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

namespace {

// Applies each recognised key through its setter; rejects the rest.
class Reader {
public:
    explicit Reader(const json& config) : config_(config) {}

    template <typename T>
    void get(const char* key, T& target) {
        seen_.insert(key);
        auto it = config_.find(key);
        if (it == config_.end()) return;
        try {
            target = it->template get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }

    template <typename T>
    void get_optional(const char* key, std::optional<T>& target) {
        seen_.insert(key);
        auto it = config_.find(key);
        if (it == config_.end() || it->is_null()) return;
        T value{};
        get(key, value);
        target = value;
    }

    void schedule(Schedule& s) {
        seen_.insert("schedule");
        auto it = config_.find("schedule");
        if (it == config_.end()) return;
        if (!it->is_object()) throw ConfigError("config key 'schedule' must be an object");
        Reader inner(*it);
        inner.get("lambda", s.lambda);
        inner.get("w", s.w);
        inner.get("l", s.l);
        inner.get("a0", s.a0);
        inner.finish("schedule.");
    }

    void data(DataConfig& d) {
        get("data", d.data_path);
        get("x_cols", d.x_cols);
        get("y_cols", d.y_cols);
        get_optional("predictions", d.prediction_path);
        seen_.insert("window");
        auto it = config_.find("window");
        if (it != config_.end() && !it->is_null()) {
            if (!it->is_object()) throw ConfigError("config key 'window' must be an object");
            Reader inner(*it);
            Window w;
            inner.get("size", w.size);
            inner.get("stride", w.stride);
            inner.finish("window.");
            d.window = w;
        }
    }

    void model(ModelChoice& m) {
        get("fit", m.fit);
        get("nominal", m.nominal);
    }

    void finish(const std::string& prefix = "") const {
        for (auto it = config_.begin(); it != config_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError("unknown config key '" + prefix + it.key() + "'");
        }
    }

private:
    const json& config_;
    std::set<std::string> seen_;
};

}  // namespace

void apply_config(const json& config, EstimateOptions& o) {
    Reader r(config);
    r.data(o.data);
    r.schedule(o.schedule);
    r.model(o.model);
    r.get("rif", o.rif);
    r.get("debias", o.debias);
    r.get_optional("csv_out", o.csv_out);
    r.finish();
}

void apply_config(const json& config, SynthOptions& o) {
    Reader r(config);
    r.get("family", o.family);
    r.get("delta", o.delta);
    r.get("n", o.n);
    r.get("seed", o.seed);
    r.get("out", o.out);
    r.finish();
}

void apply_config(const json& config, SweepOptions& o) {
    Reader r(config);
    r.get("family", o.family);
    std::string method(harness::to_string(o.grid.method));
    r.get("method", method);
    o.grid.method = harness::parse_method(method);
    r.get("delta_min", o.grid.delta_min);
    r.get("delta_max", o.grid.delta_max);
    r.get("step", o.grid.step);
    r.get("seeds", o.grid.seeds);
    r.get("n", o.grid.n);
    r.schedule(o.schedule);
    r.get("out", o.out_dir);
    r.get("threads", o.threads);
    r.get("full_scale", o.full_scale);
    r.finish();
}

void apply_config(const json& config, MonitorOptions& o) {
    Reader r(config);
    r.data(o.data);
    r.schedule(o.schedule);
    r.model(o.model);
    r.get("rif", o.rif);
    r.get("debias", o.debias);
    r.finish();
}

void apply_config(const json& config, BenchOptions& o) {
    Reader r(config);
    r.get("family", o.family);
    r.get("delta", o.delta);
    r.get("n", o.n);
    r.get("trials", o.trials);
    r.get("truth", o.truth);
    r.get("seed", o.seed);
    r.schedule(o.schedule);
    r.get("threads", o.threads);
    r.finish();
}

json to_json(const Schedule& s) { return json{{"lambda", s.lambda}, {"w", s.w}, {"l", s.l}, {"a0", s.a0}}; }

}  // namespace riv::cli
