#include "riv/cli/commands.hpp"

#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "riv/cli/csv.hpp"
#include "riv/detector.hpp"
#include "riv/error.hpp"
#include "riv/pipeline.hpp"

namespace riv::cli {

using nlohmann::json;

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const DegenerateFit& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const DegenerateInput& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    }
}

std::vector<std::size_t> resolve(const NumericTable& table, const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (const auto& name : names) idx.push_back(table.require_column(name));
    return idx;
}

JointSample select(const NumericTable& table, const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys) {
    JointSample out(xs.size(), ys.size());
    out.reserve(table.rows);
    std::vector<double> row(xs.size() + ys.size());
    for (std::size_t i = 0; i < table.rows; ++i) {
        std::size_t k = 0;
        for (std::size_t c : xs) row[k++] = table.at(i, c);
        for (std::size_t c : ys) row[k++] = table.at(i, c);
        out.push_row(row);
    }
    return out;
}

void check_finite(const NumericTable& table, const std::string& label) {
    for (std::size_t k = 0; k < table.values.size(); ++k) {
        if (!std::isfinite(table.values[k])) {
            throw DataError(label + ": row " + std::to_string(k / table.columns()) + " column '" +
                            table.header[k % table.columns()] + "' is not finite");
        }
    }
}

std::size_t model_sources(const ModelChoice& model, const DataConfig& data) {
    return static_cast<std::size_t>(!model.fit.empty()) + static_cast<std::size_t>(!model.nominal.empty()) +
           static_cast<std::size_t>(data.prediction_path.has_value());
}

void check_model_choice(const ModelChoice& model, const DataConfig& data) {
    if (model_sources(model, data) != 1) {
        throw ConfigError("give exactly one nominal model source: --predictions, --fit linear or --nominal <family>");
    }
    if (!model.fit.empty() && model.fit != "linear") {
        throw ConfigError("unsupported fit '" + model.fit + "' (only 'linear')");
    }
}

NominalModel synthetic_model(const std::string& family, std::size_t p, std::size_t q) {
    systems::SystemSpec spec;
    spec.family = systems::parse_family(family);
    if (p != 2 || q != 1) throw ConfigError("synthetic nominal models need exactly 2 x columns and 1 y column");
    return NominalModel::synthetic(spec);
}

/// Prediction table (x_1..x_p, yhat_1..yhat_q) aligned with `xy`; returns the
/// lookup model after checking the inputs agree row by row.
NominalModel prediction_model(const std::string& path, const JointSample& xy) {
    const NumericTable pred = read_numeric_csv(path);
    check_finite(pred, path);
    std::vector<std::string> xs, ys;
    for (std::size_t k = 1; k <= xy.p(); ++k) xs.push_back("x_" + std::to_string(k));
    for (std::size_t k = 1; k <= xy.q(); ++k) ys.push_back("yhat_" + std::to_string(k));
    const JointSample table = select(pred, resolve(pred, xs), resolve(pred, ys));
    if (table.rows() != xy.rows()) {
        throw DataError("prediction table has " + std::to_string(table.rows()) + " rows but data has " +
                        std::to_string(xy.rows()));
    }
    for (std::size_t i = 0; i < xy.rows(); ++i) {
        auto a = xy.x(i);
        auto b = table.x(i);
        if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) {
            throw DataError("prediction table inputs differ from the data at row " + std::to_string(i));
        }
    }
    return NominalModel::table(table);
}

json window_record(std::size_t id, std::size_t start, std::size_t end, const EmiReport& report,
                   const Decision& decision, const std::optional<RifVector>& rif) {
    json j{{"window", id},
           {"start", start},
           {"end", end},
           {"n", report.n},
           {"riv", report.emi},
           {"threshold", decision.threshold},
           {"decision", decision.value ? 1 : 0},
           {"collapsed", report.collapsed},
           {"leaf_count", report.leaf_count}};
    if (rif) j["rif"] = rif->values;
    return j;
}

std::string model_label(const ModelChoice& model, const DataConfig& data) {
    if (data.prediction_path) return "predictions:" + *data.prediction_path;
    if (!model.fit.empty()) return "fit:" + model.fit;
    return "nominal:" + model.nominal;
}

}  // namespace

int cmd_estimate(const EstimateOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        o.data.validate();
        check_model_choice(o.model, o.data);
        if (o.data.window) throw ConfigError("estimate uses the whole file; use monitor for windows");
        o.schedule.validate();

        const NumericTable table = read_numeric_csv(o.data.data_path);
        check_finite(table, o.data.data_path);
        const JointSample xy = select(table, resolve(table, o.data.x_cols), resolve(table, o.data.y_cols));
        if (xy.rows() < 2) throw DataError("need at least 2 data rows, got " + std::to_string(xy.rows()));

        const NominalModel model = o.data.prediction_path ? prediction_model(*o.data.prediction_path, xy)
                                   : !o.model.fit.empty() ? fit_linear(xy)
                                                          : synthetic_model(o.model.nominal, xy.p(), xy.q());
        const PipelineOptions popts{o.debias};
        const ResidualSample raw = residuals(xy, model);
        const EmiReport report = riv(xy, model, o.schedule, popts);
        const Decision decision = decide(report.emi, report.schedule_values.a_n, report.n);
        std::optional<RifVector> rifv;
        if (o.rif) rifv = rif(xy, model, o.schedule, popts);

        json doc{{"command", "estimate"},
                 {"data", o.data.data_path},
                 {"fingerprint", table.fingerprint},
                 {"rows", xy.rows()},
                 {"x_cols", o.data.x_cols},
                 {"y_cols", o.data.y_cols},
                 {"model", model_label(o.model, o.data)},
                 {"debias", o.debias},
                 {"bias", raw.bias_estimate},
                 {"schedule", to_json(o.schedule)},
                 {"windows", json::array({window_record(0, 0, xy.rows(), report, decision, rifv)})}};
        out << doc.dump(2) << '\n';

        if (o.csv_out) {
            std::ofstream csv(*o.csv_out);
            if (!csv) throw DataError("cannot write '" + *o.csv_out + "'");
            csv << "window,start,end,n,riv,threshold,decision,collapsed";
            if (rifv) {
                for (std::size_t k = 1; k <= rifv->values.size(); ++k) csv << ",rif_" << k;
            }
            csv << '\n'
                << 0 << ',' << 0 << ',' << xy.rows() << ',' << report.n << ',' << format_number(report.emi) << ','
                << format_number(decision.threshold) << ',' << (decision.value ? 1 : 0) << ','
                << (report.collapsed ? 1 : 0);
            if (rifv) {
                for (double v : rifv->values) csv << ',' << format_number(v);
            }
            csv << '\n';
        }
        return decision.value ? kExitDetection : kExitOk;
    });
}

int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (o.out.empty()) throw ConfigError("synth needs an output path");
        if (o.n == 0) throw ConfigError("synth needs n >= 1");
        systems::SystemSpec spec;
        spec.family = systems::parse_family(o.family);
        spec.delta = o.delta;
        spec.seed = o.seed;
        const JointSample data = systems::sample(spec, o.n);

        std::ofstream file(o.out, std::ios::binary);
        if (!file) throw DataError("cannot write '" + o.out + "'");
        file << "x1,x2,y\n";
        for (std::size_t i = 0; i < data.rows(); ++i) {
            file << format_number(data(i, 0)) << ',' << format_number(data(i, 1)) << ',' << format_number(data(i, 2))
                 << '\n';
        }
        file.close();
        if (!file) throw DataError("failed writing '" + o.out + "'");
        out << "wrote " << data.rows() << " rows of " << o.family << " (delta = " << o.delta[0]
            << ", " << o.delta[1] << ", seed " << o.seed << ") to " << o.out << '\n'
            << "nominal model: " << systems::describe_nominal(spec) << '\n';
        return kExitOk;
    });
}

void write_grid_result(const harness::GridResult& result, const std::string& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw DataError("cannot create '" + directory + "': " + ec.message());
    auto write_matrix = [&](const std::string& name, const std::vector<double>& m) {
        const auto path = (std::filesystem::path(directory) / name).string();
        std::ofstream f(path);
        if (!f) throw DataError("cannot write '" + path + "'");
        for (std::size_t i = 0; i < result.size; ++i) {
            for (std::size_t j = 0; j < result.size; ++j) f << (j ? "," : "") << format_number(m[i * result.size + j]);
            f << '\n';
        }
    };
    write_matrix("mean.csv", result.mean);
    write_matrix("std.csv", result.std);

    std::vector<double> axis;
    for (std::size_t k = 0; k < result.size; ++k) axis.push_back(result.spec.delta_at(k));
    json meta{{"family", systems::to_string(result.family)},
              {"method", harness::to_string(result.spec.method)},
              {"delta_min", result.spec.delta_min},
              {"delta_max", result.spec.delta_max},
              {"step", result.spec.step},
              {"points", result.size},
              {"seeds", result.spec.seeds},
              {"n", result.spec.n},
              {"rows", "delta1"},
              {"columns", "delta2"},
              {"axis", axis},
              {"std", "population (ddof = 0) over seeds"}};
    const auto path = (std::filesystem::path(directory) / "meta.json").string();
    std::ofstream f(path);
    if (!f) throw DataError("cannot write '" + path + "'");
    f << meta.dump(2) << '\n';
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (o.out_dir.empty()) throw ConfigError("sweep needs an output directory");
        harness::GridSpec grid = o.grid;
        if (o.full_scale) {
            const harness::GridSpec full = harness::GridSpec::full_scale();
            grid.delta_min = full.delta_min;
            grid.delta_max = full.delta_max;
            grid.step = full.step;
            grid.seeds = full.seeds;
            err << "warning: full-scale grid is " << grid.points() * grid.points() << " cells x " << grid.seeds.size()
                << " seeds; expect a long run\n";
        }
        grid.validate();
        const auto family = systems::parse_family(o.family);
        const harness::GridResult result = harness::sweep_grid(family, grid, o.schedule, o.threads);
        write_grid_result(result, o.out_dir);
        out << json{{"command", "sweep"},
                    {"family", o.family},
                    {"method", harness::to_string(grid.method)},
                    {"points", result.size},
                    {"cells", result.size * result.size},
                    {"out", o.out_dir}}
                   .dump()
            << '\n';
        return kExitOk;
    });
}

int cmd_monitor(const MonitorOptions& o, std::istream& input, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        o.data.validate();
        if (!o.data.window) throw ConfigError("monitor needs a window size");
        check_model_choice(o.model, o.data);
        o.schedule.validate();
        const Window window = *o.data.window;

        std::ifstream file;
        if (o.data.data_path != "-") {
            file.open(o.data.data_path, std::ios::binary);
            if (!file) throw DataError("cannot open '" + o.data.data_path + "'");
        }
        std::istream& in = o.data.data_path == "-" ? input : file;
        CsvReader reader(in);

        std::vector<std::size_t> xs, ys;
        for (const auto& c : o.data.x_cols) {
            auto idx = reader.column(c);
            if (!idx) throw ConfigError("column '" + c + "' not present in the header");
            xs.push_back(*idx);
        }
        for (const auto& c : o.data.y_cols) {
            auto idx = reader.column(c);
            if (!idx) throw ConfigError("column '" + c + "' not present in the header");
            ys.push_back(*idx);
        }
        const std::size_t p = xs.size();
        const std::size_t q = ys.size();

        std::optional<NumericTable> predictions;
        std::vector<std::size_t> pred_x, pred_y;
        if (o.data.prediction_path) {
            predictions = read_numeric_csv(*o.data.prediction_path);
            for (std::size_t k = 1; k <= p; ++k) pred_x.push_back(predictions->require_column("x_" + std::to_string(k)));
            for (std::size_t k = 1; k <= q; ++k) pred_y.push_back(predictions->require_column("yhat_" + std::to_string(k)));
        }
        std::optional<NominalModel> model;
        if (!o.model.nominal.empty()) model = synthetic_model(o.model.nominal, p, q);

        struct Row {
            std::size_t record;
            std::vector<double> xy;
            std::vector<double> yhat;
        };
        std::deque<Row> buffer;
        std::size_t records = 0, accepted = 0, malformed = 0, windows = 0, detections = 0;
        auto too_many_malformed = [&] { return malformed * 100 > records; };

        std::vector<std::string> fields;
        std::vector<double> xy(p + q);
        while (reader.next(fields)) {
            const std::size_t record = records++;
            bool ok = fields.size() == reader.header().size();
            for (std::size_t k = 0; ok && k < p + q; ++k) {
                const auto v = parse_number(fields[k < p ? xs[k] : ys[k - p]]);
                ok = v && std::isfinite(*v);
                if (ok) xy[k] = *v;
            }
            std::vector<double> yhat;
            if (ok && predictions) {
                if (record >= predictions->rows) throw DataError("prediction table is shorter than the data stream");
                for (std::size_t k = 0; k < p; ++k) ok = ok && predictions->at(record, pred_x[k]) == xy[k];
                if (!ok) throw DataError("prediction table inputs differ from the data at row " + std::to_string(record));
                for (std::size_t c : pred_y) yhat.push_back(predictions->at(record, c));
            }
            if (!ok) {
                ++malformed;
                err << "warning: skipping malformed row " << record << " (line " << reader.line() << ")\n";
                if (records >= 100 && too_many_malformed()) {
                    throw DataError("more than 1% of rows are malformed (" + std::to_string(malformed) + " of " +
                                    std::to_string(records) + ")");
                }
                continue;
            }
            buffer.push_back(Row{record, xy, std::move(yhat)});
            if (buffer.size() > window.size) buffer.pop_front();
            ++accepted;
            if (accepted < window.size || (accepted - window.size) % window.stride != 0) continue;

            JointSample sample(p, q);
            sample.reserve(window.size);
            for (const auto& r : buffer) sample.push_row(r.xy);
            NominalModel window_model = [&] {
                if (predictions) {
                    JointSample table(p, q);
                    std::vector<double> row(p + q);
                    for (const auto& r : buffer) {
                        std::copy(r.xy.begin(), r.xy.begin() + static_cast<std::ptrdiff_t>(p), row.begin());
                        std::copy(r.yhat.begin(), r.yhat.end(), row.begin() + static_cast<std::ptrdiff_t>(p));
                        table.push_row(row);
                    }
                    return NominalModel::table(table);
                }
                if (!model) model = fit_linear(sample);  // frozen after the first window
                return *model;
            }();
            const PipelineOptions popts{o.debias};
            const EmiReport report = riv(sample, window_model, o.schedule, popts);
            const Decision decision = decide(report.emi, report.schedule_values.a_n, report.n);
            std::optional<RifVector> rifv;
            if (o.rif) rifv = rif(sample, window_model, o.schedule, popts);
            out << window_record(windows++, buffer.front().record, buffer.back().record + 1, report, decision, rifv)
                       .dump()
                << '\n'
                << std::flush;
            detections += decision.value;
        }
        if (records > 0 && too_many_malformed()) {
            throw DataError("more than 1% of rows are malformed (" + std::to_string(malformed) + " of " +
                            std::to_string(records) + ")");
        }
        out << json{{"summary", true},
                    {"windows", windows},
                    {"detections", detections},
                    {"rows", records},
                    {"malformed", malformed},
                    {"fingerprint", reader.fingerprint().hex()},
                    {"model", model_label(o.model, o.data)},
                    {"debias", o.debias},
                    {"window", {{"size", window.size}, {"stride", window.stride}}},
                    {"schedule", to_json(o.schedule)}}
                   .dump()
            << '\n';
        return detections > 0 ? kExitDetection : kExitOk;
    });
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (o.trials == 0) throw ConfigError("bench needs trials >= 1");
        if (o.truth != "h0" && o.truth != "h1") throw ConfigError("truth must be h0 or h1");
        systems::SystemSpec spec;
        spec.family = systems::parse_family(o.family);
        spec.delta = o.delta;
        spec.seed = o.seed;
        const auto truth = o.truth == "h0" ? Hypothesis::h0 : Hypothesis::h1;
        const ErrorRateEstimate est = estimate_error_rate(spec, o.schedule, o.n, o.trials, truth, o.threads);
        out << json{{"command", "bench"},
                    {"family", o.family},
                    {"delta", o.delta},
                    {"kind", est.kind == ErrorRateEstimate::Kind::significance ? "significance" : "power"},
                    {"trials", est.trials},
                    {"rejections", est.rejections},
                    {"rate", est.rate},
                    {"n", est.n},
                    {"seed", o.seed},
                    {"schedule", to_json(o.schedule)}}
                   .dump(2)
            << '\n';
        return kExitOk;
    });
}

}  // namespace riv::cli
