#include "riv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "riv/detector.hpp"
#include "riv/error.hpp"
#include "riv/parallel.hpp"
#include "riv/rng.hpp"

namespace riv::harness {

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidInput("pearson needs equal-length columns");
    if (a.size() < 2) throw InvalidInput("pearson needs at least 2 observations");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw DegenerateInput("pearson correlation of a zero-variance column");
    const double r = sab / std::sqrt(saa * sbb);
    return std::clamp(r, -1.0, 1.0);
}

double mapc(const JointSample& xr) {
    if (xr.q() != 1) throw InvalidInput("mapc expects a single residual column");
    if (xr.rows() < 2) throw InvalidInput("mapc needs at least 2 rows");
    const std::size_t n = xr.rows();
    std::vector<double> r(n), x(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = xr(i, xr.p());
    double best = 0.0;
    for (std::size_t k = 0; k < xr.p(); ++k) {
        for (std::size_t i = 0; i < n; ++i) x[i] = xr(i, k);
        best = std::max(best, std::abs(pearson(x, r)));
    }
    return best;
}

double rmse(std::span<const double> r) {
    if (r.empty()) throw InvalidInput("rmse of an empty residual column");
    double ss = 0.0;
    for (double v : r) ss += v * v;
    return std::sqrt(ss / static_cast<double>(r.size()));
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::riv:
            return "riv";
        case Method::mapc:
            return "mapc";
        case Method::rmse:
            return "rmse";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    if (name == "riv") return Method::riv;
    if (name == "mapc") return Method::mapc;
    if (name == "rmse") return Method::rmse;
    throw InvalidInput("unknown method '" + std::string(name) + "' (expected riv, mapc or rmse)");
}

void GridSpec::validate() const {
    if (!std::isfinite(delta_min) || !std::isfinite(delta_max) || delta_min > delta_max) {
        throw InvalidInput("grid needs finite delta_min <= delta_max");
    }
    if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("grid step must be positive");
    if (seeds.empty()) throw InvalidInput("grid needs at least one seed");
    if (n < 2) throw InvalidInput("grid sample size must be at least 2");
}

std::size_t GridSpec::points() const {
    return static_cast<std::size_t>(std::llround((delta_max - delta_min) / step)) + 1;
}

double GridSpec::delta_at(std::size_t index) const { return delta_min + static_cast<double>(index) * step; }

GridSpec GridSpec::full_scale() {
    GridSpec g;
    g.delta_min = -0.15;
    g.delta_max = 0.15;
    g.step = 0.0015;
    g.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    return g;
}

std::uint64_t cell_seed(std::uint64_t replicate_seed, double delta1, double delta2, std::size_t replicate) {
    auto lattice = [](double d) { return static_cast<std::uint64_t>(std::llround(d * 1e9)); };
    return derive_seed(replicate_seed, {lattice(delta1), lattice(delta2), replicate});
}

double evaluate_method(Method method, const systems::SystemSpec& system, std::size_t n, const Schedule& schedule) {
    const JointSample data = systems::sample(system, n);
    const NominalModel nominal = NominalModel::synthetic(system);
    switch (method) {
        case Method::riv:
            return riv(data, nominal, schedule).emi;
        case Method::mapc:
            return mapc(residuals(data, nominal).joint);
        case Method::rmse: {
            const ResidualSample res = residuals(data, nominal);
            std::vector<double> r(res.rows());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = res.r(i)[0];
            return rmse(r);
        }
    }
    throw InvalidInput("unknown method");
}

GridResult sweep_grid(systems::Family family, const GridSpec& grid, const Schedule& schedule, std::size_t threads,
                      const systems::Coefficients& coefficients) {
    grid.validate();
    schedule.validate();
    const std::size_t size = grid.points();
    const std::size_t reps = grid.seeds.size();
    const std::size_t tasks = size * size * reps;
    std::vector<double> values(tasks);

    parallel_for(tasks, threads, [&](std::size_t task) {
        const std::size_t rep = task % reps;
        const std::size_t cell = task / reps;
        const std::size_t i = cell / size;
        const std::size_t j = cell % size;
        systems::SystemSpec spec;
        spec.family = family;
        spec.coefficients = coefficients;
        spec.delta = {grid.delta_at(i), grid.delta_at(j)};
        spec.seed = cell_seed(grid.seeds[rep], spec.delta[0], spec.delta[1], rep);
        try {
            values[task] = evaluate_method(grid.method, spec, grid.n, schedule);
        } catch (const std::exception& e) {
            throw std::runtime_error("grid cell delta=(" + std::to_string(spec.delta[0]) + ", " +
                                     std::to_string(spec.delta[1]) + ") seed " + std::to_string(grid.seeds[rep]) +
                                     ": " + e.what());
        }
    });

    GridResult out{grid, family, size, std::vector<double>(size * size), std::vector<double>(size * size)};
    for (std::size_t cell = 0; cell < size * size; ++cell) {
        double mean = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep) mean += values[cell * reps + rep];
        mean /= static_cast<double>(reps);
        double var = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const double d = values[cell * reps + rep] - mean;
            var += d * d;
        }
        out.mean[cell] = mean;
        out.std[cell] = std::sqrt(var / static_cast<double>(reps));
    }
    return out;
}

double gaussian_mi_oracle(double rho) {
    if (!(std::abs(rho) < 1.0)) throw InvalidInput("gaussian_mi_oracle needs |rho| < 1");
    return -0.5 * std::log1p(-rho * rho);
}

JointSample sample_gaussian_pair(double rho, std::size_t n, std::uint64_t seed) {
    if (!(std::abs(rho) < 1.0)) throw InvalidInput("correlation must satisfy |rho| < 1");
    Stream a(derive_seed(seed, {1}));
    Stream b(derive_seed(seed, {2}));
    JointSample out(1, 1);
    out.reserve(n);
    const double c = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        const double za = a.normal(0.0, 1.0);
        const double zb = b.normal(0.0, 1.0);
        const double row[2] = {za, rho * za + c * zb};
        out.push_row(row);
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> detection_curve(const systems::SystemSpec& system,
                                                            const Schedule& schedule,
                                                            std::span<const std::size_t> ns,
                                                            std::span<const std::uint64_t> seeds,
                                                            std::size_t threads) {
    if (ns.empty()) throw InvalidInput("detection_curve needs at least one sample size");
    if (seeds.empty()) throw InvalidInput("detection_curve needs at least one seed");
    for (std::size_t k = 1; k < ns.size(); ++k) {
        if (ns[k] <= ns[k - 1]) throw InvalidInput("sample sizes must be strictly increasing");
    }
    const NominalModel nominal = NominalModel::synthetic(system);
    std::vector<char> rejected(ns.size() * seeds.size());
    parallel_for(rejected.size(), threads, [&](std::size_t task) {
        const std::size_t k = task / seeds.size();
        systems::SystemSpec spec = system;
        spec.seed = seeds[task % seeds.size()];
        const EmiReport report = riv(systems::sample(spec, ns[k]), nominal, schedule);
        rejected[task] = decide(report.emi, report.schedule_values.a_n, ns[k]).value;
    });
    std::vector<std::pair<std::size_t, double>> curve;
    for (std::size_t k = 0; k < ns.size(); ++k) {
        std::size_t hits = 0;
        for (std::size_t s = 0; s < seeds.size(); ++s) hits += rejected[k * seeds.size() + s];
        curve.emplace_back(ns[k], static_cast<double>(hits) / static_cast<double>(seeds.size()));
    }
    return curve;
}

}  // namespace riv::harness
