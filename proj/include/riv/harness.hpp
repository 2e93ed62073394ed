#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "riv/estimator.hpp"
#include "riv/pipeline.hpp"
#include "riv/systems.hpp"

namespace riv::harness {

/// Pearson correlation of two equal-length columns. Throws DegenerateInput if
/// either has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/// Maximum absolute Pearson correlation between each input column and the
/// (single) residual column of an (x, r) sample.
double mapc(const JointSample& xr);

/// Root mean square of a residual column.
double rmse(std::span<const double> r);

enum class Method { riv, mapc, rmse };
std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Square delta grid; both axes share [delta_min, delta_max] at `step`.
struct GridSpec {
    double delta_min = -0.15;
    double delta_max = 0.15;
    double step = 0.015;
    std::vector<std::uint64_t> seeds{0, 1, 2};
    std::size_t n = 2000;
    Method method = Method::riv;

    void validate() const;
    std::size_t points() const;
    double delta_at(std::size_t index) const;

    /// 201 x 201 grid over 10 seeds.
    static GridSpec full_scale();
};

/// Row-major matrices over (delta_1 index, delta_2 index).
struct GridResult {
    GridSpec spec;
    systems::Family family = systems::Family::linear;
    std::size_t size = 0;
    std::vector<double> mean;
    std::vector<double> std;

    double mean_at(std::size_t i, std::size_t j) const { return mean[i * size + j]; }
    double std_at(std::size_t i, std::size_t j) const { return std[i * size + j]; }
};

/// Seed for one replicate of one grid cell. Depends on delta values, not array
/// positions, so resizing the grid leaves other cells' draws unchanged.
std::uint64_t cell_seed(std::uint64_t replicate_seed, double delta1, double delta2, std::size_t replicate);

/// One method evaluation on n samples of the drifted system against its nominal map.
double evaluate_method(Method method, const systems::SystemSpec& system, std::size_t n, const Schedule& schedule);

/// Per-cell mean and population std of the method over seeds.
GridResult sweep_grid(systems::Family family, const GridSpec& grid, const Schedule& schedule,
                      std::size_t threads = 0, const systems::Coefficients& coefficients = {});

/// Mutual information of a bivariate standard Gaussian with correlation rho, nats.
double gaussian_mi_oracle(double rho);

/// n draws of a standard bivariate Gaussian pair with correlation rho, p = q = 1.
JointSample sample_gaussian_pair(double rho, std::size_t n, std::uint64_t seed);

/// Rejection frequency over seeds at each sample size.
std::vector<std::pair<std::size_t, double>> detection_curve(const systems::SystemSpec& system,
                                                            const Schedule& schedule,
                                                            std::span<const std::size_t> ns,
                                                            std::span<const std::uint64_t> seeds,
                                                            std::size_t threads = 0);

}  // namespace riv::harness
