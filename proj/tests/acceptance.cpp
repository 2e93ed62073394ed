// Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "riv/detector.hpp"
#include "riv/estimator.hpp"
#include "riv/harness.hpp"
#include "riv/partition.hpp"
#include "riv/pipeline.hpp"
#include "riv/systems.hpp"
#include "test_support.hpp"

using namespace riv;
using systems::Family;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

constexpr std::size_t kN = 2000;
constexpr std::uint64_t kSeeds = 10;

systems::SystemSpec make(Family f, double d1, double d2, std::uint64_t seed) {
    systems::SystemSpec s;
    s.family = f;
    s.delta = {d1, d2};
    s.seed = seed;
    return s;
}

EmiReport run(Family f, double d1, double d2, std::uint64_t seed, std::size_t n = kN) {
    const auto spec = make(f, d1, d2, seed);
    return riv::riv(systems::sample(spec, n), NominalModel::synthetic(spec), Schedule{});
}

bool rejects(const EmiReport& r) { return decide(r.emi, r.schedule_values.a_n, r.n).value; }

std::pair<double, double> mean_std(const std::vector<double>& v) {
    double m = 0.0, var = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double x : v) var += (x - m) * (x - m);
    return {m, std::sqrt(var / static_cast<double>(v.size()))};
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome h0_collapse() {
    int collapsed = 0;
    for (std::uint64_t s = 0; s < kSeeds; ++s) {
        const auto r = run(Family::linear, 0, 0, s);
        collapsed += r.collapsed && r.emi == 0.0;
    }
    return {collapsed >= 9, fmt("%d/10 seeds collapsed to RIV = 0", collapsed)};
}

Outcome drift_detection() {
    int detected = 0;
    for (std::uint64_t s = 0; s < kSeeds; ++s) detected += rejects(run(Family::linear, 0.15, 0.15, s));
    return {detected >= 9, fmt("%d/10 seeds decided 1 (a_n = %.4f)", detected, Schedule{}.at(kN).a_n)};
}

Outcome significance() {
    const auto est = estimate_error_rate(make(Family::linear, 0, 0, 2024), Schedule{}, kN, 100, Hypothesis::h0);
    return {est.rate <= 0.05, fmt("rejection rate %.2f over %zu trials", est.rate, est.trials)};
}

Outcome blind_spot() {
    double mapc = 0.0;
    int detected = 0;
    for (std::uint64_t s = 0; s < kSeeds; ++s) {
        const auto spec = make(Family::polynomial, 0.15, 0.0, s);
        mapc += harness::evaluate_method(harness::Method::mapc, spec, kN, Schedule{}) / kSeeds;
        detected += rejects(run(Family::polynomial, 0.15, 0.0, s));
    }
    return {mapc <= 0.05 && detected >= 8, fmt("mean MAPC %.4f, %d/10 seeds decided 1", mapc, detected)};
}

Outcome rmse_floor() {
    const double target = std::sqrt(1.0 / 300.0);
    double mean = 0.0;
    for (std::uint64_t s = 0; s < kSeeds; ++s) {
        mean += harness::evaluate_method(harness::Method::rmse, make(Family::linear, 0, 0, s), kN, Schedule{}) / kSeeds;
    }
    return {std::abs(mean - target) <= 0.10 * target, fmt("mean RMSE %.5f vs %.5f", mean, target)};
}

Outcome gaussian_oracle() {
    constexpr std::uint64_t kGaussSeeds = 5;
    auto mean_emi = [&](double rho, std::size_t n, int* collapsed = nullptr) {
        double m = 0.0;
        for (std::uint64_t s = 0; s < kGaussSeeds; ++s) {
            const auto r = emi(harness::sample_gaussian_pair(rho, n, 100 + s), Schedule{});
            m += r.emi / kGaussSeeds;
            if (collapsed) *collapsed += r.collapsed && r.emi == 0.0;
        }
        return m;
    };
    int collapsed = 0;
    const double m0 = mean_emi(0.0, 4096, &collapsed);
    const double m5 = mean_emi(0.5, 4096);
    const double m9 = mean_emi(0.9, 4096);
    const double big = mean_emi(0.9, 16384);
    const double ratio = big / harness::gaussian_mi_oracle(0.9);
    const bool pass = collapsed >= 4 && m0 < m5 && m5 < m9 && ratio >= 0.45 && ratio <= 1.15;
    return {pass, fmt("rho=0 collapsed %d/5; means %.4f < %.4f < %.4f; rho=0.9 n=16384 %.4f (ratio %.3f)", collapsed,
                      m0, m5, m9, big, ratio)};
}

Outcome narx() {
    int h0 = 0, h1 = 0;
    for (std::uint64_t s = 0; s < kSeeds; ++s) {
        h0 += !rejects(run(Family::narx, 0, 0, s));
        h1 += rejects(run(Family::narx, 0, 0.15, s));
    }
    return {h0 >= 8 && h1 >= 8, fmt("H0 decided 0 in %d/10, delta (0, 0.15) decided 1 in %d/10", h0, h1)};
}

Outcome estimator_oracle() {
    auto tree = PartitionTree::trivial(1, 1);
    auto [left, right] = tree.split_leaf(0, 0, 0.5);
    tree.split_leaf(left, 1, 0.5);
    tree.split_leaf(right, 1, 0.5);
    const double independent = emi_fixed_partition(JointSample(1, 1, {0, 0, 0, 1, 1, 0, 1, 1}), tree);
    const double coupled = emi_fixed_partition(JointSample(1, 1, {0, 0, 0, 0, 1, 1, 1, 1}), tree);
    const bool quadrants = std::abs(independent) <= 1e-12 && std::abs(coupled - std::log(2.0)) <= 1e-12;

    int checked = 0, matched = 0;
    for (std::uint64_t seed = 0; checked < 50; ++seed) {
        const auto s = testing::random_sample(16 + seed % 17, 1 + seed % 2, 1, seed);
        const auto grown = grow_tree(s, static_cast<double>(s.rows()) / 6.0, 2);
        if (grown.leaf_count() > 8 || grown.leaf_count() < 2) continue;
        ++checked;
        const double cost = 0.005 * static_cast<double>(seed % 20);
        const double dp = testing::penalized_score(prune_tree(grown, 1.0, cost), cost);
        matched += std::abs(dp - testing::exhaustive_best_score(grown, cost)) <= 1e-12;
    }
    return {quadrants && matched == 50,
            fmt("quadrants %.1e / ln2%+.1e; DP matched exhaustive on %d/%d trees", independent,
                coupled - std::log(2.0), matched, checked)};
}

Outcome determinism() {
    harness::GridSpec g;
    g.delta_min = -0.06;
    g.delta_max = 0.06;
    g.step = 0.03;
    g.seeds = {0, 1, 2};
    const auto a = harness::sweep_grid(Family::linear, g, Schedule{});
    const auto b = harness::sweep_grid(Family::linear, g, Schedule{}, 1);
    const bool identical = a.mean == b.mean && a.std == b.std;

    int invariant = 0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto spec = make(k % 2 ? Family::polynomial : Family::linear, 0.1, 0.05 * (k % 3), 500 + k);
        const auto res = residuals(systems::sample(spec, 1000), NominalModel::synthetic(spec)).joint;
        invariant += emi(res, Schedule{}).emi == emi(testing::shuffled(res, k), Schedule{}).emi;
    }
    return {identical && invariant == 20,
            fmt("grid results %s; %d/20 permuted instances identical", identical ? "bit-identical" : "DIFFER",
                invariant)};
}

Outcome error_bars() {
    std::vector<double> v;
    for (std::uint64_t s = 0; s < kSeeds; ++s) v.push_back(run(Family::linear, 0.15, 0.15, s).emi);
    const auto [m, sd] = mean_std(v);
    return {m > 0.0 && sd <= 0.5 * m, fmt("mean %.4f, std %.4f (ratio %.3f)", m, sd, sd / m)};
}

Outcome ordering() {
    std::vector<double> lin, trig;
    for (std::uint64_t s = 0; s < kSeeds; ++s) {
        lin.push_back(run(Family::linear, 0.15, 0.15, s).emi);
        trig.push_back(run(Family::trigonometric, 0.15, 0.15, s).emi);
    }
    const double ml = mean_std(lin).first, mt = mean_std(trig).first;
    return {ml > mt, fmt("linear mean %.4f vs trigonometric mean %.4f", ml, mt)};
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 = no runtime bound
    std::function<Outcome()> check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "H0 collapse", 10.0, h0_collapse},
        {2, "drift detection", 10.0, drift_detection},
        {3, "significance", 120.0, significance},
        {4, "correlation blind spot", 30.0, blind_spot},
        {5, "RMSE noise floor", 0.0, rmse_floor},
        {6, "Gaussian oracle consistency", 120.0, gaussian_oracle},
        {7, "NARX behavior", 0.0, narx},
        {8, "estimator oracle", 0.0, estimator_oracle},
        {9, "determinism and permutation invariance", 0.0, determinism},
        {10, "error-bar property", 0.0, error_bars},
        {11, "cross-system ordering", 0.0, ordering},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_seconds == 0.0 || secs < c.limit_seconds;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("%s  %2d %-40s %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                    in_time ? "" : ", over time limit");
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
