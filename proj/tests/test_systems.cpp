#include <doctest.h>

#include <cmath>
#include <numeric>

#include "riv/error.hpp"
#include "riv/systems.hpp"

using namespace riv;
using namespace riv::systems;

namespace {

SystemSpec make(Family f, double d1 = 0.0, double d2 = 0.0, std::uint64_t seed = 0) {
    SystemSpec s;
    s.family = f;
    s.delta = {d1, d2};
    s.seed = seed;
    return s;
}

double column_mean(const JointSample& s, std::size_t c) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i) m += s(i, c);
    return m / static_cast<double>(s.rows());
}

double column_var(const JointSample& s, std::size_t c) {
    const double m = column_mean(s, c);
    double v = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i) v += (s(i, c) - m) * (s(i, c) - m);
    return v / static_cast<double>(s.rows());
}

}  // namespace

TEST_CASE("coefficient table defaults") {
    const Coefficients c;
    CHECK(c.sigma_S == doctest::Approx(2.0 * std::sqrt(3.0) / 3.0).epsilon(1e-15));
    CHECK(c.get("c1") == 0.6);
    CHECK(c.get("c2") == -0.4);
    CHECK(c.get("A_W") == 1.5);
    CHECK(Coefficients::names().size() == 20);
    Coefficients d;
    d.set("k", 2.0);
    CHECK(d.k == 2.0);
    CHECK_THROWS_AS(d.set("nope", 1.0), InvalidInput);
}

TEST_CASE("eta hand evaluations") {
    const double ones[2] = {1.0, 1.0};
    CHECK(eval_eta(make(Family::linear), ones) == doctest::Approx(0.2).epsilon(1e-15));
    const double zero_u[2] = {0.0, 3.7};
    CHECK(eval_eta(make(Family::trigonometric), zero_u) == 0.0);
    const double origin[2] = {0.0, 0.0};
    // -0.63385 * (0.01 * -0.62466) + -0.04506 * 0.28375 + 0.24580
    CHECK(eval_eta(make(Family::mlp), origin) == doctest::Approx(0.2369736).epsilon(1e-6));
    const double x[2] = {1.5, -0.5};
    CHECK(eval_eta(make(Family::polynomial, 0.1, 0.2), x) == doctest::Approx(0.7 * 2.25 + (-0.2) * -0.125));
    CHECK(eval_eta(make(Family::narx), x) == doctest::Approx((0.8 - 0.5 * std::exp(-2.25)) * 1.5 + 0.25));
    CHECK(eval_eta(make(Family::arx, 0.1, 0.0), x) == doctest::Approx(0.7 * 1.5 + 0.2));
}

TEST_CASE("mlp drift touches only the first hidden unit") {
    // With x = (0, 0) the first unit's input is b1 regardless of the weights.
    const double origin[2] = {0.0, 0.0};
    CHECK(eval_eta(make(Family::mlp, 0.3, -0.2), origin) == eval_eta(make(Family::mlp), origin));
    const double x[2] = {-1.0, 0.5};
    const double z1 = (MlpParams::w11 + 0.3) * -1.0 + (MlpParams::w12 - 0.2) * 0.5 + MlpParams::b1;
    const double z2 = MlpParams::w21 * -1.0 + MlpParams::w22 * 0.5 + MlpParams::b2;
    auto lrelu = [](double v) { return v >= 0 ? v : 0.01 * v; };
    CHECK(eval_eta(make(Family::mlp, 0.3, -0.2), x) ==
          doctest::Approx(MlpParams::w1h * lrelu(z1) + MlpParams::w2h * lrelu(z2) + MlpParams::b_hidden));
}

TEST_CASE("zero drift matches the nominal evaluator bitwise") {
    const double xs[][2] = {{0.3, -1.2}, {1.9, 0.4}, {-1.0, 2.5}};
    for (int f = 0; f < 6; ++f) {
        const auto spec = make(static_cast<Family>(f));
        for (const auto& x : xs) CHECK(eval_eta(spec, x) == eval_nominal(make(static_cast<Family>(f), 0.1, 0.1), x));
    }
}

TEST_CASE("eta rejects wrong input dimension") {
    const double x[3] = {1, 2, 3};
    CHECK_THROWS_AS(eval_eta(make(Family::linear), std::span<const double>(x, 3)), InvalidInput);
}

TEST_CASE("family names") {
    CHECK(parse_family("narx") == Family::narx);
    CHECK(to_string(Family::trigonometric) == "trigonometric");
    CHECK_THROWS_AS(parse_family("quadratic"), InvalidInput);
    CHECK_THROWS_AS(sample_forward(make(Family::arx), 10), InvalidInput);
    CHECK_THROWS_AS(sample_ar(make(Family::linear), 10), InvalidInput);
    CHECK_THROWS_AS(sample(make(Family::linear), 0), InvalidInput);
}

TEST_CASE("generators are deterministic and prefix-stable") {
    for (int f = 0; f < 6; ++f) {
        const auto spec = make(static_cast<Family>(f), 0.05, -0.05, 17);
        const auto a = sample(spec, 500);
        CHECK(a == sample(spec, 500));
        CHECK(a.head(200) == sample(spec, 200));
        CHECK_FALSE(a == sample(make(static_cast<Family>(f), 0.05, -0.05, 18), 500));
    }
}

TEST_CASE("input and noise distributions") {
    const auto s = sample_forward(make(Family::linear, 0.0, 0.0, 3), 100000);
    CHECK(std::abs(column_mean(s, 0)) <= 0.02);
    CHECK(column_mean(s, 1) >= 0.48);
    CHECK(column_mean(s, 1) <= 0.52);
    CHECK(column_var(s, 0) == doctest::Approx(4.0 / 3.0).epsilon(0.03));
    CHECK(column_var(s, 1) == doctest::Approx(4.0 / 3.0).epsilon(0.03));

    Generator gen(make(Family::linear, 0.0, 0.0, 3));
    std::vector<double> w(100000);
    std::array<double, 3> row{};
    double residual_mean = 0.0;
    for (double& v : w) {
        gen.next(row);
        v = gen.state().w;
        const double x[2] = {row[0], row[1]};
        residual_mean += row[2] - eval_nominal(gen.spec(), x);
    }
    residual_mean /= static_cast<double>(w.size());
    CHECK(std::abs(residual_mean) <= 0.002);
    const double wm = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    double wv = 0.0;
    for (double v : w) wv += (v - wm) * (v - wm);
    wv /= static_cast<double>(w.size());
    CHECK(wv == doctest::Approx(1.0 / 300.0).epsilon(0.03));
}

TEST_CASE("forward residual identities") {
    for (Family f : {Family::linear, Family::polynomial}) {
        const double d1 = 0.13, d2 = -0.07;
        Generator gen(make(f, d1, d2, 5));
        std::array<double, 3> row{};
        for (int i = 0; i < 1000; ++i) {
            gen.next(row);
            const auto& st = gen.state();
            const double x[2] = {row[0], row[1]};
            const double r = row[2] - eval_nominal(gen.spec(), x);
            const double expected = f == Family::linear ? d1 * st.u + d2 * st.s + st.w
                                                        : d1 * st.u * st.u + d2 * st.s * st.s * st.s + st.w;
            CHECK(std::abs(r - expected) <= 1e-12);
        }
    }
}

TEST_CASE("trigonometric and mlp outputs") {
    Generator trig(make(Family::trigonometric, 0.1, 0.2, 2));
    Generator mlp(make(Family::mlp, 0.1, 0.2, 2));
    std::array<double, 3> row{};
    for (int i = 0; i < 100; ++i) {
        trig.next(row);
        const auto& t = trig.state();
        CHECK(row[2] == doctest::Approx(1.1 * std::sin(t.u * t.s + 0.2) + 1.5 * std::sin(t.w)).epsilon(1e-14));
        mlp.next(row);
        const double x[2] = {row[0], row[1]};
        CHECK(row[2] == doctest::Approx(eval_eta(mlp.spec(), x) + mlp.state().w).epsilon(1e-14));
    }
}

TEST_CASE("ARX recurrence without noise") {
    StreamOverrides hooks;
    hooks.u = 1.0;
    hooks.w = 0.0;
    hooks.h = 0.0;
    const auto s = sample_ar(make(Family::arx), 3, hooks);
    CHECK(s(0, 2) == doctest::Approx(-0.4));
    CHECK(s(1, 2) == doctest::Approx(-0.64));
    CHECK(s(2, 2) == doctest::Approx(-0.784));
    // first emitted input is (Y_0, U_1) = (0, 1), then lagged outputs
    CHECK(s(0, 0) == 0.0);
    CHECK(s(1, 0) == s(0, 2));
    CHECK(s(2, 1) == 1.0);
}

TEST_CASE("NARX stays at the zero fixed point without noise or input") {
    StreamOverrides hooks;
    hooks.u = 0.0;
    hooks.w = 0.0;
    hooks.h = 0.0;
    const auto s = sample_ar(make(Family::narx), 50, hooks);
    for (std::size_t i = 0; i < s.rows(); ++i) CHECK(s(i, 2) == 0.0);
}

TEST_CASE("pinning one stream leaves the others unchanged") {
    StreamOverrides hooks;
    hooks.w = 0.0;
    const auto free_run = sample_forward(make(Family::linear, 0, 0, 9), 100);
    const auto pinned = sample_forward(make(Family::linear, 0, 0, 9), 100, hooks);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(free_run(i, 0) == pinned(i, 0));
        CHECK(free_run(i, 1) == pinned(i, 1));
    }
}

TEST_CASE("ARX residual identity with exposed latent states") {
    const double d1 = 0.1, d2 = -0.12;
    Generator gen(make(Family::arx, d1, d2, 21));
    std::array<double, 3> row{};
    for (int i = 0; i < 1000; ++i) {
        gen.next(row);
        const auto& st = gen.state();
        const double x[2] = {row[0], row[1]};
        const double r = row[2] - eval_nominal(gen.spec(), x);
        const double expected = d1 * st.d_prev + d2 * st.u - 0.6 * st.w_prev + st.h + st.w;
        CHECK(std::abs(r - expected) <= 1e-12);
    }
}

TEST_CASE("spec validation") {
    auto s = make(Family::linear, std::nan(""), 0.0);
    CHECK_THROWS_AS(s.validate(), InvalidInput);
    s = make(Family::linear);
    s.coefficients.b_U = -3.0;
    CHECK_THROWS_AS(Generator{s}, InvalidInput);
}
