#include "riv/systems.hpp"

#include <cmath>
#include <sstream>

#include "riv/error.hpp"

namespace riv::systems {

namespace {

constexpr std::array<std::string_view, 6> kFamilyNames{"linear", "polynomial", "trigonometric", "mlp", "arx", "narx"};

constexpr std::array<std::string_view, 20> kCoefficientNames{"a_U", "b_U", "mu_S", "sigma_S", "mu_H", "sigma_H", "a_W",
                                                             "b_W", "c1",  "c2",  "c3",   "c4",      "c5",   "A",
                                                             "phi", "d0",  "k",   "A_W",  "f_W",     "phi_W"};

double* coefficient_slot(Coefficients& c, std::string_view name) {
    double* slots[] = {&c.a_U, &c.b_U, &c.mu_S, &c.sigma_S, &c.mu_H, &c.sigma_H, &c.a_W, &c.b_W, &c.c1, &c.c2,
                       &c.c3,  &c.c4,  &c.c5,   &c.A,       &c.phi,  &c.d0,      &c.k,   &c.A_W, &c.f_W, &c.phi_W};
    for (std::size_t i = 0; i < kCoefficientNames.size(); ++i) {
        if (kCoefficientNames[i] == name) return slots[i];
    }
    throw InvalidInput("unknown coefficient '" + std::string(name) + "'");
}

double leaky_relu(double v) { return v >= 0.0 ? v : 0.01 * v; }

double eta(Family family, const Coefficients& c, double d1, double d2, double x1, double x2) {
    switch (family) {
        case Family::linear:
        case Family::arx:
            return (c.c1 + d1) * x1 + (c.c2 + d2) * x2;
        case Family::polynomial:
            return (c.c1 + d1) * x1 * x1 + (c.c2 + d2) * x2 * x2 * x2;
        case Family::trigonometric:
            return (c.A + d1) * std::sin(x1 * x2 + c.phi + d2);
        case Family::mlp: {
            using M = MlpParams;
            // Drift perturbs the first hidden unit's input weights only.
            const double z1 = (M::w11 + d1) * x1 + (M::w12 + d2) * x2 + M::b1;
            const double z2 = M::w21 * x1 + M::w22 * x2 + M::b2;
            return M::w1h * leaky_relu(z1) + M::w2h * leaky_relu(z2) + M::b_hidden;
        }
        case Family::narx:
            return (c.c3 + d1 + c.c4 * std::exp(-x1 * x1)) * x1 + (c.c5 + d2) * x2 * x2;
    }
    throw InvalidInput("unknown system family");
}

// Substream tags.
enum : std::uint64_t { kStreamU = 1, kStreamS = 2, kStreamW = 3, kStreamH = 4 };

}  // namespace

std::string_view to_string(Family family) { return kFamilyNames[static_cast<std::size_t>(family)]; }

Family parse_family(std::string_view name) {
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i) {
        if (kFamilyNames[i] == name) return static_cast<Family>(i);
    }
    throw InvalidInput("unknown system family '" + std::string(name) + "'");
}

bool is_autoregressive(Family family) { return family == Family::arx || family == Family::narx; }

void Coefficients::set(std::string_view name, double value) { *coefficient_slot(*this, name) = value; }

double Coefficients::get(std::string_view name) const {
    return *coefficient_slot(const_cast<Coefficients&>(*this), name);
}

std::span<const std::string_view> Coefficients::names() { return kCoefficientNames; }

SystemSpec SystemSpec::nominal() const {
    SystemSpec out = *this;
    out.delta = {0.0, 0.0};
    return out;
}

void SystemSpec::validate() const {
    if (!std::isfinite(delta[0]) || !std::isfinite(delta[1])) throw InvalidInput("delta must be finite");
    for (auto name : Coefficients::names()) {
        if (!std::isfinite(coefficients.get(name))) {
            throw InvalidInput("coefficient '" + std::string(name) + "' must be finite");
        }
    }
    if (!(coefficients.a_U < coefficients.b_U)) throw InvalidInput("need a_U < b_U");
    if (!(coefficients.a_W < coefficients.b_W)) throw InvalidInput("need a_W < b_W");
    if (coefficients.sigma_S < 0.0 || coefficients.sigma_H < 0.0) throw InvalidInput("noise scales must be >= 0");
}

double eval_eta(const SystemSpec& spec, std::span<const double> x) {
    if (x.size() != 2) throw InvalidInput("system input must have dimension 2, got " + std::to_string(x.size()));
    return eta(spec.family, spec.coefficients, spec.delta[0], spec.delta[1], x[0], x[1]);
}

double eval_nominal(const SystemSpec& spec, std::span<const double> x) { return eval_eta(spec.nominal(), x); }

double noise_transform(const SystemSpec& spec, double w) {
    const auto& c = spec.coefficients;
    switch (spec.family) {
        case Family::linear:
        case Family::polynomial:
            return c.k * w;
        case Family::trigonometric:
            return c.A_W * std::sin(c.f_W * w + c.phi_W);
        case Family::mlp:
            return w;
        case Family::arx:
        case Family::narx:
            break;
    }
    throw InvalidInput("AR families have no output noise transform");
}

Generator::Generator(SystemSpec spec, StreamOverrides overrides)
    : spec_(std::move(spec)),
      overrides_(overrides),
      u_stream_(derive_seed(spec_.seed, {kStreamU})),
      s_stream_(derive_seed(spec_.seed, {kStreamS})),
      w_stream_(derive_seed(spec_.seed, {kStreamW})),
      h_stream_(derive_seed(spec_.seed, {kStreamH})) {
    spec_.validate();
    state_.d = spec_.coefficients.d0;
}

void Generator::next(std::span<double, 3> row) {
    const auto& c = spec_.coefficients;
    if (!is_autoregressive(spec_.family)) {
        state_.u = overrides_.u.value_or(u_stream_.uniform(c.a_U, c.b_U));
        state_.s = overrides_.s.value_or(s_stream_.normal(c.mu_S, c.sigma_S));
        state_.w = overrides_.w.value_or(w_stream_.uniform(c.a_W, c.b_W));
        const double x[2] = {state_.u, state_.s};
        row[0] = state_.u;
        row[1] = state_.s;
        row[2] = eval_eta(spec_, x) + noise_transform(spec_, state_.w);
        return;
    }
    state_.d_prev = state_.d;
    state_.w_prev = state_.w;
    state_.u = overrides_.u.value_or(u_stream_.uniform(c.a_U, c.b_U));
    state_.h = overrides_.h.value_or(h_stream_.normal(c.mu_H, c.sigma_H));
    state_.w = overrides_.w.value_or(w_stream_.uniform(c.a_W, c.b_W));
    const double inner[2] = {state_.d_prev, state_.u};
    state_.d = eval_eta(spec_, inner) + state_.h;
    const double y = state_.d + state_.w;
    row[0] = y_prev_;
    row[1] = state_.u;
    row[2] = y;
    y_prev_ = y;
}

namespace {

JointSample generate(const SystemSpec& spec, std::size_t n, const StreamOverrides& overrides) {
    if (n == 0) throw InvalidInput("sample size must be at least 1");
    Generator gen(spec, overrides);
    JointSample out(2, 1);
    out.reserve(n);
    std::array<double, 3> row{};
    for (std::size_t i = 0; i < n; ++i) {
        gen.next(row);
        out.push_row(row);
    }
    return out;
}

}  // namespace

JointSample sample_forward(const SystemSpec& spec, std::size_t n, const StreamOverrides& overrides) {
    if (is_autoregressive(spec.family)) {
        throw InvalidInput("sample_forward called with AR family '" + std::string(to_string(spec.family)) + "'");
    }
    return generate(spec, n, overrides);
}

JointSample sample_ar(const SystemSpec& spec, std::size_t n, const StreamOverrides& overrides) {
    if (!is_autoregressive(spec.family)) {
        throw InvalidInput("sample_ar called with forward family '" + std::string(to_string(spec.family)) + "'");
    }
    return generate(spec, n, overrides);
}

JointSample sample(const SystemSpec& spec, std::size_t n, const StreamOverrides& overrides) {
    return generate(spec, n, overrides);
}

std::string describe_nominal(const SystemSpec& spec) {
    const auto& c = spec.coefficients;
    std::ostringstream os;
    switch (spec.family) {
        case Family::linear:
            os << "y = " << c.c1 << "*x1 + " << c.c2 << "*x2";
            break;
        case Family::polynomial:
            os << "y = " << c.c1 << "*x1^2 + " << c.c2 << "*x2^3";
            break;
        case Family::trigonometric:
            os << "y = " << c.A << "*sin(x1*x2 + " << c.phi << ")";
            break;
        case Family::mlp:
            os << "y = mlp(x1, x2) [2 hidden units, leaky relu 0.01]";
            break;
        case Family::arx:
            os << "y = " << c.c1 << "*x1 + " << c.c2 << "*x2  (x1 = lagged y, x2 = exogenous u)";
            break;
        case Family::narx:
            os << "y = (" << c.c3 << " + " << c.c4 << "*exp(-x1^2))*x1 + " << c.c5
               << "*x2^2  (x1 = lagged y, x2 = exogenous u)";
            break;
    }
    return os.str();
}

}  // namespace riv::systems
