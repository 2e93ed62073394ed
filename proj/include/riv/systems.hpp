#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riv/rng.hpp"
#include "riv/sample.hpp"

namespace riv::systems {

enum class Family { linear, polynomial, trigonometric, mlp, arx, narx };

std::string_view to_string(Family family);
/// Throws InvalidInput on an unknown name.
Family parse_family(std::string_view name);
bool is_autoregressive(Family family);

/// Constant coefficients of the benchmark systems.
struct Coefficients {
    double a_U = -2.0;
    double b_U = 2.0;
    double mu_S = 0.5;
    double sigma_S = 1.1547005383792515;  // 2*sqrt(3)/3
    double mu_H = 0.0;
    double sigma_H = 0.1;
    double a_W = -0.1;
    double b_W = 0.1;
    double c1 = 0.6;
    double c2 = -0.4;
    double c3 = 0.8;
    double c4 = -0.5;
    double c5 = 1.0;
    double A = 1.0;
    double phi = 0.0;
    double d0 = 0.0;
    double k = 1.0;
    double A_W = 1.5;
    double f_W = 1.0;
    double phi_W = 0.0;

    /// Override by name ("c1", "sigma_S", ...). Throws InvalidInput on unknown names.
    void set(std::string_view name, double value);
    double get(std::string_view name) const;
    static std::span<const std::string_view> names();
};

/// Nominal weights of the two-hidden-unit MLP system.
struct MlpParams {
    static constexpr double w11 = -0.66612;
    static constexpr double w12 = -0.13874;
    static constexpr double w21 = -0.33963;
    static constexpr double w22 = -0.18860;
    static constexpr double b1 = -0.62466;
    static constexpr double b2 = 0.28375;
    static constexpr double w1h = -0.63385;
    static constexpr double w2h = -0.04506;
    static constexpr double b_hidden = 0.24580;
};

struct SystemSpec {
    Family family = Family::linear;
    std::array<double, 2> delta{0.0, 0.0};
    Coefficients coefficients;
    std::uint64_t seed = 0;

    bool drifted() const { return delta[0] != 0.0 || delta[1] != 0.0; }
    /// Same system with delta = 0.
    SystemSpec nominal() const;
    void validate() const;
};

/// Drifted input-output map. Forward families take (u, s); AR families take (d, u).
double eval_eta(const SystemSpec& spec, std::span<const double> x);
/// eval_eta with delta forced to 0.
double eval_nominal(const SystemSpec& spec, std::span<const double> x);
/// Output noise transform h(w) of the forward families.
double noise_transform(const SystemSpec& spec, double w);

/// Pins individual noise/input streams to constants. Pinned streams are still
/// advanced so that the other streams are unaffected.
struct StreamOverrides {
    std::optional<double> u;
    std::optional<double> s;
    std::optional<double> w;
    std::optional<double> h;
};

/// Internal variables behind the latest emitted row.
struct LatentState {
    double u = 0.0;
    double s = 0.0;
    double w = 0.0;
    double h = 0.0;
    double d = 0.0;       ///< D_j (AR only)
    double d_prev = 0.0;  ///< D_{j-1} (AR only)
    double w_prev = 0.0;  ///< W_{j-1} (AR only)
};

/// Row-at-a-time generator: emits (x1, x2, y). Forward rows are i.i.d.; AR rows
/// (x1 = Y_{j-1}, x2 = U_j) are a Markov chain and NOT i.i.d.
class Generator {
public:
    explicit Generator(SystemSpec spec, StreamOverrides overrides = {});

    void next(std::span<double, 3> row);
    const LatentState& state() const { return state_; }
    const SystemSpec& spec() const { return spec_; }

private:
    SystemSpec spec_;
    StreamOverrides overrides_;
    Stream u_stream_;
    Stream s_stream_;
    Stream w_stream_;
    Stream h_stream_;
    LatentState state_;
    double y_prev_ = 0.0;
};

/// n rows of a forward family (linear, polynomial, trigonometric, mlp).
JointSample sample_forward(const SystemSpec& spec, std::size_t n, const StreamOverrides& overrides = {});
/// n rows of an AR family (arx, narx), D_0 = d0, W_0 = 0, Y_0 = 0.
JointSample sample_ar(const SystemSpec& spec, std::size_t n, const StreamOverrides& overrides = {});
/// Dispatches on the family.
JointSample sample(const SystemSpec& spec, std::size_t n, const StreamOverrides& overrides = {});

/// Human-readable nominal map, e.g. "y = 0.6*x1 + -0.4*x2".
std::string describe_nominal(const SystemSpec& spec);

}  // namespace riv::systems
