#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "riv/estimator.hpp"
#include "riv/sample.hpp"
#include "riv/systems.hpp"

namespace riv {

/// Affine map y = intercept + slopes * x, slopes stored row-major q x p.
struct AffineMap {
    std::size_t p = 0;
    std::size_t q = 0;
    std::vector<double> intercept;
    std::vector<double> slopes;

    double slope(std::size_t output, std::size_t input) const { return slopes[output * p + input]; }
};

/// Deterministic nominal predictor eta: R^p -> R^q.
class NominalModel {
public:
    enum class Kind { linear_affine, external_table, synthetic_eta };
    using Evaluator = std::function<void(std::span<const double> x, std::span<double> y)>;

    NominalModel(std::size_t p, std::size_t q, Kind kind, Evaluator evaluator);

    static NominalModel affine(AffineMap map);
    /// Lookup table from input rows to predicted rows; evaluating an input not in
    /// the table throws InvalidInput.
    static NominalModel table(const JointSample& x_yhat);
    /// Nominal (delta = 0) map of a synthetic benchmark system.
    static NominalModel synthetic(const systems::SystemSpec& spec);

    std::size_t p() const { return p_; }
    std::size_t q() const { return q_; }
    Kind kind() const { return kind_; }

    void evaluate(std::span<const double> x, std::span<double> y) const;
    std::vector<double> operator()(std::span<const double> x) const;

private:
    std::size_t p_;
    std::size_t q_;
    Kind kind_;
    Evaluator evaluator_;
};

/// Input block joined with residuals r = y - eta(x).
struct ResidualSample {
    JointSample joint;  ///< n x (p + q): inputs then residuals
    std::vector<double> bias_estimate;

    std::size_t rows() const { return joint.rows(); }
    std::span<const double> x(std::size_t i) const { return joint.x(i); }
    std::span<const double> r(std::size_t i) const { return joint.y(i); }
};

ResidualSample residuals(const JointSample& samples, const NominalModel& model);

/// Column means of the residuals.
std::vector<double> estimate_bias(const ResidualSample& residuals);

/// Model shifted by `bias`, i.e. eta(x) + bias.
NominalModel debias(const NominalModel& model, std::vector<double> bias);

struct PipelineOptions {
    bool debias = true;
};

/// Residual information value: emi of (x, residual) against the (optionally
/// debiased) nominal model.
EmiReport riv(const JointSample& samples, const NominalModel& model, const Schedule& schedule,
              const PipelineOptions& options = {});

/// Per-input-coordinate values EMI(x_j ; r).
struct RifVector {
    std::vector<double> values;
};

RifVector rif(const JointSample& samples, const NominalModel& model, const Schedule& schedule,
              const PipelineOptions& options = {});
/// Same, from precomputed residuals.
RifVector rif(const ResidualSample& residuals, const Schedule& schedule);

/// Concatenates RIF vectors in order.
std::vector<double> rif_signature(std::span<const RifVector> rifs);

/// Per-output least-squares affine fit. Throws DegenerateFit naming the
/// offending columns when the design (with intercept) is rank deficient.
AffineMap fit_affine(const JointSample& samples);
NominalModel fit_linear(const JointSample& samples);

}  // namespace riv
