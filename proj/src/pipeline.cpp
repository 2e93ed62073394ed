#include "riv/pipeline.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>

#include "riv/error.hpp"

namespace riv {

NominalModel::NominalModel(std::size_t p, std::size_t q, Kind kind, Evaluator evaluator)
    : p_(p), q_(q), kind_(kind), evaluator_(std::move(evaluator)) {
    if (p_ == 0 || q_ == 0) throw InvalidInput("nominal model needs p >= 1 and q >= 1");
}

NominalModel NominalModel::affine(AffineMap map) {
    if (map.intercept.size() != map.q || map.slopes.size() != map.p * map.q) {
        throw InvalidInput("affine map coefficient sizes do not match (p, q)");
    }
    const std::size_t p = map.p;
    const std::size_t q = map.q;
    auto shared = std::make_shared<const AffineMap>(std::move(map));
    return NominalModel(p, q, Kind::linear_affine, [shared](std::span<const double> x, std::span<double> y) {
        for (std::size_t o = 0; o < shared->q; ++o) {
            double acc = shared->intercept[o];
            for (std::size_t k = 0; k < shared->p; ++k) acc += shared->slope(o, k) * x[k];
            y[o] = acc;
        }
    });
}

NominalModel NominalModel::table(const JointSample& x_yhat) {
    using Table = std::map<std::vector<double>, std::vector<double>>;
    auto table = std::make_shared<Table>();
    for (std::size_t i = 0; i < x_yhat.rows(); ++i) {
        auto x = x_yhat.x(i);
        auto y = x_yhat.y(i);
        auto [it, inserted] = table->emplace(std::vector<double>(x.begin(), x.end()), std::vector<double>(y.begin(), y.end()));
        if (!inserted && !std::equal(it->second.begin(), it->second.end(), y.begin(), y.end())) {
            throw InvalidInput("prediction table maps input row " + std::to_string(i) + " to two different outputs");
        }
    }
    std::shared_ptr<const Table> frozen = table;
    return NominalModel(x_yhat.p(), x_yhat.q(), Kind::external_table,
                        [frozen](std::span<const double> x, std::span<double> y) {
                            auto it = frozen->find(std::vector<double>(x.begin(), x.end()));
                            if (it == frozen->end()) throw InvalidInput("input row not present in the prediction table");
                            std::copy(it->second.begin(), it->second.end(), y.begin());
                        });
}

NominalModel NominalModel::synthetic(const systems::SystemSpec& spec) {
    spec.validate();
    const systems::SystemSpec nominal = spec.nominal();
    return NominalModel(2, 1, Kind::synthetic_eta, [nominal](std::span<const double> x, std::span<double> y) {
        y[0] = systems::eval_eta(nominal, x);
    });
}

void NominalModel::evaluate(std::span<const double> x, std::span<double> y) const {
    if (x.size() != p_ || y.size() != q_) throw InvalidInput("nominal model called with wrong dimensions");
    evaluator_(x, y);
}

std::vector<double> NominalModel::operator()(std::span<const double> x) const {
    std::vector<double> y(q_);
    evaluate(x, y);
    return y;
}

ResidualSample residuals(const JointSample& samples, const NominalModel& model) {
    if (model.p() != samples.p() || model.q() != samples.q()) {
        throw InvalidInput("model dimensions (" + std::to_string(model.p()) + "," + std::to_string(model.q()) +
                           ") do not match sample (" + std::to_string(samples.p()) + "," +
                           std::to_string(samples.q()) + ")");
    }
    ResidualSample out{JointSample(samples.p(), samples.q()), {}};
    out.joint.reserve(samples.rows());
    std::vector<double> row(samples.dim());
    std::vector<double> yhat(samples.q());
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        auto x = samples.x(i);
        auto y = samples.y(i);
        model.evaluate(x, yhat);
        std::copy(x.begin(), x.end(), row.begin());
        for (std::size_t o = 0; o < samples.q(); ++o) row[samples.p() + o] = y[o] - yhat[o];
        out.joint.push_row(row);
    }
    if (!out.joint.empty()) out.bias_estimate = estimate_bias(out);
    return out;
}

std::vector<double> estimate_bias(const ResidualSample& residuals) {
    const std::size_t n = residuals.rows();
    if (n == 0) throw InvalidInput("cannot estimate bias from an empty residual sample");
    const std::size_t q = residuals.joint.q();
    std::vector<double> mean(q, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = residuals.r(i);
        for (std::size_t o = 0; o < q; ++o) mean[o] += r[o];
    }
    for (double& m : mean) m /= static_cast<double>(n);
    return mean;
}

NominalModel debias(const NominalModel& model, std::vector<double> bias) {
    if (bias.size() != model.q()) throw InvalidInput("bias dimension does not match model output dimension");
    return NominalModel(model.p(), model.q(), model.kind(),
                        [model, bias = std::move(bias)](std::span<const double> x, std::span<double> y) {
                            model.evaluate(x, y);
                            for (std::size_t o = 0; o < y.size(); ++o) y[o] += bias[o];
                        });
}

namespace {

ResidualSample pipeline_residuals(const JointSample& samples, const NominalModel& model,
                                  const PipelineOptions& options) {
    ResidualSample res = residuals(samples, model);
    if (!options.debias || res.rows() == 0) return res;
    return residuals(samples, debias(model, res.bias_estimate));
}

}  // namespace

EmiReport riv(const JointSample& samples, const NominalModel& model, const Schedule& schedule,
              const PipelineOptions& options) {
    return emi(pipeline_residuals(samples, model, options).joint, schedule);
}

RifVector rif(const ResidualSample& residuals, const Schedule& schedule) {
    RifVector out;
    out.values.reserve(residuals.joint.p());
    for (std::size_t j = 0; j < residuals.joint.p(); ++j) {
        const std::size_t column[1] = {j};
        out.values.push_back(emi(residuals.joint.select_x(column), schedule).emi);
    }
    return out;
}

RifVector rif(const JointSample& samples, const NominalModel& model, const Schedule& schedule,
              const PipelineOptions& options) {
    return rif(pipeline_residuals(samples, model, options), schedule);
}

std::vector<double> rif_signature(std::span<const RifVector> rifs) {
    if (rifs.empty()) throw InvalidInput("rif_signature needs at least one RIF vector");
    std::vector<double> out;
    for (const auto& v : rifs) out.insert(out.end(), v.values.begin(), v.values.end());
    return out;
}

AffineMap fit_affine(const JointSample& samples) {
    const std::size_t n = samples.rows();
    const std::size_t p = samples.p();
    const std::size_t q = samples.q();
    if (p == 0 || q == 0) throw InvalidInput("fit_linear needs p >= 1 and q >= 1");
    if (n <= p + 1) {
        throw DegenerateFit("affine fit needs more than p + 1 = " + std::to_string(p + 1) + " rows, got " +
                            std::to_string(n));
    }
    Eigen::MatrixXd design(n, p + 1);
    Eigen::MatrixXd targets(n, q);
    for (std::size_t i = 0; i < n; ++i) {
        design(static_cast<Eigen::Index>(i), 0) = 1.0;
        for (std::size_t k = 0; k < p; ++k) design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k + 1)) = samples(i, k);
        for (std::size_t o = 0; o < q; ++o) targets(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(o)) = samples(i, p + o);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(p + 1)) {
        std::string names;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) {
            if (!names.empty()) names += ", ";
            names += perm[k] == 0 ? std::string("intercept") : "x" + std::to_string(perm[k]);
        }
        throw DegenerateFit("design matrix is rank deficient; dependent column(s): " + names);
    }
    const Eigen::MatrixXd beta = qr.solve(targets);
    AffineMap map{p, q, std::vector<double>(q), std::vector<double>(p * q)};
    for (std::size_t o = 0; o < q; ++o) {
        map.intercept[o] = beta(0, static_cast<Eigen::Index>(o));
        for (std::size_t k = 0; k < p; ++k) {
            map.slopes[o * p + k] = beta(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(o));
        }
    }
    return map;
}

NominalModel fit_linear(const JointSample& samples) { return NominalModel::affine(fit_affine(samples)); }

}  // namespace riv
