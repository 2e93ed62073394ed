#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "riv/estimator.hpp"
#include "riv/pipeline.hpp"
#include "riv/systems.hpp"

namespace riv {

struct Decision {
    bool value = false;  ///< true = reject H0 (drift detected)
    double emi = 0.0;
    double threshold = 0.0;
    std::size_t n = 0;
};

/// Rejects H0 iff emi >= threshold.
Decision decide(double emi, double threshold, std::size_t n);

struct DecisionTrace {
    std::vector<std::size_t> checkpoints;
    std::vector<Decision> decisions;
};

/// Source of joint (input, residual) rows, replayable from its seed.
class RowSource {
public:
    virtual ~RowSource() = default;
    virtual std::size_t p() const = 0;
    virtual std::size_t q() const = 0;
    /// Writes the next row; returns false when exhausted.
    virtual bool next(std::span<double> row) = 0;
};

/// Serves the rows of a fixed sample in order.
class SampleSource : public RowSource {
public:
    explicit SampleSource(JointSample sample) : sample_(std::move(sample)) {}
    std::size_t p() const override { return sample_.p(); }
    std::size_t q() const override { return sample_.q(); }
    bool next(std::span<double> row) override;

private:
    JointSample sample_;
    std::size_t cursor_ = 0;
};

/// Unbounded stream of (x1, x2, residual) rows from a synthetic system, residuals
/// taken against the system's nominal (delta = 0) map.
class SystemSource : public RowSource {
public:
    explicit SystemSource(const systems::SystemSpec& spec);
    std::size_t p() const override { return 2; }
    std::size_t q() const override { return 1; }
    bool next(std::span<double> row) override;

private:
    systems::Generator generator_;
    systems::SystemSpec nominal_;
};

/// Decides at each checkpoint on the first `checkpoint` rows of the source.
DecisionTrace run_scheme(RowSource& source, const Schedule& schedule, std::span<const std::size_t> checkpoints);

/// Last checkpoint at which the trace decided 1 - i. `unresolved` when that
/// happens at the final checkpoint, since a finite trace cannot witness collapse.
struct CollapseTime {
    bool unresolved = false;
    std::size_t value = 0;

    friend bool operator==(const CollapseTime&, const CollapseTime&) = default;
};

CollapseTime collapse_time(const DecisionTrace& trace, bool i);

enum class Hypothesis { h0, h1 };

struct ErrorRateEstimate {
    enum class Kind { significance, power };
    Kind kind = Kind::significance;
    std::size_t trials = 0;
    std::size_t rejections = 0;
    double rate = 0.0;
    std::size_t n = 0;
};

/// Seed of trial `trial` derived from the system's base seed.
std::uint64_t trial_seed(std::uint64_t base, std::size_t trial);

/// Rejection frequency of the residual-information test over seeded trials.
/// `threads` = 0 uses hardware concurrency; the result does not depend on it.
ErrorRateEstimate estimate_error_rate(const systems::SystemSpec& system, const Schedule& schedule, std::size_t n,
                                      std::size_t trials, Hypothesis truth, std::size_t threads = 0);

}  // namespace riv
