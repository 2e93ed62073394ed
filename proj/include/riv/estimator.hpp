#pragma once

#include <cstddef>

#include "riv/partition.hpp"
#include "riv/sample.hpp"

namespace riv {

/// Per-n values of the estimator and detector parameter laws.
struct ScheduleValues {
    double b_n = 0.0;  ///< cell-size fraction: grow until cells hold at most n * b_n samples
    double d_n = 0.0;  ///< confidence level parameter of the pruning penalty
    double a_n = 0.0;  ///< detection threshold
};

/// Parameter laws b_n = w n^-l, d_n = exp(n^-1/3), a_n = a0 n^-1/6.
/// Defaults are the desk-scale benchmark configuration.
struct Schedule {
    double lambda = 2.3e-5;
    double w = 0.05;
    double l = 0.167;
    double a0 = 0.1;

    /// Throws InvalidInput unless lambda, w, a0 > 0 and 0 < l < 1/3.
    void validate() const;
    ScheduleValues at(std::size_t n) const;
};

/// Per-leaf penalty handed to prune_tree: sqrt(ln(8/d_n)/n) / b_n^2.
double leaf_penalty(const ScheduleValues& values, std::size_t n);

struct EmiReport {
    double emi = 0.0;  ///< nats, clamped at 0
    std::size_t leaf_count = 0;
    bool collapsed = false;
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t q = 0;
    ScheduleValues schedule_values;
};

/// Tree-partition mutual information estimate between the input and response
/// blocks of `samples`.
EmiReport emi(const JointSample& samples, const Schedule& schedule);

/// Unclamped plug-in sum over the leaves of `tree` with counts taken from `samples`.
double emi_fixed_partition(const JointSample& samples, const PartitionTree& tree);

}  // namespace riv
