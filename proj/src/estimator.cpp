#include "riv/estimator.hpp"

#include <cmath>
#include <string>

#include "riv/error.hpp"

namespace riv {

void Schedule::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("schedule lambda must be positive");
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("schedule w must be positive");
    if (!(l > 0.0 && l < 1.0 / 3.0)) throw InvalidInput("schedule exponent l must lie in (0, 1/3)");
    if (!(a0 > 0.0) || !std::isfinite(a0)) throw InvalidInput("schedule a0 must be positive");
}

ScheduleValues Schedule::at(std::size_t n) const {
    if (n == 0) throw InvalidInput("schedule evaluated at n = 0");
    validate();
    const double nn = static_cast<double>(n);
    return ScheduleValues{w * std::pow(nn, -l), std::exp(std::cbrt(1.0 / nn)), a0 * std::pow(nn, -1.0 / 6.0)};
}

double leaf_penalty(const ScheduleValues& values, std::size_t n) {
    if (!(values.d_n < 8.0)) throw InvalidInput("d_n must stay below 8 for the pruning penalty");
    const double width = std::sqrt(std::log(8.0 / values.d_n) / static_cast<double>(n));
    return width / (values.b_n * values.b_n);
}

EmiReport emi(const JointSample& samples, const Schedule& schedule) {
    const std::size_t n = samples.rows();
    if (n < 2) throw InvalidInput("emi needs at least 2 rows, got " + std::to_string(n));
    if (samples.p() == 0 || samples.q() == 0) throw InvalidInput("emi needs p >= 1 and q >= 1");

    const ScheduleValues values = schedule.at(n);
    const PartitionTree grown = grow_tree(samples, static_cast<double>(n) * values.b_n);
    const PartitionTree pruned = prune_tree(grown, schedule.lambda, leaf_penalty(values, n));

    EmiReport report;
    report.n = n;
    report.p = samples.p();
    report.q = samples.q();
    report.schedule_values = values;
    report.leaf_count = pruned.leaf_count();
    report.collapsed = report.leaf_count == 1;
    if (!report.collapsed) {
        double sum = 0.0;
        for (std::size_t id : pruned.leaves()) sum += cell_term(pruned.node(id), n);
        report.emi = sum > 0.0 ? sum : 0.0;
    }
    return report;
}

double emi_fixed_partition(const JointSample& samples, const PartitionTree& tree) {
    if (samples.empty()) throw InvalidInput("emi_fixed_partition on an empty sample");
    const PartitionTree counted = recount(tree, samples);
    double sum = 0.0;
    for (std::size_t id : counted.leaves()) sum += cell_term(counted.node(id), counted.n());
    return sum;
}

}  // namespace riv
