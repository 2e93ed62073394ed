#include "riv/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riv/error.hpp"
#include "riv/parallel.hpp"

namespace riv {

Decision decide(double emi, double threshold, std::size_t n) {
    if (!std::isfinite(emi) || !std::isfinite(threshold)) throw InvalidInput("decide needs finite inputs");
    if (!(threshold > 0.0)) throw InvalidInput("decision threshold must be positive");
    return Decision{emi >= threshold, emi, threshold, n};
}

bool SampleSource::next(std::span<double> row) {
    if (cursor_ >= sample_.rows()) return false;
    auto src = sample_.row(cursor_++);
    std::copy(src.begin(), src.end(), row.begin());
    return true;
}

SystemSource::SystemSource(const systems::SystemSpec& spec) : generator_(spec), nominal_(spec.nominal()) {}

bool SystemSource::next(std::span<double> row) {
    std::array<double, 3> xy{};
    generator_.next(xy);
    row[0] = xy[0];
    row[1] = xy[1];
    row[2] = xy[2] - systems::eval_eta(nominal_, std::span<const double>(xy.data(), 2));
    return true;
}

DecisionTrace run_scheme(RowSource& source, const Schedule& schedule, std::span<const std::size_t> checkpoints) {
    if (checkpoints.empty()) throw InvalidInput("run_scheme needs at least one checkpoint");
    for (std::size_t k = 1; k < checkpoints.size(); ++k) {
        if (checkpoints[k] <= checkpoints[k - 1]) throw InvalidInput("checkpoints must be strictly increasing");
    }
    schedule.validate();

    JointSample rows(source.p(), source.q());
    rows.reserve(checkpoints.back());
    std::vector<double> row(source.p() + source.q());
    DecisionTrace trace;
    for (std::size_t n : checkpoints) {
        while (rows.rows() < n) {
            if (!source.next(row)) {
                throw InvalidInput("row source exhausted after " + std::to_string(rows.rows()) +
                                   " rows; checkpoint " + std::to_string(n) + " unreachable");
            }
            rows.push_row(row);
        }
        const EmiReport report = emi(rows, schedule);
        trace.checkpoints.push_back(n);
        trace.decisions.push_back(decide(report.emi, report.schedule_values.a_n, n));
    }
    return trace;
}

CollapseTime collapse_time(const DecisionTrace& trace, bool i) {
    const bool wrong = !i;
    for (std::size_t k = trace.decisions.size(); k-- > 0;) {
        if (trace.decisions[k].value == wrong) {
            if (k + 1 == trace.decisions.size()) return CollapseTime{true, 0};
            return CollapseTime{false, trace.checkpoints[k]};
        }
    }
    return CollapseTime{false, 0};
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) { return derive_seed(base, {0x7472ULL, trial}); }

ErrorRateEstimate estimate_error_rate(const systems::SystemSpec& system, const Schedule& schedule, std::size_t n,
                                      std::size_t trials, Hypothesis truth, std::size_t threads) {
    if (trials == 0) throw InvalidInput("estimate_error_rate needs at least one trial");
    if (n < 2) throw InvalidInput("estimate_error_rate needs n >= 2");
    if (system.drifted() != (truth == Hypothesis::h1)) {
        throw InvalidInput(truth == Hypothesis::h0 ? "H0 trials need delta = 0" : "H1 trials need a nonzero delta");
    }
    schedule.validate();
    const NominalModel nominal = NominalModel::synthetic(system);

    std::vector<char> rejected(trials, 0);
    parallel_for(trials, threads, [&](std::size_t t) {
        systems::SystemSpec spec = system;
        spec.seed = trial_seed(system.seed, t);
        const EmiReport report = riv(systems::sample(spec, n), nominal, schedule);
        rejected[t] = decide(report.emi, report.schedule_values.a_n, n).value;
    });

    ErrorRateEstimate out;
    out.kind = truth == Hypothesis::h0 ? ErrorRateEstimate::Kind::significance : ErrorRateEstimate::Kind::power;
    out.trials = trials;
    out.rejections = static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), 1));
    out.rate = static_cast<double>(out.rejections) / static_cast<double>(trials);
    out.n = n;
    return out;
}

}  // namespace riv
