#include "riv/sample.hpp"

#include <string>

#include "riv/error.hpp"

namespace riv {

JointSample::JointSample(std::size_t p, std::size_t q) : p_(p), q_(q) {}

JointSample::JointSample(std::size_t p, std::size_t q, std::vector<double> values)
    : p_(p), q_(q), values_(std::move(values)) {
    if (p_ + q_ == 0 || values_.size() % (p_ + q_) != 0) {
        throw InvalidInput("sample buffer of size " + std::to_string(values_.size()) +
                           " is not a whole number of rows of width " + std::to_string(p_ + q_));
    }
}

void JointSample::push_row(std::span<const double> row) {
    if (row.size() != dim()) {
        throw InvalidInput("row width " + std::to_string(row.size()) + " does not match sample width " +
                           std::to_string(dim()));
    }
    values_.insert(values_.end(), row.begin(), row.end());
}

JointSample JointSample::head(std::size_t n) const {
    if (n > rows()) {
        throw InvalidInput("requested " + std::to_string(n) + " rows from a sample of " + std::to_string(rows()));
    }
    return JointSample(p_, q_, std::vector<double>(values_.begin(), values_.begin() + n * dim()));
}

JointSample JointSample::select_x(std::span<const std::size_t> x_columns) const {
    for (std::size_t c : x_columns) {
        if (c >= p_) throw InvalidInput("input column " + std::to_string(c) + " out of range");
    }
    JointSample out(x_columns.size(), q_);
    out.reserve(rows());
    std::vector<double> buf(out.dim());
    for (std::size_t i = 0; i < rows(); ++i) {
        auto r = row(i);
        std::size_t k = 0;
        for (std::size_t c : x_columns) buf[k++] = r[c];
        for (std::size_t j = 0; j < q_; ++j) buf[k++] = r[p_ + j];
        out.push_row(buf);
    }
    return out;
}

JointSample join(const JointSample& inputs, const JointSample& responses) {
    if (inputs.rows() != responses.rows()) {
        throw InvalidInput("cannot join samples with " + std::to_string(inputs.rows()) + " and " +
                           std::to_string(responses.rows()) + " rows");
    }
    JointSample out(inputs.dim(), responses.dim());
    out.reserve(inputs.rows());
    std::vector<double> buf(out.dim());
    for (std::size_t i = 0; i < inputs.rows(); ++i) {
        auto a = inputs.row(i);
        auto b = responses.row(i);
        std::copy(a.begin(), a.end(), buf.begin());
        std::copy(b.begin(), b.end(), buf.begin() + static_cast<std::ptrdiff_t>(a.size()));
        out.push_row(buf);
    }
    return out;
}

}  // namespace riv
