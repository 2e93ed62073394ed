#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riv {

/// Row-major n x (p+q) matrix of paired observations. The first p columns are
/// the input block, the remaining q columns the response (or residual) block.
class JointSample {
public:
    JointSample() = default;
    JointSample(std::size_t p, std::size_t q);
    JointSample(std::size_t p, std::size_t q, std::vector<double> values);

    std::size_t rows() const { return dim() == 0 ? 0 : values_.size() / dim(); }
    std::size_t p() const { return p_; }
    std::size_t q() const { return q_; }
    std::size_t dim() const { return p_ + q_; }
    bool empty() const { return values_.empty(); }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim(), dim()}; }
    std::span<const double> x(std::size_t i) const { return row(i).first(p_); }
    std::span<const double> y(std::size_t i) const { return row(i).subspan(p_); }
    double operator()(std::size_t i, std::size_t k) const { return values_[i * dim() + k]; }

    void push_row(std::span<const double> row);
    void reserve(std::size_t n) { values_.reserve(n * dim()); }

    /// First n rows.
    JointSample head(std::size_t n) const;
    /// Selected input column(s) against the full response block.
    JointSample select_x(std::span<const std::size_t> x_columns) const;

    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const JointSample&, const JointSample&) = default;

private:
    std::size_t p_ = 0;
    std::size_t q_ = 0;
    std::vector<double> values_;
};

/// Concatenates an n x p input block and an n x q block row by row.
JointSample join(const JointSample& inputs, const JointSample& responses);

}  // namespace riv
