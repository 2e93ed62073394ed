#include "riv/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "riv/error.hpp"

namespace riv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Indices = std::vector<std::size_t>;

// Threshold separating the in-cell values of one axis into two non-empty halves,
// or nullopt when the axis is constant.
std::optional<double> median_threshold(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    if (values.front() == values.back()) return std::nullopt;
    const std::size_t m = values.size();
    const std::size_t h = (m + 1) / 2;  // ceil(m/2), 1-based order statistic
    double lo = values[h - 1];
    double hi = values[h];
    if (lo == hi) {
        // Ties straddle the median. Move to the closest distinct boundary.
        auto first_eq = std::lower_bound(values.begin(), values.end(), lo);
        auto past_eq = std::upper_bound(values.begin(), values.end(), lo);
        const auto below = static_cast<long>(first_eq - values.begin());
        const auto above = static_cast<long>(values.end() - past_eq);
        const auto ties = static_cast<long>(past_eq - first_eq);
        // Cut above the tie block or below it, whichever is more balanced.
        const bool cut_above = below == 0 || (above > 0 && std::labs(below + ties - above) <= std::labs(ties + above - below));
        if (cut_above) {
            hi = *past_eq;
        } else {
            lo = *(first_eq - 1);
            hi = *first_eq;
        }
    }
    double t = lo + (hi - lo) / 2.0;
    if (!(t > lo)) t = hi;
    return t;
}

struct Grower {
    const JointSample& samples;
    double max_cell;
    std::size_t min_split;
    std::vector<PartitionNode>& nodes;

    std::size_t build(CellBox box, std::size_t depth, Indices joint, Indices xs, Indices rs) {
        const std::size_t id = nodes.size();
        nodes.push_back(PartitionNode{std::move(box), std::nullopt, std::nullopt, depth, joint.size(), xs.size(),
                                      rs.size()});
        const double m = static_cast<double>(joint.size());
        if (m <= max_cell || joint.size() < min_split) return id;

        const std::size_t dim = samples.dim();
        for (std::size_t t = 0; t < dim; ++t) {
            const std::size_t axis = (depth + t) % dim;
            std::vector<double> proj;
            proj.reserve(joint.size());
            for (std::size_t i : joint) proj.push_back(samples(i, axis));
            auto threshold = median_threshold(std::move(proj));
            if (!threshold) continue;
            split(id, axis, *threshold, depth, joint, xs, rs);
            return id;
        }
        return id;
    }

    void split(std::size_t id, std::size_t axis, double threshold, std::size_t depth, const Indices& joint,
               const Indices& xs, const Indices& rs) {
        auto partition_by = [&](const Indices& idx) {
            std::pair<Indices, Indices> out;
            for (std::size_t i : idx) (samples(i, axis) < threshold ? out.first : out.second).push_back(i);
            return out;
        };
        auto [jl, jr] = partition_by(joint);
        const bool input_axis = axis < samples.p();
        // Marginal memberships only change for the block the split axis belongs to.
        auto [xl, xr] = input_axis ? partition_by(xs) : std::pair<Indices, Indices>{xs, xs};
        auto [rl, rr] = input_axis ? std::pair<Indices, Indices>{rs, rs} : partition_by(rs);

        CellBox lbox = nodes[id].box;
        CellBox rbox = nodes[id].box;
        lbox.upper[axis] = threshold;
        rbox.lower[axis] = threshold;
        const std::size_t left = build(std::move(lbox), depth + 1, std::move(jl), std::move(xl), std::move(rl));
        const std::size_t right = build(std::move(rbox), depth + 1, std::move(jr), std::move(xr), std::move(rr));
        nodes[id].split = Split{axis, threshold};
        nodes[id].children = std::pair{left, right};
    }
};

void check_finite(const JointSample& samples) {
    const auto& v = samples.values();
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k])) {
            throw InvalidInput("non-finite sample entry at row " + std::to_string(k / samples.dim()) + ", column " +
                               std::to_string(k % samples.dim()));
        }
    }
}

}  // namespace

CellBox CellBox::whole_space(std::size_t dim) {
    return CellBox{std::vector<double>(dim, -kInf), std::vector<double>(dim, kInf)};
}

bool CellBox::contains(std::span<const double> point) const { return contains_block(point, 0, lower.size()); }

bool CellBox::contains_block(std::span<const double> point, std::size_t first, std::size_t count) const {
    for (std::size_t k = first; k < first + count; ++k) {
        if (!(point[k] >= lower[k] && point[k] < upper[k])) return false;
    }
    return true;
}

PartitionTree PartitionTree::trivial(std::size_t p, std::size_t q) {
    if (p == 0 || q == 0) throw InvalidInput("partition needs p >= 1 and q >= 1");
    PartitionTree tree(p, q);
    tree.nodes_.push_back(PartitionNode{CellBox::whole_space(p + q), std::nullopt, std::nullopt, 0, 0, 0, 0});
    return tree;
}

std::vector<std::size_t> PartitionTree::leaves() const {
    std::vector<std::size_t> out;
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const std::size_t id = stack.back();
        stack.pop_back();
        const auto& nd = nodes_[id];
        if (nd.is_leaf()) {
            out.push_back(id);
        } else {
            stack.push_back(nd.children->second);
            stack.push_back(nd.children->first);
        }
    }
    return out;
}

std::size_t PartitionTree::leaf_count() const { return leaves().size(); }

std::size_t PartitionTree::locate(std::span<const double> point) const {
    if (point.size() != dim()) throw InvalidInput("point dimension does not match the partition");
    std::size_t id = 0;
    while (!nodes_[id].is_leaf()) {
        const auto& nd = nodes_[id];
        id = point[nd.split->axis] < nd.split->threshold ? nd.children->first : nd.children->second;
    }
    return id;
}

std::pair<std::size_t, std::size_t> PartitionTree::split_leaf(std::size_t leaf, std::size_t axis, double threshold) {
    if (leaf >= nodes_.size() || !nodes_[leaf].is_leaf()) throw InvalidInput("split_leaf target is not a leaf");
    if (axis >= dim()) throw InvalidInput("split axis out of range");
    const auto& box = nodes_[leaf].box;
    if (!(threshold > box.lower[axis] && threshold < box.upper[axis])) {
        throw InvalidInput("split threshold must lie strictly inside the cell");
    }
    CellBox lbox = box;
    CellBox rbox = box;
    lbox.upper[axis] = threshold;
    rbox.lower[axis] = threshold;
    const std::size_t depth = nodes_[leaf].depth + 1;
    const std::size_t left = nodes_.size();
    nodes_.push_back(PartitionNode{std::move(lbox), std::nullopt, std::nullopt, depth, 0, 0, 0});
    nodes_.push_back(PartitionNode{std::move(rbox), std::nullopt, std::nullopt, depth, 0, 0, 0});
    nodes_[leaf].split = Split{axis, threshold};
    nodes_[leaf].children = std::pair{left, left + 1};
    return {left, left + 1};
}

PartitionTree grow_tree(const JointSample& samples, double max_cell, std::size_t min_split) {
    if (samples.empty()) throw InvalidInput("cannot grow a partition on an empty sample");
    if (!(max_cell > 0.0)) throw InvalidInput("max_cell must be positive");
    if (min_split < 2) throw InvalidInput("min_split must be at least 2");
    check_finite(samples);

    PartitionTree tree(samples.p(), samples.q());
    tree.n_ = samples.rows();
    Indices all(samples.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    Grower grower{samples, max_cell, min_split, tree.nodes_};
    grower.build(CellBox::whole_space(samples.dim()), 0, all, all, all);
    return tree;
}

double cell_term(const PartitionNode& node, std::size_t n) {
    if (node.joint_count == 0) return 0.0;
    const double j = static_cast<double>(node.joint_count);
    const double nn = static_cast<double>(n);
    return (j / nn) *
           std::log(j * nn / (static_cast<double>(node.x_marginal_count) * static_cast<double>(node.r_marginal_count)));
}

PartitionTree prune_tree(const PartitionTree& tree, double lambda, double leaf_penalty) {
    if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
    if (!(leaf_penalty >= 0.0) || !std::isfinite(leaf_penalty)) throw InvalidInput("leaf_penalty must be >= 0");
    const double cost = lambda * leaf_penalty;
    const auto& nodes = tree.nodes_;

    std::vector<double> best(nodes.size());
    std::vector<char> keep(nodes.size(), 0);
    for (std::size_t id = nodes.size(); id-- > 0;) {
        const auto& nd = nodes[id];
        const double as_leaf = cell_term(nd, tree.n_) - cost;
        if (nd.is_leaf()) {
            best[id] = as_leaf;
            continue;
        }
        const double split_score = best[nd.children->first] + best[nd.children->second];
        keep[id] = split_score > as_leaf;
        best[id] = keep[id] ? split_score : as_leaf;
    }

    PartitionTree out(tree.p_, tree.q_);
    out.n_ = tree.n_;
    // (source id, parent slot in out)
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    out.nodes_.reserve(nodes.size());
    std::vector<std::size_t> remap(nodes.size(), 0);
    // Breadth-first copy keeps children after their parent.
    for (std::size_t head = 0; head < stack.size(); ++head) {
        const std::size_t src = stack[head].first;
        remap[src] = out.nodes_.size();
        PartitionNode copy = nodes[src];
        if (!keep[src]) {
            copy.split.reset();
            copy.children.reset();
        } else {
            stack.push_back({nodes[src].children->first, 0});
            stack.push_back({nodes[src].children->second, 0});
        }
        out.nodes_.push_back(std::move(copy));
    }
    for (auto& nd : out.nodes_) {
        if (nd.children) nd.children = std::pair{remap[nd.children->first], remap[nd.children->second]};
    }
    return out;
}

PartitionTree recount(const PartitionTree& tree, const JointSample& samples) {
    if (samples.p() != tree.p_ || samples.q() != tree.q_) {
        throw InvalidInput("sample dimensions (" + std::to_string(samples.p()) + "," + std::to_string(samples.q()) +
                           ") do not match partition (" + std::to_string(tree.p_) + "," + std::to_string(tree.q_) +
                           ")");
    }
    check_finite(samples);
    PartitionTree out = tree;
    out.n_ = samples.rows();
    for (auto& nd : out.nodes_) {
        nd.joint_count = nd.x_marginal_count = nd.r_marginal_count = 0;
        for (std::size_t i = 0; i < samples.rows(); ++i) {
            auto row = samples.row(i);
            const bool in_x = nd.box.contains_block(row, 0, tree.p_);
            const bool in_r = nd.box.contains_block(row, tree.p_, tree.q_);
            nd.x_marginal_count += in_x;
            nd.r_marginal_count += in_r;
            nd.joint_count += in_x && in_r;
        }
    }
    return out;
}

}  // namespace riv
