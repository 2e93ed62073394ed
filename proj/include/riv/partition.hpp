#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "riv/sample.hpp"

namespace riv {

/// Half-open axis-aligned box [lower, upper) over the joint space. Bounds may be
/// infinite at the outer frontier.
struct CellBox {
    std::vector<double> lower;
    std::vector<double> upper;

    static CellBox whole_space(std::size_t dim);
    bool contains(std::span<const double> point) const;
    /// Membership of the projection onto coordinates [first, first + count).
    bool contains_block(std::span<const double> point, std::size_t first, std::size_t count) const;
};

struct Split {
    std::size_t axis = 0;
    double threshold = 0.0;
};

struct PartitionNode {
    CellBox box;
    std::optional<Split> split;
    std::optional<std::pair<std::size_t, std::size_t>> children;
    std::size_t depth = 0;
    std::size_t joint_count = 0;
    std::size_t x_marginal_count = 0;
    std::size_t r_marginal_count = 0;

    bool is_leaf() const { return !children.has_value(); }
};

/// Binary tree of cells indexed into a flat node arena; node 0 is the root and
/// children always sit after their parent.
class PartitionTree {
public:
    /// Root-only tree over R^(p+q) with no counts.
    static PartitionTree trivial(std::size_t p, std::size_t q);

    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }
    std::size_t q() const { return q_; }
    std::size_t dim() const { return p_ + q_; }

    const PartitionNode& root() const { return nodes_.front(); }
    const PartitionNode& node(std::size_t id) const { return nodes_.at(id); }
    std::size_t node_count() const { return nodes_.size(); }

    std::vector<std::size_t> leaves() const;
    std::size_t leaf_count() const;
    /// Id of the unique leaf containing the point.
    std::size_t locate(std::span<const double> point) const;

    /// Splits a leaf at `axis < threshold` (left) / `>= threshold` (right).
    /// Counts of the new children are zero until `recount` is applied.
    std::pair<std::size_t, std::size_t> split_leaf(std::size_t leaf, std::size_t axis, double threshold);

    friend PartitionTree grow_tree(const JointSample&, double, std::size_t);
    friend PartitionTree prune_tree(const PartitionTree&, double, double);
    friend PartitionTree recount(const PartitionTree&, const JointSample&);

private:
    PartitionTree(std::size_t p, std::size_t q) : p_(p), q_(q) {}

    std::vector<PartitionNode> nodes_;
    std::size_t n_ = 0;
    std::size_t p_ = 0;
    std::size_t q_ = 0;
};

inline constexpr std::size_t kDefaultMinSplit = 4;

/// Grows a statistically-equivalent (median-split) tree: a node is split while
/// its joint count exceeds `max_cell` and is at least `min_split`. Axes are
/// taken round-robin by depth, skipping axes that are constant in the cell.
PartitionTree grow_tree(const JointSample& samples, double max_cell, std::size_t min_split = kDefaultMinSplit);

/// Contribution of one cell to the plug-in mutual information sum, in nats.
/// Empty cells contribute 0.
double cell_term(const PartitionNode& node, std::size_t n);

/// Optimal pruned subtree for sum(cell_term) - lambda * leaf_penalty * |leaves|,
/// computed bottom-up. A node keeps its children only if they strictly beat it
/// as a leaf.
PartitionTree prune_tree(const PartitionTree& tree, double lambda, double leaf_penalty);

/// Same cells, joint and marginal counts recomputed against `samples`.
PartitionTree recount(const PartitionTree& tree, const JointSample& samples);

}  // namespace riv
