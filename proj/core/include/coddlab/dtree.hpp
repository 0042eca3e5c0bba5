#pragma once

#include "coddlab/partition.hpp"
#include "coddlab/space.hpp"

#include <memory>
#include <string>
#include <vector>

namespace coddlab {

/// Extensional program: total mapping input -> output identifier.
class Labeling {
public:
    Labeling(InputSpace space, std::vector<int> labels)
        : space_(space)
        , labels_(std::move(labels))
    {
        if (labels_.size() != space_.size()) {
            throw std::invalid_argument("Labeling: label vector size mismatch");
        }
    }

    const InputSpace& space() const { return space_; }
    int operator()(Input x) const { return labels_.at(x); }
    const std::vector<int>& labels() const { return labels_; }

    Partition partition() const { return Partition(space_, labels_); }

private:
    InputSpace space_;
    std::vector<int> labels_;
};

/// Set of inputs fixed on some bit positions and free on the rest; the
/// inputs reaching a decision-tree node always form one of these.
struct Subcube {
    int n = 0;
    Input fixed_mask = 0; // numeric bit positions
    Input fixed_vals = 0;

    static Subcube full(int n) { return Subcube{n, 0, 0}; }

    bool contains(Input x) const { return (x & fixed_mask) == fixed_vals; }
    bool is_free(int pos) const { return !(fixed_mask & numeric_bit(pos)); }

    /// Restrict bit position pos (0 = most significant) to value v.
    Subcube restricted(int pos, int v) const
    {
        Input b = numeric_bit(pos);
        return Subcube{n, fixed_mask | b, v ? (fixed_vals | b) : fixed_vals};
    }

    Input numeric_bit(int pos) const { return Input{1} << (n - 1 - pos); }

    /// Visits every member input in ascending numeric order.
    template <typename F>
    void for_each(F&& f) const
    {
        Input free_mask = (Input{1} << n) - 1;
        free_mask &= ~fixed_mask;
        // iterate subsets of free_mask
        Input sub = 0;
        while (true) {
            f(fixed_vals | sub);
            if (sub == free_mask) {
                break;
            }
            sub = (sub - free_mask) & free_mask;
        }
    }
};

/// Bit-querying binary decision tree. Immutable; nodes shared by value copy.
/// No bit index repeats along a root-to-leaf path (enforced at construction).
class DecisionTree {
public:
    struct Node {
        int bit_index = -1; // -1: leaf
        int label = 0;      // leaf payload
        std::shared_ptr<const Node> zero;
        std::shared_ptr<const Node> one;

        bool is_leaf() const { return bit_index < 0; }
    };

    static DecisionTree leaf(int label);
    static DecisionTree node(int bit_index, DecisionTree on_zero, DecisionTree on_one);

    /// Node construction without the repeated-bit check. Random growth
    /// re-queries fixed bits on purpose, leaving one branch unreachable.
    static DecisionTree node_allow_requery(int bit_index, DecisionTree on_zero,
                                           DecisionTree on_one);

    const Node& root() const { return *root_; }
    std::shared_ptr<const Node> root_ptr() const { return root_; }
    bool is_leaf() const { return root_->is_leaf(); }

    bool operator==(const DecisionTree& o) const;

    /// Canonical text form, also the lexicographic tie-break key:
    /// "L<label>" | "N<bit>(<zero>,<one>)".
    std::string serialize() const;

private:
    explicit DecisionTree(std::shared_ptr<const Node> root)
        : root_(std::move(root))
    {
    }

    std::shared_ptr<const Node> root_;
};

int eval_tree(const DecisionTree& t, const BitString& x);
int eval_tree(const DecisionTree& t, const InputSpace& space, Input x);

enum class PartitionMode { ByLeaf, ByOutput };

Partition induced_partition(const DecisionTree& t, const InputSpace& space, PartitionMode mode);

/// Labeling realized by the tree over the whole space.
Labeling tree_labeling(const DecisionTree& t, const InputSpace& space);

Rat average_depth(const DecisionTree& t, const Distribution& d);

/// Number of internal (decision) nodes.
int tree_size(const DecisionTree& t);

/// Depth (query count) along the path of input x.
int path_length(const DecisionTree& t, const InputSpace& space, Input x);

constexpr int kMaxOptimalTreeBits = 12;

enum class OptimalTieBreak {
    LowestBit,  // among equal-cost bits pick the lowest index
    MaxRootGain // prefer the bit with the most information gain, then lowest
};

struct OptimalTreeResult {
    DecisionTree tree;
    Rat min_average_depth;
};

/// Exact minimum-average-depth tree realizing lab, by dynamic programming
/// over subcubes. Throws std::invalid_argument when n exceeds capacity.
OptimalTreeResult optimal_tree(const Labeling& lab, const Distribution& d,
                               OptimalTieBreak tie = OptimalTieBreak::LowestBit);

/// Greedy top-down induction: splits on the bit with maximal Shannon
/// information gain about the label inside the current subcube; recurses
/// until label-pure. Zero-gain splits are taken when the subcube is impure.
DecisionTree greedy_tree(const Labeling& lab, const Distribution& d);

/// Shannon entropy (bits) of the label distribution restricted to a subcube.
/// Zero when the subcube carries no mass.
double subcube_label_entropy(const Labeling& lab, const Distribution& d, const Subcube& s);

/// Information gain of splitting subcube s on bit position `pos`.
double split_gain(const Labeling& lab, const Distribution& d, const Subcube& s, int pos);

/// Total probability mass inside a subcube.
Rat subcube_mass(const Distribution& d, const Subcube& s);

} // namespace coddlab
