#include "coddlab/dtree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace coddlab {

namespace {

bool contains_bit(const DecisionTree::Node& node, int bit_index)
{
    if (node.is_leaf()) {
        return false;
    }
    return node.bit_index == bit_index || contains_bit(*node.zero, bit_index) ||
           contains_bit(*node.one, bit_index);
}

} // namespace

DecisionTree DecisionTree::leaf(int label)
{
    auto n = std::make_shared<Node>();
    n->bit_index = -1;
    n->label = label;
    return DecisionTree(std::move(n));
}

DecisionTree DecisionTree::node(int bit_index, DecisionTree on_zero, DecisionTree on_one)
{
    if (bit_index < 0) {
        throw std::invalid_argument("DecisionTree: negative bit index");
    }
    if (contains_bit(on_zero.root(), bit_index) || contains_bit(on_one.root(), bit_index)) {
        throw std::invalid_argument("DecisionTree: bit " + std::to_string(bit_index) +
                                    " re-queried below its own node");
    }
    return node_allow_requery(bit_index, std::move(on_zero), std::move(on_one));
}

DecisionTree DecisionTree::node_allow_requery(int bit_index, DecisionTree on_zero,
                                              DecisionTree on_one)
{
    if (bit_index < 0) {
        throw std::invalid_argument("DecisionTree: negative bit index");
    }
    auto n = std::make_shared<Node>();
    n->bit_index = bit_index;
    n->zero = on_zero.root_ptr();
    n->one = on_one.root_ptr();
    return DecisionTree(std::move(n));
}

namespace {

void serialize_node(const DecisionTree::Node& node, std::string& out)
{
    if (node.is_leaf()) {
        out += 'L';
        out += std::to_string(node.label);
    } else {
        out += 'N';
        out += std::to_string(node.bit_index);
        out += '(';
        serialize_node(*node.zero, out);
        out += ',';
        serialize_node(*node.one, out);
        out += ')';
    }
}

} // namespace

std::string DecisionTree::serialize() const
{
    std::string out;
    serialize_node(*root_, out);
    return out;
}

bool DecisionTree::operator==(const DecisionTree& o) const
{
    return serialize() == o.serialize();
}

int eval_tree(const DecisionTree& t, const BitString& x)
{
    const DecisionTree::Node* node = &t.root();
    while (!node->is_leaf()) {
        int b = node->bit_index < x.length ? x.bit(node->bit_index) : 0;
        node = b ? node->one.get() : node->zero.get();
    }
    return node->label;
}

int eval_tree(const DecisionTree& t, const InputSpace& space, Input x)
{
    return eval_tree(t, BitString{x, space.bits()});
}

int path_length(const DecisionTree& t, const InputSpace& space, Input x)
{
    const DecisionTree::Node* node = &t.root();
    int depth = 0;
    while (!node->is_leaf()) {
        node = space.bit(x, node->bit_index) ? node->one.get() : node->zero.get();
        ++depth;
    }
    return depth;
}

Partition induced_partition(const DecisionTree& t, const InputSpace& space, PartitionMode mode)
{
    std::vector<int> cell(space.size());
    if (mode == PartitionMode::ByOutput) {
        std::map<int, int> label_cell;
        for (Input x = 0; x < space.size(); ++x) {
            int lbl = eval_tree(t, space, x);
            cell[x] = label_cell.try_emplace(lbl, static_cast<int>(label_cell.size())).first->second;
        }
    } else {
        // Leaves are tree positions, not node objects: structurally equal
        // subtrees may share nodes, so key cells by the root-to-leaf path.
        std::map<std::string, int> leaf_cell;
        for (Input x = 0; x < space.size(); ++x) {
            const DecisionTree::Node* node = &t.root();
            std::string path;
            while (!node->is_leaf()) {
                int b = space.bit(x, node->bit_index);
                path += b ? '1' : '0';
                node = b ? node->one.get() : node->zero.get();
            }
            cell[x] = leaf_cell.try_emplace(std::move(path), static_cast<int>(leaf_cell.size()))
                          .first->second;
        }
    }
    return Partition(space, cell);
}

Labeling tree_labeling(const DecisionTree& t, const InputSpace& space)
{
    std::vector<int> labels(space.size());
    for (Input x = 0; x < space.size(); ++x) {
        labels[x] = eval_tree(t, space, x);
    }
    return Labeling(space, labels);
}

Rat average_depth(const DecisionTree& t, const Distribution& d)
{
    Rat total = 0;
    const auto& space = d.space();
    for (Input x = 0; x < space.size(); ++x) {
        if (d.mass(x) != 0) {
            total += d.mass(x) * path_length(t, space, x);
        }
    }
    return total;
}

int tree_size(const DecisionTree& t)
{
    struct Counter {
        int count = 0;
        void visit(const DecisionTree::Node& node)
        {
            if (!node.is_leaf()) {
                ++count;
                visit(*node.zero);
                visit(*node.one);
            }
        }
    } c;
    c.visit(t.root());
    return c.count;
}

Rat subcube_mass(const Distribution& d, const Subcube& s)
{
    Rat total = 0;
    s.for_each([&](Input x) { total += d.mass(x); });
    return total;
}

double subcube_label_entropy(const Labeling& lab, const Distribution& d, const Subcube& s)
{
    std::map<int, Rat> mass_by_label;
    Rat total = 0;
    s.for_each([&](Input x) {
        mass_by_label[lab(x)] += d.mass(x);
        total += d.mass(x);
    });
    if (total == 0) {
        return 0.0;
    }
    double h = 0.0;
    for (const auto& [lbl, m] : mass_by_label) {
        if (m > 0) {
            double p = rat_to_double(m / total);
            h -= p * std::log2(p);
        }
    }
    return h;
}

double split_gain(const Labeling& lab, const Distribution& d, const Subcube& s, int pos)
{
    Rat total = subcube_mass(d, s);
    if (total == 0) {
        return 0.0;
    }
    Subcube s0 = s.restricted(pos, 0);
    Subcube s1 = s.restricted(pos, 1);
    double w0 = rat_to_double(subcube_mass(d, s0) / total);
    double w1 = rat_to_double(subcube_mass(d, s1) / total);
    double gain = subcube_label_entropy(lab, d, s) - w0 * subcube_label_entropy(lab, d, s0) -
                  w1 * subcube_label_entropy(lab, d, s1);
    return gain < 0 ? 0.0 : gain;
}

namespace {

// Pure iff every input in the subcube shares a label; returns it via out.
bool subcube_pure(const Labeling& lab, const Subcube& s, int& label_out)
{
    bool first = true;
    bool pure = true;
    int label = 0;
    s.for_each([&](Input x) {
        if (first) {
            label = lab(x);
            first = false;
        } else if (lab(x) != label) {
            pure = false;
        }
    });
    label_out = label;
    return pure;
}

struct DpEntry {
    Rat cost;
    int best_bit = -1; // -1: leaf
    int leaf_label = 0;
};

class OptimalDp {
public:
    OptimalDp(const Labeling& lab, const Distribution& d, OptimalTieBreak tie)
        : lab_(lab)
        , d_(d)
        , tie_(tie)
    {
    }

    // Returned by value: the memo table rehashes during recursion.
    DpEntry solve(const Subcube& s)
    {
        std::uint64_t key = (std::uint64_t(s.fixed_mask) << 16) | s.fixed_vals;
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            return it->second;
        }
        DpEntry e;
        int label = 0;
        if (subcube_pure(lab_, s, label)) {
            e.cost = 0;
            e.leaf_label = label;
        } else {
            Rat mass = subcube_mass(d_, s);
            bool have = false;
            double best_gain = 0.0;
            for (int pos = 0; pos < s.n; ++pos) {
                if (!s.is_free(pos)) {
                    continue;
                }
                Rat cost = mass + solve(s.restricted(pos, 0)).cost +
                           solve(s.restricted(pos, 1)).cost;
                bool better = !have || cost < e.cost;
                if (!better && cost == e.cost && tie_ == OptimalTieBreak::MaxRootGain) {
                    double g = split_gain(lab_, d_, s, pos);
                    better = g > best_gain + 1e-12;
                }
                if (better) {
                    e.cost = cost;
                    e.best_bit = pos;
                    if (tie_ == OptimalTieBreak::MaxRootGain) {
                        best_gain = split_gain(lab_, d_, s, pos);
                    }
                    have = true;
                }
            }
        }
        return memo_.emplace(key, std::move(e)).first->second;
    }

    DecisionTree build(const Subcube& s)
    {
        DpEntry e = solve(s);
        if (e.best_bit < 0) {
            return DecisionTree::leaf(e.leaf_label);
        }
        return DecisionTree::node(e.best_bit, build(s.restricted(e.best_bit, 0)),
                                  build(s.restricted(e.best_bit, 1)));
    }

private:
    const Labeling& lab_;
    const Distribution& d_;
    OptimalTieBreak tie_;
    std::unordered_map<std::uint64_t, DpEntry> memo_;
};

} // namespace

OptimalTreeResult optimal_tree(const Labeling& lab, const Distribution& d, OptimalTieBreak tie)
{
    if (lab.space() != d.space()) {
        throw std::invalid_argument("optimal_tree: labeling/distribution space mismatch");
    }
    int n = lab.space().bits();
    if (n > kMaxOptimalTreeBits) {
        throw std::invalid_argument("optimal_tree: n=" + std::to_string(n) +
                                    " exceeds capacity (max " +
                                    std::to_string(kMaxOptimalTreeBits) + ")");
    }
    OptimalDp dp(lab, d, tie);
    Subcube root = Subcube::full(n);
    DecisionTree t = dp.build(root);
    return OptimalTreeResult{t, dp.solve(root).cost};
}

namespace {

DecisionTree greedy_build(const Labeling& lab, const Distribution& d, const Subcube& s)
{
    int label = 0;
    if (subcube_pure(lab, s, label)) {
        return DecisionTree::leaf(label);
    }
    int best_pos = -1;
    double best_gain = -1.0;
    for (int pos = 0; pos < s.n; ++pos) {
        if (!s.is_free(pos)) {
            continue;
        }
        double g = split_gain(lab, d, s, pos);
        if (g > best_gain + 1e-12) {
            best_gain = g;
            best_pos = pos;
        }
    }
    // Impure subcube always has a free bit left: with every bit fixed the
    // subcube is a single input.
    return DecisionTree::node(best_pos, greedy_build(lab, d, s.restricted(best_pos, 0)),
                              greedy_build(lab, d, s.restricted(best_pos, 1)));
}

} // namespace

DecisionTree greedy_tree(const Labeling& lab, const Distribution& d)
{
    if (lab.space() != d.space()) {
        throw std::invalid_argument("greedy_tree: labeling/distribution space mismatch");
    }
    return greedy_build(lab, d, Subcube::full(lab.space().bits()));
}

} // namespace coddlab
