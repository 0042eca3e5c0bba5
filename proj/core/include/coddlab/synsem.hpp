#pragma once

#include "coddlab/dtree.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace coddlab {

/// Decision tree whose internal nodes carry the information gain (in bits,
/// stored as the exact rational image of the computed double) their split
/// provides about the output label; leaves carry 0.
class EntropyLabeledTree {
public:
    struct Node {
        int bit_index = -1; // -1: leaf
        int label = 0;      // leaf output
        Rat gain;           // 0 at leaves
        std::shared_ptr<const Node> zero;
        std::shared_ptr<const Node> one;

        bool is_leaf() const { return bit_index < 0; }
    };

    explicit EntropyLabeledTree(std::shared_ptr<const Node> root)
        : root_(std::move(root))
    {
    }

    const Node& root() const { return *root_; }
    std::shared_ptr<const Node> root_ptr() const { return root_; }

private:
    std::shared_ptr<const Node> root_;
};

/// Labels every internal node of t with its split gain under d. Throws
/// std::invalid_argument unless t realizes lab.
EntropyLabeledTree entropy_labels(const DecisionTree& t, const Labeling& lab,
                                  const Distribution& d);

enum class CostVariant { EntropyWeighted, DepthWeighted };

struct EditCostScheme {
    CostVariant variant = CostVariant::EntropyWeighted;
    Rat relabel_base = 1;
    Rat insert_base = 1;
    Rat delete_base = 1;
    Rat decay = Rat(1, 2); // depth variant only, in (0, 1]

    void validate() const;

    static EditCostScheme entropy() { return EditCostScheme{}; }
    static EditCostScheme depth(Rat decay_factor = Rat(1, 2))
    {
        EditCostScheme s;
        s.variant = CostVariant::DepthWeighted;
        s.decay = std::move(decay_factor);
        return s;
    }
};

/// Ordered-tree edit distance (Zhang-Shasha) between the two labeled trees.
/// Per-node weight is (1 + gain) for the entropy variant, decay^depth for
/// the depth variant; delete/insert cost base * weight, relabel cost
/// base * mean of the two weights when the labels differ.
Rat tree_edit_distance(const EntropyLabeledTree& a, const EntropyLabeledTree& b,
                       const EditCostScheme& scheme);

/// Expected disagreement of two Boolean labelings under d.
Rat semantic_distance(const Labeling& f, const Labeling& g, const Distribution& d);

struct CorrelationConfig {
    int n = 4;
    int pairs = 200;
    std::uint64_t seed = 0;
    bool scheme_entropy = true;
    bool scheme_depth = true;
    Rat depth_decay = Rat(1, 2);
    int jobs = 1;
};

struct PairRecord {
    int pair_id = 0;
    Rat semantic;
    std::optional<Rat> syn_entropy;
    std::optional<Rat> syn_depth;
};

struct CorrelationReport {
    CorrelationConfig config;
    std::vector<PairRecord> records;
    std::optional<double> spearman_entropy;
    std::optional<double> pearson_entropy;
    std::optional<double> spearman_depth;
    std::optional<double> pearson_depth;
};

constexpr int kMaxCorrelationBits = 6;

/// Samples random Boolean labeling pairs (a uniform f and a perturbation of
/// it with a uniform number of outputs flipped), realizes each as a minimal
/// average-depth tree with gain-greedy tie-breaking, and correlates semantic
/// L1 distance with weighted tree edit distance. Deterministic per seed.
CorrelationReport correlation_experiment(const CorrelationConfig& config,
                                         const Distribution& d);

} // namespace coddlab
