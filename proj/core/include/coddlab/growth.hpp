#pragma once

#include "coddlab/dtree.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace coddlab {

/// Replaces one leaf by a decision node with two fresh leaves. The target
/// bit may already be fixed on the path, leaving one branch unreachable.
struct GrowthStep {
    int target_leaf = 0; // preorder leaf index (on_zero branch first)
    int bit_index = 0;
    int label_zero = 0;
    int label_one = 0;
};

int leaf_count(const DecisionTree& t);

/// Throws std::invalid_argument when target_leaf is out of range or
/// bit_index >= n is requested via grow configs.
DecisionTree expand_leaf(const DecisionTree& t, const GrowthStep& step);

struct GrowthConfig {
    int n = 6;
    int steps = 1000;
    std::uint64_t seed = 0;
    // A step repeats the expanded leaf's label on both branches with
    // probability 1/alphabet; otherwise one branch gets a fresh label, so
    // every step refines the by-output partition. alphabet = 1 grows trees
    // with a single output.
    int alphabet = 2;
};

struct TracePoint {
    int step = 0;
    int size = 0; // decision node count
    Rat entropy;  // by-output logical entropy, exact
};

struct GrowthTrace {
    GrowthConfig config;
    std::vector<TracePoint> points; // entry per step, plus the initial state
};

/// Uniformly random leaf and bit at each step, labels per the alphabet rule
/// above; deterministic per seed. Entropy is non-decreasing along the trace.
GrowthTrace grow_random(const GrowthConfig& config, const Distribution& d);

/// Random tree of exactly `size` decision nodes grown the same way.
DecisionTree grow_to_size(int size, int n, int alphabet, std::mt19937_64& rng);

struct SizeEntropyConfig {
    std::vector<int> sizes;
    int samples = 20;
    int n = 6;
    std::uint64_t seed = 0;
    int alphabet = 2;
    int jobs = 1;
};

struct SizeEntropyRow {
    int size = 0;
    Rat mean;
    Rat min;
    Rat q25;
    Rat median;
    Rat q75;
    Rat max;
};

struct SizeEntropyTable {
    SizeEntropyConfig config;
    std::vector<SizeEntropyRow> rows;
    std::optional<double> spearman_size_entropy; // over all individual samples
};

SizeEntropyTable size_entropy_ensemble(const SizeEntropyConfig& config, const Distribution& d);

struct ProfileConfig {
    int size = 30;
    int samples = 1000;
    int n = 6;
    std::uint64_t seed = 0;
    int alphabet = 2;
    Rat delta = Rat(1, 10); // "near max" band, relative
    int bins = 20;
};

struct ConcentrationProfile {
    ProfileConfig config;
    std::vector<Rat> entropies; // per sample, in sample order
    Rat max_entropy;
    std::vector<int> histogram; // equal-width bins over [0, max_entropy]
    Rat fraction_near_max;      // entropy >= (1 - delta) * max_entropy
};

ConcentrationProfile entropy_concentration_profile(const ProfileConfig& config,
                                                   const Distribution& d);

} // namespace coddlab
