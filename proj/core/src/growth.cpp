#include "coddlab/growth.hpp"

#include "coddlab/stats.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

namespace coddlab {

int leaf_count(const DecisionTree& t)
{
    struct Counter {
        int count = 0;
        void visit(const DecisionTree::Node& node)
        {
            if (node.is_leaf()) {
                ++count;
            } else {
                visit(*node.zero);
                visit(*node.one);
            }
        }
    } c;
    c.visit(t.root());
    return c.count;
}

namespace {

// Rebuilds the tree with leaf number `target` (preorder, on_zero first)
// replaced; `target` counts down as leaves are passed.
DecisionTree expand_at(const DecisionTree::Node& node, int& target, const GrowthStep& step)
{
    if (node.is_leaf()) {
        if (target-- == 0) {
            return DecisionTree::node_allow_requery(step.bit_index,
                                                    DecisionTree::leaf(step.label_zero),
                                                    DecisionTree::leaf(step.label_one));
        }
        return DecisionTree::leaf(node.label);
    }
    DecisionTree zero = expand_at(*node.zero, target, step);
    DecisionTree one = expand_at(*node.one, target, step);
    return DecisionTree::node_allow_requery(node.bit_index, std::move(zero), std::move(one));
}

} // namespace

DecisionTree expand_leaf(const DecisionTree& t, const GrowthStep& step)
{
    if (step.target_leaf < 0 || step.target_leaf >= leaf_count(t)) {
        throw std::invalid_argument("expand_leaf: target " + std::to_string(step.target_leaf) +
                                    " is not a leaf of the tree");
    }
    if (step.bit_index < 0) {
        throw std::invalid_argument("expand_leaf: negative bit index");
    }
    int target = step.target_leaf;
    return expand_at(t.root(), target, step);
}

namespace {

int leaf_label_at(const DecisionTree::Node& node, int& target)
{
    if (node.is_leaf()) {
        return target-- == 0 ? node.label : -1;
    }
    int zero = leaf_label_at(*node.zero, target);
    return zero != -1 ? zero : leaf_label_at(*node.one, target);
}

int max_label(const DecisionTree::Node& node)
{
    if (node.is_leaf()) {
        return node.label;
    }
    return std::max(max_label(*node.zero), max_label(*node.one));
}

// A step either repeats the expanded leaf's label on both branches (with
// probability 1/alphabet: stagnation, entropy constant) or keeps it on one
// branch and puts a label fresh to the whole tree on the other. Fresh-only
// new cells are what make the by-output partition refine at every step, and
// with it the exact entropy monotonicity.
GrowthStep random_step(const DecisionTree& t, int n, int alphabet, std::mt19937_64& rng)
{
    GrowthStep s;
    s.target_leaf = static_cast<int>(draw(rng, leaf_count(t)));
    s.bit_index = static_cast<int>(draw(rng, n));
    int target = s.target_leaf;
    int old = leaf_label_at(t.root(), target);
    s.label_zero = old;
    s.label_one = old;
    if (draw(rng, alphabet) != 0) {
        int fresh = max_label(t.root()) + 1;
        if (draw(rng, 2) == 0) {
            s.label_zero = fresh;
        } else {
            s.label_one = fresh;
        }
    }
    return s;
}

void check_growth_params(int n, int alphabet, const Distribution& d)
{
    if (n != d.space().bits()) {
        throw std::invalid_argument("growth: n mismatches the distribution's space");
    }
    if (alphabet < 1) {
        throw std::invalid_argument("growth: alphabet size must be >= 1");
    }
}

Rat output_entropy(const DecisionTree& t, const Distribution& d)
{
    return logical_entropy(induced_partition(t, d.space(), PartitionMode::ByOutput), d);
}

} // namespace

GrowthTrace grow_random(const GrowthConfig& config, const Distribution& d)
{
    check_growth_params(config.n, config.alphabet, d);
    std::mt19937_64 rng(config.seed);
    DecisionTree t = DecisionTree::leaf(static_cast<int>(draw(rng, config.alphabet)));
    GrowthTrace trace;
    trace.config = config;
    trace.points.push_back({0, 0, output_entropy(t, d)});
    for (int step = 1; step <= config.steps; ++step) {
        t = expand_leaf(t, random_step(t, config.n, config.alphabet, rng));
        trace.points.push_back({step, tree_size(t), output_entropy(t, d)});
    }
    return trace;
}

DecisionTree grow_to_size(int size, int n, int alphabet, std::mt19937_64& rng)
{
    DecisionTree t = DecisionTree::leaf(static_cast<int>(draw(rng, alphabet)));
    for (int i = 0; i < size; ++i) {
        t = expand_leaf(t, random_step(t, n, alphabet, rng));
    }
    return t;
}

namespace {

Rat quantile_sorted(const std::vector<Rat>& sorted, int q, int of)
{
    // Element at floor((k - 1) * q / of); exact, no interpolation.
    std::size_t idx = (sorted.size() - 1) * q / of;
    return sorted[idx];
}

} // namespace

SizeEntropyTable size_entropy_ensemble(const SizeEntropyConfig& config, const Distribution& d)
{
    check_growth_params(config.n, config.alphabet, d);
    if (config.samples < 1) {
        throw std::invalid_argument("size_entropy_ensemble: samples must be >= 1");
    }
    SizeEntropyTable table;
    table.config = config;

    std::size_t total = config.sizes.size() * static_cast<std::size_t>(config.samples);
    std::vector<Rat> entropies(total);
    auto run_sample = [&](std::size_t task) {
        int size = config.sizes[task / config.samples];
        std::mt19937_64 rng = derive_rng(config.seed, static_cast<std::uint64_t>(task));
        DecisionTree t = grow_to_size(size, config.n, config.alphabet, rng);
        entropies[task] = output_entropy(t, d);
    };

    int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (std::size_t task = 0; task < total; ++task) {
            run_sample(task);
        }
    } else {
        std::vector<std::future<void>> futures;
        std::size_t chunk = (total + jobs - 1) / jobs;
        for (int w = 0; w < jobs; ++w) {
            std::size_t lo = w * chunk;
            std::size_t hi = std::min(total, lo + chunk);
            if (lo >= hi) {
                break;
            }
            futures.push_back(std::async(std::launch::async, [&, lo, hi] {
                for (std::size_t task = lo; task < hi; ++task) {
                    run_sample(task);
                }
            }));
        }
        for (auto& f : futures) {
            f.get();
        }
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t s = 0; s < config.sizes.size(); ++s) {
        std::vector<Rat> group(entropies.begin() + s * config.samples,
                               entropies.begin() + (s + 1) * config.samples);
        Rat sum = 0;
        for (const Rat& e : group) {
            sum += e;
        }
        std::sort(group.begin(), group.end());
        SizeEntropyRow row;
        row.size = config.sizes[s];
        row.mean = sum / config.samples;
        row.min = group.front();
        row.q25 = quantile_sorted(group, 1, 4);
        row.median = quantile_sorted(group, 2, 4);
        row.q75 = quantile_sorted(group, 3, 4);
        row.max = group.back();
        table.rows.push_back(std::move(row));
        for (const Rat& e : group) {
            xs.push_back(config.sizes[s]);
            ys.push_back(rat_to_double(e));
        }
    }
    table.spearman_size_entropy = spearman(xs, ys);
    return table;
}

ConcentrationProfile entropy_concentration_profile(const ProfileConfig& config,
                                                   const Distribution& d)
{
    check_growth_params(config.n, config.alphabet, d);
    if (config.samples < 1 || config.bins < 1) {
        throw std::invalid_argument("entropy_concentration_profile: bad sample/bin count");
    }
    ConcentrationProfile profile;
    profile.config = config;
    profile.entropies.reserve(config.samples);
    for (int i = 0; i < config.samples; ++i) {
        std::mt19937_64 rng = derive_rng(config.seed, static_cast<std::uint64_t>(i));
        DecisionTree t = grow_to_size(config.size, config.n, config.alphabet, rng);
        profile.entropies.push_back(output_entropy(t, d));
    }
    profile.max_entropy = *std::max_element(profile.entropies.begin(), profile.entropies.end());

    profile.histogram.assign(config.bins, 0);
    int near = 0;
    Rat threshold = (Rat(1) - config.delta) * profile.max_entropy;
    for (const Rat& e : profile.entropies) {
        if (e >= threshold) {
            ++near;
        }
        int bin;
        if (profile.max_entropy == 0) {
            bin = 0;
        } else {
            // bin = floor(e / max * bins), clamped into range
            Rat scaled = e / profile.max_entropy * config.bins;
            bin = std::min(config.bins - 1,
                           static_cast<int>(numerator(scaled) / denominator(scaled)));
        }
        ++profile.histogram[bin];
    }
    profile.fraction_near_max = Rat(near, config.samples);
    return profile;
}

} // namespace coddlab
