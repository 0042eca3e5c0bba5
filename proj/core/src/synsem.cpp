#include "coddlab/synsem.hpp"

#include "coddlab/stats.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

namespace coddlab {

void EditCostScheme::validate() const
{
    if (relabel_base <= 0 || insert_base <= 0 || delete_base <= 0) {
        throw std::invalid_argument("EditCostScheme: base costs must be positive");
    }
    if (decay <= 0 || decay > 1) {
        throw std::invalid_argument("EditCostScheme: decay must be in (0, 1]");
    }
}

namespace {

std::shared_ptr<const EntropyLabeledTree::Node> label_node(const DecisionTree::Node& node,
                                                           const Labeling& lab,
                                                           const Distribution& d,
                                                           const Subcube& cube)
{
    auto out = std::make_shared<EntropyLabeledTree::Node>();
    if (node.is_leaf()) {
        out->bit_index = -1;
        out->label = node.label;
        out->gain = 0;
        return out;
    }
    out->bit_index = node.bit_index;
    out->gain = rat_from_double(split_gain(lab, d, cube, node.bit_index));
    out->zero = label_node(*node.zero, lab, d, cube.restricted(node.bit_index, 0));
    out->one = label_node(*node.one, lab, d, cube.restricted(node.bit_index, 1));
    return out;
}

} // namespace

EntropyLabeledTree entropy_labels(const DecisionTree& t, const Labeling& lab,
                                  const Distribution& d)
{
    const InputSpace& space = lab.space();
    if (space != d.space()) {
        throw std::invalid_argument("entropy_labels: labeling/distribution space mismatch");
    }
    for (Input x = 0; x < space.size(); ++x) {
        if (eval_tree(t, space, x) != lab(x)) {
            throw std::invalid_argument("entropy_labels: tree does not realize the labeling");
        }
    }
    return EntropyLabeledTree(label_node(t.root(), lab, d, Subcube::full(space.bits())));
}

// ---------------------------------------------------------------------------
// Ordered tree edit distance (Zhang-Shasha)

namespace {

Rat rat_pow(const Rat& base, int exp)
{
    Rat r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

struct FlatNode {
    bool leaf = true;
    int bit_index = -1;
    int label = 0;
    Rat gain;
    Rat weight;
    int lml = 0; // postorder index of leftmost leaf descendant
};

struct FlatTree {
    std::vector<FlatNode> post;
    std::vector<int> keyroots;
};

int flatten(const EntropyLabeledTree::Node& node, int depth, const EditCostScheme& scheme,
            std::vector<FlatNode>& out, std::vector<bool>& is_keyroot)
{
    FlatNode fn;
    fn.leaf = node.is_leaf();
    fn.bit_index = node.bit_index;
    fn.label = node.label;
    fn.gain = node.gain;
    fn.weight = scheme.variant == CostVariant::EntropyWeighted ? Rat(1) + node.gain
                                                               : rat_pow(scheme.decay, depth);
    if (node.is_leaf()) {
        int idx = static_cast<int>(out.size());
        fn.lml = idx;
        out.push_back(std::move(fn));
        is_keyroot.push_back(false);
        return idx;
    }
    int zero_idx = flatten(*node.zero, depth + 1, scheme, out, is_keyroot);
    int one_idx = flatten(*node.one, depth + 1, scheme, out, is_keyroot);
    is_keyroot[one_idx] = true; // right child starts a new leftmost-path
    int idx = static_cast<int>(out.size());
    fn.lml = out[zero_idx].lml;
    out.push_back(std::move(fn));
    is_keyroot.push_back(false);
    return idx;
}

FlatTree flatten_tree(const EntropyLabeledTree& t, const EditCostScheme& scheme)
{
    FlatTree ft;
    std::vector<bool> is_keyroot;
    int root = flatten(t.root(), 0, scheme, ft.post, is_keyroot);
    is_keyroot[root] = true;
    for (int i = 0; i < static_cast<int>(ft.post.size()); ++i) {
        if (is_keyroot[i]) {
            ft.keyroots.push_back(i);
        }
    }
    return ft;
}

Rat min3(Rat a, Rat b, Rat c)
{
    Rat m = a < b ? std::move(a) : std::move(b);
    return m < c ? m : std::move(c);
}

bool same_label(const FlatNode& u, const FlatNode& v)
{
    if (u.leaf != v.leaf) {
        return false;
    }
    if (u.leaf) {
        return u.label == v.label && u.gain == v.gain;
    }
    return u.bit_index == v.bit_index && u.gain == v.gain;
}

} // namespace

Rat tree_edit_distance(const EntropyLabeledTree& a, const EntropyLabeledTree& b,
                       const EditCostScheme& scheme)
{
    scheme.validate();
    FlatTree ta = flatten_tree(a, scheme);
    FlatTree tb = flatten_tree(b, scheme);
    const int na = static_cast<int>(ta.post.size());
    const int nb = static_cast<int>(tb.post.size());

    auto del = [&](int i) { return scheme.delete_base * ta.post[i].weight; };
    auto ins = [&](int j) { return scheme.insert_base * tb.post[j].weight; };
    auto rel = [&](int i, int j) {
        if (same_label(ta.post[i], tb.post[j])) {
            return Rat(0);
        }
        return Rat(scheme.relabel_base * (ta.post[i].weight + tb.post[j].weight) / 2);
    };

    std::vector<std::vector<Rat>> td(na, std::vector<Rat>(nb, Rat(0)));
    std::vector<std::vector<Rat>> fd(na + 1, std::vector<Rat>(nb + 1, Rat(0)));

    for (int ki : ta.keyroots) {
        for (int kj : tb.keyroots) {
            int li = ta.post[ki].lml;
            int lj = tb.post[kj].lml;
            fd[0][0] = 0;
            for (int x = li; x <= ki; ++x) {
                fd[x - li + 1][0] = fd[x - li][0] + del(x);
            }
            for (int y = lj; y <= kj; ++y) {
                fd[0][y - lj + 1] = fd[0][y - lj] + ins(y);
            }
            for (int x = li; x <= ki; ++x) {
                for (int y = lj; y <= kj; ++y) {
                    int dx = x - li + 1;
                    int dy = y - lj + 1;
                    if (ta.post[x].lml == li && tb.post[y].lml == lj) {
                        fd[dx][dy] = min3(fd[dx - 1][dy] + del(x), fd[dx][dy - 1] + ins(y),
                                          fd[dx - 1][dy - 1] + rel(x, y));
                        td[x][y] = fd[dx][dy];
                    } else {
                        int px = ta.post[x].lml - li;
                        int py = tb.post[y].lml - lj;
                        fd[dx][dy] = min3(fd[dx - 1][dy] + del(x), fd[dx][dy - 1] + ins(y),
                                          fd[px][py] + td[x][y]);
                    }
                }
            }
        }
    }
    return td[na - 1][nb - 1];
}

// ---------------------------------------------------------------------------
// Semantic distance and the correlation harness

Rat semantic_distance(const Labeling& f, const Labeling& g, const Distribution& d)
{
    const InputSpace& space = f.space();
    if (space != g.space() || space != d.space()) {
        throw std::invalid_argument("semantic_distance: input space mismatch");
    }
    Rat total = 0;
    for (Input x = 0; x < space.size(); ++x) {
        int a = f(x);
        int b = g(x);
        if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
            throw std::invalid_argument("semantic_distance: outputs must be Boolean");
        }
        if (a != b) {
            total += d.mass(x);
        }
    }
    return total;
}

namespace {

Labeling random_boolean_labeling(const InputSpace& space, std::mt19937_64& rng)
{
    std::vector<int> labels(space.size());
    for (auto& l : labels) {
        l = static_cast<int>(draw(rng, 2));
    }
    return Labeling(space, labels);
}

PairRecord evaluate_pair(int pair_id, const CorrelationConfig& config, const Distribution& d)
{
    const InputSpace& space = d.space();
    std::mt19937_64 rng = derive_rng(config.seed, static_cast<std::uint64_t>(pair_id));
    Labeling f = random_boolean_labeling(space, rng);
    // g is f with k uniformly chosen outputs flipped, k uniform in 0..2^n.
    // Independent pairs would concentrate the semantic distance near 1/2;
    // perturbation pairs span the whole distance range, which is what a
    // distance-vs-distance correlation needs.
    std::vector<int> flipped = f.labels();
    std::size_t k = draw(rng, space.size() + 1);
    std::vector<Input> order(space.size());
    for (Input x = 0; x < space.size(); ++x) {
        order[x] = x;
    }
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(order[i], order[i + draw(rng, space.size() - i)]);
        flipped[order[i]] ^= 1;
    }
    Labeling g(space, std::move(flipped));

    PairRecord rec;
    rec.pair_id = pair_id;
    rec.semantic = semantic_distance(f, g, d);

    DecisionTree tf = optimal_tree(f, d, OptimalTieBreak::MaxRootGain).tree;
    DecisionTree tg = optimal_tree(g, d, OptimalTieBreak::MaxRootGain).tree;
    EntropyLabeledTree lf = entropy_labels(tf, f, d);
    EntropyLabeledTree lg = entropy_labels(tg, g, d);

    if (config.scheme_entropy) {
        rec.syn_entropy = tree_edit_distance(lf, lg, EditCostScheme::entropy());
    }
    if (config.scheme_depth) {
        rec.syn_depth = tree_edit_distance(lf, lg, EditCostScheme::depth(config.depth_decay));
    }
    return rec;
}

} // namespace

CorrelationReport correlation_experiment(const CorrelationConfig& config, const Distribution& d)
{
    if (d.space().bits() > kMaxCorrelationBits) {
        throw std::invalid_argument("correlation_experiment: n exceeds capacity (max " +
                                    std::to_string(kMaxCorrelationBits) + ")");
    }
    if (config.n != d.space().bits()) {
        throw std::invalid_argument("correlation_experiment: config n mismatches distribution");
    }
    CorrelationReport report;
    report.config = config;
    report.records.resize(config.pairs);

    int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (int i = 0; i < config.pairs; ++i) {
            report.records[i] = evaluate_pair(i, config, d);
        }
    } else {
        std::vector<std::future<void>> futures;
        int chunk = (config.pairs + jobs - 1) / jobs;
        for (int w = 0; w < jobs; ++w) {
            int lo = w * chunk;
            int hi = std::min(config.pairs, lo + chunk);
            if (lo >= hi) {
                break;
            }
            futures.push_back(std::async(std::launch::async, [&, lo, hi] {
                for (int i = lo; i < hi; ++i) {
                    report.records[i] = evaluate_pair(i, config, d);
                }
            }));
        }
        for (auto& f : futures) {
            f.get();
        }
    }

    std::vector<double> sem;
    std::vector<double> syn_e;
    std::vector<double> syn_d;
    for (const PairRecord& r : report.records) {
        sem.push_back(rat_to_double(r.semantic));
        if (r.syn_entropy) {
            syn_e.push_back(rat_to_double(*r.syn_entropy));
        }
        if (r.syn_depth) {
            syn_d.push_back(rat_to_double(*r.syn_depth));
        }
    }
    if (config.scheme_entropy) {
        report.spearman_entropy = spearman(sem, syn_e);
        report.pearson_entropy = pearson(sem, syn_e);
    }
    if (config.scheme_depth) {
        report.spearman_depth = spearman(sem, syn_d);
        report.pearson_depth = pearson(sem, syn_d);
    }
    return report;
}

} // namespace coddlab
