// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
#include "coddlab/codd.hpp"
#include "coddlab/growth.hpp"
#include "coddlab/pattern.hpp"
#include "coddlab/synsem.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace coddlab;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, double seconds,
            const std::string& detail)
{
    std::printf("[%s] criterion %2d: %-34s (%6.2f s) %s\n", ok ? "PASS" : "FAIL", id,
                name.c_str(), seconds, detail.c_str());
    if (!ok) {
        ++failures;
    }
}

void criterion(int id, const std::string& name, double budget_seconds,
               const std::function<bool(std::string&)>& body)
{
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
    if (ok && seconds > budget_seconds) {
        ok = false;
        detail += " [over the " + std::to_string(static_cast<int>(budget_seconds)) +
                  " s budget]";
    }
    report(id, name, ok, seconds, detail);
}

// --------------------------------------------------------------- criterion 1

bool shannon_lower_bound(std::string& detail)
{
    long checks = 0;
    auto holds = [&](const DecisionTree& t, const InputSpace& space, const Distribution& d) {
        ++checks;
        double h = shannon_entropy(induced_partition(t, space, PartitionMode::ByLeaf), d);
        return h <= rat_to_double(average_depth(t, d)) + 1e-9;
    };

    std::mt19937_64 rng(1001);
    InputSpace s3(3);
    for (const DecisionTree& t : oracles::enumerate_tree_shapes(3, 3)) {
        for (int i = 0; i < 10; ++i) {
            if (!holds(t, s3, oracles::random_distribution(s3, rng))) {
                detail = "violation on an exhaustive n=3 tree";
                return false;
            }
        }
    }
    for (int trial = 0; trial < 10000; ++trial) {
        int n = 1 + static_cast<int>(draw(rng, 8));
        InputSpace space(n);
        DecisionTree t = oracles::random_tree(n, rng);
        for (int i = 0; i < 10; ++i) {
            if (!holds(t, space, oracles::random_distribution(space, rng))) {
                detail = "violation on a random n=" + std::to_string(n) + " tree";
                return false;
            }
        }
    }
    detail = std::to_string(checks) + " tree/distribution checks, zero violations";
    return true;
}

// --------------------------------------------------------------- criterion 2

bool optimal_exactness(std::string& detail)
{
    InputSpace s2(2);
    Distribution u2 = Distribution::uniform(s2);
    for (int code = 0; code < 16; ++code) {
        std::vector<int> labels(4);
        for (int x = 0; x < 4; ++x) {
            labels[x] = (code >> x) & 1;
        }
        Labeling lab(s2, labels);
        if (optimal_tree(lab, u2).min_average_depth !=
            oracles::brute_force_min_depth(lab, u2)) {
            detail = "mismatch on n=2 labeling code " + std::to_string(code);
            return false;
        }
    }
    InputSpace s3(3);
    std::mt19937_64 rng(1002);
    for (int trial = 0; trial < 50; ++trial) {
        Labeling lab = oracles::random_labeling(s3, 3, rng);
        Distribution d = oracles::random_distribution(s3, rng);
        if (optimal_tree(lab, d).min_average_depth != oracles::brute_force_min_depth(lab, d)) {
            detail = "mismatch on random n=3 trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "16 exhaustive n=2 + 50 random n=3 labelings, exact agreement";
    return true;
}

// --------------------------------------------------------------- criterion 3

bool growth_monotonicity(std::string& detail)
{
    Distribution u = Distribution::uniform(InputSpace(6));
    GrowthConfig cfg;
    cfg.n = 6;
    cfg.steps = 1000;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        cfg.seed = seed;
        GrowthTrace trace = grow_random(cfg, u);
        for (std::size_t i = 1; i < trace.points.size(); ++i) {
            if (trace.points[i].entropy < trace.points[i - 1].entropy) {
                detail = "entropy decrease at seed " + std::to_string(seed) + " step " +
                         std::to_string(i);
                return false;
            }
        }
    }
    detail = "100 traces x 1000 steps, exact rational comparison, zero violations";
    return true;
}

// --------------------------------------------------------------- criterion 4

bool size_entropy_trend(std::string& detail)
{
    SizeEntropyConfig cfg;
    for (int s = 1; s <= 50; ++s) {
        cfg.sizes.push_back(s);
    }
    cfg.samples = 20;
    cfg.n = 6;
    cfg.seed = 60; // fixed seed for the pinned ensemble
    SizeEntropyTable table = size_entropy_ensemble(cfg, Distribution::uniform(InputSpace(6)));
    if (!table.spearman_size_entropy) {
        detail = "Spearman undefined";
        return false;
    }
    std::ostringstream ss;
    ss << "Spearman(size, entropy) = " << *table.spearman_size_entropy << " (need >= 0.5)";
    detail = ss.str();
    return *table.spearman_size_entropy >= 0.5;
}

// --------------------------------------------------------------- criterion 5

// Expressions in normal form, so the laws are exercised in isolation.
CoddExpr random_value(std::mt19937_64& rng, int depth = 0)
{
    switch (depth >= 3 ? draw(rng, 2) : draw(rng, 5)) {
    case 0: {
        Bits bits(draw(rng, 7));
        for (std::size_t i = 0; i < bits.size(); ++i) {
            bits[i] = draw(rng, 2);
        }
        return CoddExpr::leaf(std::move(bits));
    }
    case 1: {
        static const CoddExpr combs[] = {CoddExpr::k(), CoddExpr::s(), CoddExpr::sp()};
        return combs[draw(rng, 3)];
    }
    case 2:
        return CoddExpr::decide(static_cast<std::uint16_t>(draw(rng, 6)),
                                random_value(rng, depth + 1), random_value(rng, depth + 1));
    case 3: // stuck application: a leaf in function position
        return CoddExpr::apply(CoddExpr::leaf(Bits{draw(rng, 2) != 0}),
                               random_value(rng, depth + 1));
    default: // partial application of K
        return CoddExpr::apply(CoddExpr::k(), random_value(rng, depth + 1));
    }
}

bool combinator_laws(std::string& detail)
{
    constexpr std::uint64_t kFuel = 10000;
    std::mt19937_64 rng(1005);
    for (int trial = 0; trial < 100; ++trial) {
        CoddExpr y = random_value(rng);
        CoddExpr x = random_value(rng);
        EvalOutcome k = eval_codd(
            CoddExpr::apply(CoddExpr::apply(CoddExpr::k(), y), x), {}, kFuel);
        if (k.fuel_exhausted || !(k.result == y)) {
            detail = "K law failed on trial " + std::to_string(trial);
            return false;
        }

        CoddExpr f = random_value(rng);
        if (f.root_node().tag == CoddTag::Leaf) {
            f = CoddExpr::k(); // a leaf in function position hides the Sp redex
        }
        CoddExpr a = random_value(rng);
        CoddExpr b = random_value(rng);
        CoddExpr lhs = CoddExpr::apply(
            CoddExpr::apply(CoddExpr::apply(CoddExpr::sp(), f), a), b);
        CoddExpr rhs = CoddExpr::apply(CoddExpr::apply(f, a), CoddExpr::apply(f, b));
        EvalOutcome l = eval_codd(lhs, {}, kFuel);
        EvalOutcome r = eval_codd(rhs, {}, kFuel);
        if (l.fuel_exhausted || r.fuel_exhausted || !(l.result == r.result)) {
            detail = "Sp law failed on trial " + std::to_string(trial);
            return false;
        }
    }

    CoddExpr skk = CoddExpr::apply(CoddExpr::apply(CoddExpr::s(), CoddExpr::k()),
                                   CoddExpr::k());
    for (int trial = 0; trial < 100; ++trial) {
        CoddExpr arg = CoddExpr::leaf(encode(oracles::random_expr(
            1 + static_cast<int>(draw(rng, 20)), rng)));
        EvalOutcome out = eval_codd(CoddExpr::apply(skk, arg), {}, kFuel);
        if (out.fuel_exhausted || !(out.result == arg)) {
            detail = "S K K identity failed on trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "K/Sp laws x 100 + S K K identity x 100, zero fuel exhaustions";
    return true;
}

// --------------------------------------------------------------- criterion 6

bool memoization_soundness(std::string& detail)
{
    constexpr std::uint64_t kFuel = 10000;
    std::mt19937_64 rng(1006);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(draw(rng, 6));
        InputSpace space(n);
        // P: a small decide dag; E contains (P a)(P b).
        CoddExpr p = CoddExpr::decide(
            static_cast<std::uint16_t>(draw(rng, n)),
            CoddExpr::leaf(Bits{draw(rng, 2) != 0}),
            CoddExpr::decide(static_cast<std::uint16_t>(draw(rng, n)),
                             CoddExpr::leaf(Bits{draw(rng, 2) != 0}),
                             CoddExpr::leaf(Bits{draw(rng, 2) != 0})));
        Bits ab(n);
        Bits bb(n);
        for (int i = 0; i < n; ++i) {
            ab[i] = draw(rng, 2);
            bb[i] = draw(rng, 2);
        }
        CoddExpr e = CoddExpr::apply(CoddExpr::apply(p, CoddExpr::leaf(ab)),
                                     CoddExpr::apply(p, CoddExpr::leaf(bb)));

        RewriteResult rewritten = memoize_rewrite(e, p);
        if (rewritten.sites_rewritten < 1) {
            detail = "pattern not found on trial " + std::to_string(trial);
            return false;
        }
        if (codd_size(rewritten.expr) > codd_size(e)) {
            detail = "codd_size grew on trial " + std::to_string(trial);
            return false;
        }
        for (Input x = 0; x < space.size(); ++x) {
            std::vector<CoddExpr> args{CoddExpr::leaf(BitString{x, n})};
            EvalOutcome before = eval_codd(e, args, kFuel);
            EvalOutcome after = eval_codd(rewritten.expr, args, kFuel);
            if (before.fuel_exhausted || after.fuel_exhausted ||
                !(before.result == after.result)) {
                detail = "eval disagreement on trial " + std::to_string(trial);
                return false;
            }
        }
    }
    detail = "100 rewrites, eval agreement on the full input space, size never grew";
    return true;
}

// --------------------------------------------------------------- criterion 7

bool encoding_roundtrip(std::string& detail)
{
    std::mt19937_64 rng(1007);
    for (int trial = 0; trial < 10000; ++trial) {
        CoddExpr e = oracles::random_expr(1 + static_cast<int>(draw(rng, 50)), rng);
        if (!(decode(encode(e)) == e)) {
            detail = "roundtrip mismatch on trial " + std::to_string(trial);
            return false;
        }
    }

    auto append_uint = [](Bits& bits, std::uint32_t v, int width) {
        for (int i = width - 1; i >= 0; --i) {
            bits.push_back((v >> i) & 1);
        }
    };
    struct Malformed {
        const char* name;
        Bits bits;
        std::size_t offset;
    };
    std::vector<Malformed> corpus;
    corpus.push_back({"empty input", Bits{}, 0});
    corpus.push_back({"truncated header", Bits(4, false), 0});
    corpus.push_back({"zero node count", Bits(16, false), 0});
    {
        Bits b;
        append_uint(b, 1, 16);
        b.push_back(false);
        corpus.push_back({"truncated tag", b, 16});
    }
    {
        Bits b;
        append_uint(b, 2, 16);
        append_uint(b, 2, 3);  // K
        append_uint(b, 7, 3);  // Apply
        append_uint(b, 1, 16); // self reference
        append_uint(b, 0, 16);
        corpus.push_back({"forward reference", b, 22});
    }
    {
        Bits b;
        append_uint(b, 1, 16);
        append_uint(b, 0, 3);
        append_uint(b, 5, 16);
        append_uint(b, 0, 2);
        corpus.push_back({"truncated leaf payload", b, 35});
    }
    {
        Bits b = encode(CoddExpr::k());
        for (int i = 0; i < 8; ++i) {
            b.push_back(false);
        }
        corpus.push_back({"trailing bits", b, 19});
    }
    {
        Bits b;
        append_uint(b, 1, 16);
        append_uint(b, 2, 3);
        append_uint(b, 1, 5);
        corpus.push_back({"nonzero padding", b, 23});
    }
    for (const Malformed& m : corpus) {
        try {
            decode(m.bits);
            detail = std::string("accepted malformed input: ") + m.name;
            return false;
        } catch (const DecodeError& e) {
            if (e.offset != m.offset) {
                detail = std::string(m.name) + ": offset " + std::to_string(e.offset) +
                         " != expected " + std::to_string(m.offset);
                return false;
            }
        }
    }
    detail = "10000 roundtrips + " + std::to_string(corpus.size()) +
             " malformed entries at exact offsets";
    return true;
}

// --------------------------------------------------------------- criterion 8

bool pattern_oracle(std::string& detail)
{
    InputSpace s2(2);
    std::vector<ProgramView> views;
    for (int code = 0; code < 16; ++code) {
        views.push_back(ProgramView(Labeling(
            s2, {code & 1, (code >> 1) & 1, (code >> 2) & 1, (code >> 3) & 1})));
    }
    RelevanceFn bit0_pairs = RelevanceFn::none_relevant(s2);
    bit0_pairs.set_weight(0, 2, Rat(1));
    bit0_pairs.set_weight(0, 3, Rat(1));
    bit0_pairs.set_weight(1, 2, Rat(1));
    bit0_pairs.set_weight(1, 3, Rat(1));
    const RelevanceFn rhos[] = {RelevanceFn::all_relevant(s2),
                                RelevanceFn::none_relevant(s2), bit0_pairs};

    auto oracle_exact = [](const ProgramView& p, const ProgramView& f, const RelevanceFn& rho) {
        for (const InputPair& d : f.dits()) {
            if (rho.weight(d) > 0 && !p.dits().contains(d)) {
                return false;
            }
        }
        return p.dits().size() < f.dits().size();
    };
    auto oracle_approx = [](const ProgramView& p, const ProgramView& f, const RelevanceFn& rho,
                            int k) {
        std::size_t missed = 0;
        for (const InputPair& d : f.dits()) {
            if (rho.weight(d) > 0 && !p.dits().contains(d)) {
                ++missed;
            }
        }
        long long fewer = static_cast<long long>(f.dits().size()) -
                          static_cast<long long>(p.dits().size());
        return fewer >= k && missed < static_cast<std::size_t>(k);
    };

    long checks = 0;
    for (const RelevanceFn& rho : rhos) {
        for (const ProgramView& p : views) {
            for (const ProgramView& f : views) {
                ++checks;
                if (is_pattern(p, f, rho).is_pattern != oracle_exact(p, f, rho)) {
                    detail = "is_pattern mismatch";
                    return false;
                }
                for (int k = 1; k <= 3; ++k) {
                    if (is_approx_pattern(p, f, rho, k).is_pattern !=
                        oracle_approx(p, f, rho, k)) {
                        detail = "is_approx_pattern mismatch at K=" + std::to_string(k);
                        return false;
                    }
                }
            }
        }
    }
    detail = std::to_string(checks) + " ordered pairs x 3 relevance fns x K in {1,2,3}";
    return true;
}

// --------------------------------------------------------------- criterion 9

bool synsem_correlation(std::string& detail)
{
    Distribution u = Distribution::uniform(InputSpace(4));
    CorrelationConfig cfg;
    cfg.n = 4;
    cfg.pairs = 200;
    cfg.jobs = 4;

    cfg.seed = 2; // fixed primary seed
    CorrelationReport primary = correlation_experiment(cfg, u);
    if (!primary.spearman_entropy) {
        detail = "entropy Spearman undefined at the primary seed";
        return false;
    }
    double spearman_primary = *primary.spearman_entropy;

    int entropy_wins = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        cfg.seed = seed;
        CorrelationReport rep = correlation_experiment(cfg, u);
        if (rep.spearman_entropy && rep.spearman_depth &&
            *rep.spearman_entropy >= *rep.spearman_depth) {
            ++entropy_wins;
        }
    }
    std::ostringstream ss;
    ss << "seed-2 entropy Spearman = " << spearman_primary << " (need > 0.2); entropy >= depth"
       << " in " << entropy_wins << "/20 (need >= 12)";
    detail = ss.str();
    return spearman_primary > 0.2 && entropy_wins >= 12;
}

// -------------------------------------------------------------- criterion 10

bool ted_oracle(std::string& detail)
{
    using ENode = EntropyLabeledTree::Node;
    auto leaf = [](int label) {
        auto n = std::make_shared<ENode>();
        n->label = label;
        return n;
    };
    auto node = [](int bit, Rat gain, std::shared_ptr<const ENode> z,
                   std::shared_ptr<const ENode> o) {
        auto n = std::make_shared<ENode>();
        n->bit_index = bit;
        n->gain = std::move(gain);
        n->zero = std::move(z);
        n->one = std::move(o);
        return n;
    };

    // Every tree with <= 4 nodes over leaf labels {0,1}, bits {0,1}, and
    // internal gains {0, 1/2}: sizes 1 and 3 (binary decision trees have an
    // odd node count).
    std::vector<EntropyLabeledTree> trees;
    for (int label = 0; label < 2; ++label) {
        trees.push_back(EntropyLabeledTree(leaf(label)));
    }
    const Rat gains[] = {Rat(0), Rat(1, 2)};
    for (int bit = 0; bit < 2; ++bit) {
        for (const Rat& gain : gains) {
            for (int lz = 0; lz < 2; ++lz) {
                for (int lo = 0; lo < 2; ++lo) {
                    trees.push_back(EntropyLabeledTree(node(bit, gain, leaf(lz), leaf(lo))));
                }
            }
        }
    }

    const EditCostScheme schemes[] = {EditCostScheme::entropy(), EditCostScheme::depth()};
    long checks = 0;
    for (const EntropyLabeledTree& a : trees) {
        for (const EntropyLabeledTree& b : trees) {
            for (const EditCostScheme& s : schemes) {
                ++checks;
                if (tree_edit_distance(a, b, s) != oracles::brute_force_ted(a, b, s)) {
                    detail = "mismatch against the brute-force edit-script oracle";
                    return false;
                }
            }
        }
    }
    detail = std::to_string(checks) + " tree-pair/scheme checks, exact equality";
    return true;
}

} // namespace

int main()
{
    std::cout << "acceptance suite\n";
    criterion(1, "Shannon lower bound", 60, shannon_lower_bound);
    criterion(2, "optimal-tree exactness", 30, optimal_exactness);
    criterion(3, "entropy-growth monotonicity", 60, growth_monotonicity);
    criterion(4, "size-vs-entropy trend", 60, size_entropy_trend);
    criterion(5, "combinator laws", 60, combinator_laws);
    criterion(6, "memoization soundness", 60, memoization_soundness);
    criterion(7, "encoding roundtrip", 60, encoding_roundtrip);
    criterion(8, "pattern-predicate oracle", 60, pattern_oracle);
    criterion(9, "syntax-semantics correlation", 120, synsem_correlation);
    criterion(10, "tree edit distance oracle", 60, ted_oracle);
    if (failures == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria failed\n";
    return 1;
}
