// Microbenchmarks for the hot paths: optimal/greedy tree induction,
// entropy computation, dag encoding, reduction, and tree edit distance.
#include "coddlab/codd.hpp"
#include "coddlab/dtree.hpp"
#include "coddlab/growth.hpp"
#include "coddlab/partition.hpp"
#include "coddlab/stats.hpp"
#include "coddlab/synsem.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace coddlab;

Labeling random_labeling(const InputSpace& space, int alphabet, std::mt19937_64& rng)
{
    std::vector<int> labels(space.size());
    for (auto& l : labels) {
        l = static_cast<int>(draw(rng, alphabet));
    }
    return Labeling(space, labels);
}

/// Deterministic dag of roughly `size` nodes: decides applied to shared leaves.
CoddExpr sample_expr(int size)
{
    CoddBuilder b;
    std::mt19937_64 rng = derive_rng(7, static_cast<std::uint64_t>(size));
    std::vector<std::uint32_t> pool{b.leaf(Bits{true, false})};
    while (static_cast<int>(b.node_count()) < size) {
        std::uint32_t x = pool[draw(rng, pool.size())];
        std::uint32_t y = pool[draw(rng, pool.size())];
        if (draw(rng, 2) == 0) {
            pool.push_back(b.decide(static_cast<std::uint16_t>(draw(rng, 8)), x, y));
        } else {
            pool.push_back(b.apply(x, y));
        }
    }
    return b.extract(pool.back());
}

void BM_OptimalTree(benchmark::State& state)
{
    int n = static_cast<int>(state.range(0));
    InputSpace space(n);
    Distribution d = Distribution::uniform(space);
    std::mt19937_64 rng = derive_rng(1, static_cast<std::uint64_t>(n));
    Labeling lab = random_labeling(space, 3, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_tree(lab, d));
    }
}
BENCHMARK(BM_OptimalTree)->DenseRange(4, 10, 2);

void BM_GreedyTree(benchmark::State& state)
{
    int n = static_cast<int>(state.range(0));
    InputSpace space(n);
    Distribution d = Distribution::uniform(space);
    std::mt19937_64 rng = derive_rng(2, static_cast<std::uint64_t>(n));
    Labeling lab = random_labeling(space, 3, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(greedy_tree(lab, d));
    }
}
BENCHMARK(BM_GreedyTree)->DenseRange(4, 12, 2);

void BM_LogicalEntropy(benchmark::State& state)
{
    int n = static_cast<int>(state.range(0));
    InputSpace space(n);
    Distribution d = Distribution::uniform(space);
    std::mt19937_64 rng = derive_rng(3, static_cast<std::uint64_t>(n));
    Partition p = random_labeling(space, 5, rng).partition();
    for (auto _ : state) {
        benchmark::DoNotOptimize(logical_entropy(p, d));
    }
}
BENCHMARK(BM_LogicalEntropy)->DenseRange(8, 16, 4);

void BM_EncodeDecodeRoundtrip(benchmark::State& state)
{
    CoddExpr e = sample_expr(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(decode(encode(e)));
    }
}
BENCHMARK(BM_EncodeDecodeRoundtrip)->RangeMultiplier(4)->Range(16, 1024);

void BM_EvalCodd(benchmark::State& state)
{
    // Identity chain I (I (... (I x))) with I = S K K: state.range(0)
    // redex groups, reduced under normal order.
    CoddExpr i = CoddExpr::apply(CoddExpr::apply(CoddExpr::s(), CoddExpr::k()), CoddExpr::k());
    CoddExpr e = CoddExpr::leaf(BitString::parse("1010"));
    for (int k = 0; k < state.range(0); ++k) {
        e = CoddExpr::apply(i, e);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_codd(e, {}, 1'000'000));
    }
}
BENCHMARK(BM_EvalCodd)->RangeMultiplier(4)->Range(4, 256);

void BM_TreeEditDistance(benchmark::State& state)
{
    int n = 6;
    InputSpace space(n);
    Distribution d = Distribution::uniform(space);
    std::mt19937_64 rng = derive_rng(4, static_cast<std::uint64_t>(state.range(0)));
    std::mt19937_64 rng2 = derive_rng(5, static_cast<std::uint64_t>(state.range(0)));
    Labeling f = random_labeling(space, 2, rng);
    Labeling g = random_labeling(space, 2, rng2);
    EntropyLabeledTree a = entropy_labels(greedy_tree(f, d), f, d);
    EntropyLabeledTree b = entropy_labels(greedy_tree(g, d), g, d);
    EditCostScheme scheme = EditCostScheme::entropy();
    for (auto _ : state) {
        benchmark::DoNotOptimize(tree_edit_distance(a, b, scheme));
    }
}
BENCHMARK(BM_TreeEditDistance)->Arg(0)->Arg(1);

void BM_GrowRandom(benchmark::State& state)
{
    GrowthConfig cfg;
    cfg.n = 6;
    cfg.steps = static_cast<int>(state.range(0));
    cfg.alphabet = 4;
    cfg.seed = 9;
    Distribution d = Distribution::uniform(InputSpace(cfg.n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grow_random(cfg, d));
    }
}
BENCHMARK(BM_GrowRandom)->RangeMultiplier(4)->Range(16, 256);

} // namespace

BENCHMARK_MAIN();
