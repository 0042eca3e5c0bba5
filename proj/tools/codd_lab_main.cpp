// codd-lab: command-line experiment runner.

#include "coddlab/codd.hpp"
#include "coddlab/growth.hpp"
#include "coddlab/json_io.hpp"
#include "coddlab/pattern.hpp"
#include "coddlab/synsem.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace coddlab;

constexpr const char* kVersion = "0.1.0";

json load_json(const std::string& path)
{
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error("malformed JSON in " + path + " at byte " +
                                 std::to_string(e.byte) + ": " + e.what());
    }
}

std::vector<std::uint8_t> load_binary(const std::string& path)
{
    std::string raw = read_file(path);
    return std::vector<std::uint8_t>(raw.begin(), raw.end());
}

void store_binary(const std::string& path, const std::vector<std::uint8_t>& bytes)
{
    write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

// Tool-side authoring format for CoDD expressions:
//   {"leaf": "0101"} | {"comb": "K"|"S"|"Sp"|"Encode"|"Decode"}
//   | {"bit": i, "zero": e, "one": e} | {"apply": [f, x]}
CoddExpr expr_from_json(const json& j)
{
    if (j.contains("leaf")) {
        std::string s = j.at("leaf").get<std::string>();
        Bits bits;
        for (char c : s) {
            if (c != '0' && c != '1') {
                throw std::runtime_error("leaf payload must be a 0/1 string");
            }
            bits.push_back(c == '1');
        }
        return CoddExpr::leaf(bits);
    }
    if (j.contains("comb")) {
        std::string name = j.at("comb").get<std::string>();
        if (name == "K") {
            return CoddExpr::k();
        }
        if (name == "S") {
            return CoddExpr::s();
        }
        if (name == "Sp") {
            return CoddExpr::sp();
        }
        if (name == "Encode") {
            return CoddExpr::encoder();
        }
        if (name == "Decode") {
            return CoddExpr::decoder();
        }
        throw std::runtime_error("unknown combinator \"" + name + "\"");
    }
    if (j.contains("bit")) {
        return CoddExpr::decide(j.at("bit").get<std::uint16_t>(),
                                expr_from_json(j.at("zero")), expr_from_json(j.at("one")));
    }
    if (j.contains("apply")) {
        const json& pair = j.at("apply");
        return CoddExpr::apply(expr_from_json(pair.at(0)), expr_from_json(pair.at(1)));
    }
    throw std::runtime_error("unrecognized expression JSON");
}

json expr_to_json(const CoddExpr& e, std::uint32_t idx)
{
    const CoddNode& n = e.nodes()[idx];
    switch (n.tag) {
    case CoddTag::Leaf: {
        std::string s;
        for (bool b : n.bits) {
            s += b ? '1' : '0';
        }
        return json{{"leaf", s}};
    }
    case CoddTag::K:
        return json{{"comb", "K"}};
    case CoddTag::S:
        return json{{"comb", "S"}};
    case CoddTag::Sp:
        return json{{"comb", "Sp"}};
    case CoddTag::Encode:
        return json{{"comb", "Encode"}};
    case CoddTag::Decode:
        return json{{"comb", "Decode"}};
    case CoddTag::Decide:
        return json{{"bit", n.bit_index},
                    {"zero", expr_to_json(e, n.a)},
                    {"one", expr_to_json(e, n.b)}};
    case CoddTag::Apply:
        return json{{"apply", json::array({expr_to_json(e, n.a), expr_to_json(e, n.b)})}};
    }
    throw std::runtime_error("corrupt expression node");
}

json expr_to_json(const CoddExpr& e)
{
    return expr_to_json(e, e.root());
}

struct Options {
    // shared flags, populated per subcommand
    std::string partition_file;
    std::string dist_file;
    std::string labeling_file;
    std::string in_file;
    std::string out_file;
    std::string csv_file;
    std::string trace_file;
    std::string pattern_file;
    std::string p_file;
    std::string f_file;
    std::string rho_file;
    std::vector<std::string> arg_files;
    std::uint64_t seed = 0;
    std::uint64_t fuel = 10000;
    int n = 6;
    int pairs = 200;
    int steps = 1000;
    int samples = 20;
    int size = 30;
    int alphabet = 2;
    int jobs = 1;
    int bins = 20;
    std::string sizes_spec = "1..50";
    std::string schemes = "entropy,depth";
    std::string decay = "1/2";
    std::string delta = "1/10";
};

Distribution load_dist_or_uniform(const std::string& path, int n)
{
    if (path.empty()) {
        return Distribution::uniform(InputSpace(n));
    }
    return distribution_from_json(load_json(path));
}

std::vector<int> parse_sizes(const std::string& spec)
{
    std::vector<int> sizes;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto dots = item.find("..");
        if (dots == std::string::npos) {
            sizes.push_back(std::stoi(item));
        } else {
            int lo = std::stoi(item.substr(0, dots));
            int hi = std::stoi(item.substr(dots + 2));
            for (int s = lo; s <= hi; ++s) {
                sizes.push_back(s);
            }
        }
    }
    if (sizes.empty()) {
        throw std::runtime_error("empty --sizes specification");
    }
    return sizes;
}

int cmd_entropy(const Options& opt)
{
    Partition p = partition_from_json(load_json(opt.partition_file));
    Distribution d = distribution_from_json(load_json(opt.dist_file));
    json out{{"logical_entropy", rat_to_string(logical_entropy(p, d))},
             {"shannon_entropy", shannon_entropy(p, d)}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_tree(const Options& opt, bool greedy)
{
    Labeling lab = labeling_from_json(load_json(opt.labeling_file));
    Distribution d = load_dist_or_uniform(opt.dist_file, lab.space().bits());
    json out;
    if (greedy) {
        DecisionTree t = greedy_tree(lab, d);
        out = json{{"tree", tree_to_json(t)},
                   {"average_depth", rat_to_string(average_depth(t, d))}};
    } else {
        OptimalTreeResult r = optimal_tree(lab, d);
        out = json{{"tree", tree_to_json(r.tree)},
                   {"average_depth", rat_to_string(r.min_average_depth)}};
    }
    std::cout << out.dump(2) << '\n';
    if (!opt.out_file.empty()) {
        write_file_atomic(opt.out_file, out.dump(2) + "\n");
    }
    return 0;
}

int cmd_codd_eval(const Options& opt)
{
    CoddExpr e = decode_bytes(load_binary(opt.in_file));
    std::vector<CoddExpr> args;
    for (const std::string& path : opt.arg_files) {
        args.push_back(decode_bytes(load_binary(path)));
    }
    EvalOutcome out = eval_codd(e, args, opt.fuel);
    json report{{"steps", out.steps},
                {"fuel_exhausted", out.fuel_exhausted},
                {"result", expr_to_json(out.result)}};
    std::cout << report.dump(2) << '\n';
    if (!opt.out_file.empty()) {
        store_binary(opt.out_file, encode_bytes(out.result));
    }
    return out.fuel_exhausted ? 1 : 0;
}

int cmd_codd_encode(const Options& opt)
{
    CoddExpr e = expr_from_json(load_json(opt.in_file));
    std::vector<std::uint8_t> bytes = encode_bytes(e);
    if (opt.out_file.empty()) {
        throw std::runtime_error("codd encode requires --out");
    }
    store_binary(opt.out_file, bytes);
    std::cout << json{{"nodes", e.nodes().size()}, {"bytes", bytes.size()}}.dump(2) << '\n';
    return 0;
}

int cmd_codd_decode(const Options& opt)
{
    CoddExpr e = decode_bytes(load_binary(opt.in_file));
    json out = expr_to_json(e);
    std::cout << out.dump(2) << '\n';
    if (!opt.out_file.empty()) {
        write_file_atomic(opt.out_file, out.dump(2) + "\n");
    }
    return 0;
}

int cmd_codd_memoize(const Options& opt)
{
    CoddExpr e = decode_bytes(load_binary(opt.in_file));
    CoddExpr p = decode_bytes(load_binary(opt.pattern_file));
    RewriteResult r = memoize_rewrite(e, p);
    if (r.sites_rewritten == 0) {
        std::cerr << "notice: pattern is not repeated; expression unchanged\n";
    }
    std::cout << json{{"sites_rewritten", r.sites_rewritten},
                      {"codd_size", codd_size(r.expr)}}
                     .dump(2)
              << '\n';
    if (!opt.out_file.empty()) {
        store_binary(opt.out_file, encode_bytes(r.expr));
    }
    return 0;
}

int cmd_pattern_check(const Options& opt)
{
    ProgramView p(labeling_from_json(load_json(opt.p_file)));
    ProgramView f(labeling_from_json(load_json(opt.f_file)));
    RelevanceFn rho = relevance_from_json(load_json(opt.rho_file));
    std::optional<Distribution> d;
    if (!opt.dist_file.empty()) {
        d = distribution_from_json(load_json(opt.dist_file));
    }
    PatternVerdict v = pattern_check(p, f, rho, d);
    std::cout << verdict_to_json(v).dump(2) << '\n';
    return 0;
}

int cmd_synsem_correlate(const Options& opt)
{
    CorrelationConfig config;
    config.n = opt.n;
    config.pairs = opt.pairs;
    config.seed = opt.seed;
    config.jobs = opt.jobs;
    config.depth_decay = rat_from_string(opt.decay);
    config.scheme_entropy = opt.schemes.find("entropy") != std::string::npos;
    config.scheme_depth = opt.schemes.find("depth") != std::string::npos;
    if (!config.scheme_entropy && !config.scheme_depth) {
        throw std::runtime_error("--scheme must name entropy and/or depth");
    }
    Distribution d = load_dist_or_uniform(opt.dist_file, opt.n);
    CorrelationReport report = correlation_experiment(config, d);
    std::string body = correlation_report_to_json(report).dump(2) + "\n";
    if (!opt.out_file.empty()) {
        write_file_atomic(opt.out_file, body);
    } else {
        std::cout << body;
    }
    if (!opt.csv_file.empty()) {
        write_file_atomic(opt.csv_file, correlation_report_to_csv(report));
    }
    return 0;
}

json growth_config_json(const GrowthConfig& c)
{
    return json{{"n", c.n}, {"steps", c.steps}, {"seed", c.seed}, {"alphabet", c.alphabet}};
}

int cmd_grow(const Options& opt)
{
    GrowthConfig config{opt.n, opt.steps, opt.seed, opt.alphabet};
    Distribution d = load_dist_or_uniform(opt.dist_file, opt.n);
    GrowthTrace trace = grow_random(config, d);
    std::string body = "# config " + growth_config_json(config).dump() + "\n" +
                       trace_to_csv(trace);
    if (!opt.trace_file.empty()) {
        write_file_atomic(opt.trace_file, body);
    } else {
        std::cout << body;
    }
    return 0;
}

int cmd_grow_ensemble(const Options& opt)
{
    SizeEntropyConfig config;
    config.sizes = parse_sizes(opt.sizes_spec);
    config.samples = opt.samples;
    config.n = opt.n;
    config.seed = opt.seed;
    config.alphabet = opt.alphabet;
    config.jobs = opt.jobs;
    Distribution d = load_dist_or_uniform(opt.dist_file, opt.n);
    SizeEntropyTable table = size_entropy_ensemble(config, d);
    json cfg{{"sizes", opt.sizes_spec}, {"samples", config.samples},   {"n", config.n},
             {"seed", config.seed},     {"alphabet", config.alphabet}};
    if (table.spearman_size_entropy) {
        cfg["spearman_size_entropy"] = *table.spearman_size_entropy;
    }
    std::string body = "# config " + cfg.dump() + "\n" + ensemble_to_csv(table);
    if (!opt.out_file.empty()) {
        write_file_atomic(opt.out_file, body);
    } else {
        std::cout << body;
    }
    return 0;
}

int cmd_grow_profile(const Options& opt)
{
    ProfileConfig config;
    config.size = opt.size;
    config.samples = opt.samples;
    config.n = opt.n;
    config.seed = opt.seed;
    config.alphabet = opt.alphabet;
    config.delta = rat_from_string(opt.delta);
    config.bins = opt.bins;
    Distribution d = load_dist_or_uniform(opt.dist_file, opt.n);
    ConcentrationProfile profile = entropy_concentration_profile(config, d);
    std::string body = profile_to_json(profile).dump(2) + "\n";
    if (!opt.out_file.empty()) {
        write_file_atomic(opt.out_file, body);
    } else {
        std::cout << body;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"CoDD laboratory: partitions, decision trees, combinatorial decision dags"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Options opt;
    int (*handler)(const Options&) = nullptr;
    bool tree_greedy = false;

    auto* entropy = app.add_subcommand("entropy", "Logical and Shannon entropy of a partition");
    entropy->add_option("--partition", opt.partition_file, "partition JSON file")->required();
    entropy->add_option("--dist", opt.dist_file, "distribution JSON file")->required();
    entropy->callback([&] { handler = cmd_entropy; });

    auto* tree = app.add_subcommand("tree", "Decision-tree construction");
    auto* tree_opt = tree->add_subcommand("optimal", "Exact minimum-average-depth tree");
    auto* tree_grd = tree->add_subcommand("greedy", "Greedy information-gain tree");
    for (auto* sub : {tree_opt, tree_grd}) {
        sub->add_option("--labeling", opt.labeling_file, "labeling JSON file")->required();
        sub->add_option("--dist", opt.dist_file, "distribution JSON file (default uniform)");
        sub->add_option("--out", opt.out_file, "also write the result JSON here");
    }
    tree_opt->callback([&] {
        handler = [](const Options& o) { return cmd_tree(o, false); };
    });
    tree_grd->callback([&] {
        handler = [](const Options& o) { return cmd_tree(o, true); };
        tree_greedy = true;
    });
    (void)tree_greedy;

    auto* codd = app.add_subcommand("codd", "CoDD expression operations");
    auto* codd_eval = codd->add_subcommand("eval", "Reduce an expression with fuel");
    codd_eval->add_option("--in", opt.in_file, "encoded expression file")->required();
    codd_eval->add_option("--arg", opt.arg_files, "encoded argument files, left to right");
    codd_eval->add_option("--fuel", opt.fuel, "maximum reduction steps (default 10000)");
    codd_eval->add_option("--out", opt.out_file, "write the encoded result here");
    codd_eval->callback([&] { handler = cmd_codd_eval; });

    auto* codd_enc = codd->add_subcommand("encode", "Encode an expression JSON to binary");
    codd_enc->add_option("--in", opt.in_file, "expression JSON file")->required();
    codd_enc->add_option("--out", opt.out_file, "output binary file")->required();
    codd_enc->callback([&] { handler = cmd_codd_encode; });

    auto* codd_dec = codd->add_subcommand("decode", "Decode a binary expression");
    codd_dec->add_option("--in", opt.in_file, "encoded expression file")->required();
    codd_dec->add_option("--out", opt.out_file, "also write the expression JSON here");
    codd_dec->callback([&] { handler = cmd_codd_decode; });

    auto* codd_memo = codd->add_subcommand("memoize", "Rewrite (P a)(P b) into Sp P a b");
    codd_memo->add_option("--in", opt.in_file, "encoded expression file")->required();
    codd_memo->add_option("--pattern", opt.pattern_file, "encoded pattern file")->required();
    codd_memo->add_option("--out", opt.out_file, "write the rewritten encoding here");
    codd_memo->callback([&] { handler = cmd_codd_memoize; });

    auto* pattern = app.add_subcommand("pattern", "Distinction-based pattern predicates");
    auto* pat_check = pattern->add_subcommand("check", "Evaluate the pattern predicate");
    pat_check->add_option("--p", opt.p_file, "candidate pattern labeling JSON")->required();
    pat_check->add_option("--f", opt.f_file, "target program labeling JSON")->required();
    pat_check->add_option("--rho", opt.rho_file, "relevance function JSON")->required();
    pat_check->add_option("--dist", opt.dist_file, "distribution JSON for runtime comparison");
    pat_check->callback([&] { handler = cmd_pattern_check; });

    auto* synsem = app.add_subcommand("synsem", "Syntax-semantics correlation");
    auto* correlate = synsem->add_subcommand("correlate", "Run the correlation experiment");
    correlate->add_option("--n", opt.n, "input bit length (default 6)");
    correlate->add_option("--pairs", opt.pairs, "number of labeling pairs (default 200)");
    correlate->add_option("--seed", opt.seed, "64-bit seed (default 0)");
    correlate->add_option("--scheme", opt.schemes, "entropy,depth (default both)");
    correlate->add_option("--decay", opt.decay, "depth-scheme decay p/q (default 1/2)");
    correlate->add_option("--dist", opt.dist_file, "distribution JSON (default uniform)");
    correlate->add_option("--out", opt.out_file, "report JSON output file");
    correlate->add_option("--csv", opt.csv_file, "per-pair CSV output file");
    correlate->add_option("--jobs", opt.jobs, "worker count (default 1)");
    correlate->callback([&] { handler = cmd_synsem_correlate; });

    auto* grow = app.add_subcommand("grow", "Random CoDD growth experiments");
    grow->add_option("--n", opt.n, "input bit length (default 6)");
    grow->add_option("--steps", opt.steps, "growth steps (default 1000)");
    grow->add_option("--seed", opt.seed, "64-bit seed (default 0)");
    grow->add_option("--alphabet", opt.alphabet, "leaf label alphabet size (default 2)");
    grow->add_option("--dist", opt.dist_file, "distribution JSON (default uniform)");
    grow->add_option("--trace", opt.trace_file, "trace CSV output file");

    auto* ensemble = grow->add_subcommand("ensemble", "Size-vs-entropy ensemble table");
    ensemble->add_option("--sizes", opt.sizes_spec, "sizes, e.g. 1..50 or 1,5,10");
    ensemble->add_option("--samples", opt.samples, "samples per size (default 20)");
    ensemble->add_option("--n", opt.n, "input bit length (default 6)");
    ensemble->add_option("--seed", opt.seed, "64-bit seed (default 0)");
    ensemble->add_option("--alphabet", opt.alphabet, "leaf label alphabet size (default 2)");
    ensemble->add_option("--dist", opt.dist_file, "distribution JSON (default uniform)");
    ensemble->add_option("--out", opt.out_file, "table CSV output file");
    ensemble->add_option("--jobs", opt.jobs, "worker count (default 1)");
    ensemble->callback([&] { handler = cmd_grow_ensemble; });

    auto* profile = grow->add_subcommand("profile", "Fixed-size entropy concentration profile");
    profile->add_option("--size", opt.size, "exact decision-node count (default 30)");
    profile->add_option("--samples", opt.samples, "sample count (default 20)");
    profile->add_option("--n", opt.n, "input bit length (default 6)");
    profile->add_option("--seed", opt.seed, "64-bit seed (default 0)");
    profile->add_option("--alphabet", opt.alphabet, "leaf label alphabet size (default 2)");
    profile->add_option("--delta", opt.delta, "near-max band p/q (default 1/10)");
    profile->add_option("--bins", opt.bins, "histogram bins (default 20)");
    profile->add_option("--dist", opt.dist_file, "distribution JSON (default uniform)");
    profile->add_option("--out", opt.out_file, "profile JSON output file");
    profile->callback([&] { handler = cmd_grow_profile; });

    grow->callback([&] {
        if (!ensemble->parsed() && !profile->parsed()) {
            handler = cmd_grow;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (!handler) {
        std::cerr << "usage error: missing subcommand\n";
        return 2;
    }

    try {
        auto start = std::chrono::steady_clock::now();
        int rc = handler(opt);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cerr << "done in " << ms << " ms\n";
        return rc;
    } catch (const coddlab::DecodeError& e) {
        std::cerr << "error (decode): " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (domain): " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error (domain): " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
