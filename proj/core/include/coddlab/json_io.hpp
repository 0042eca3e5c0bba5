#pragma once

#include "coddlab/dtree.hpp"
#include "coddlab/growth.hpp"
#include "coddlab/pattern.hpp"
#include "coddlab/synsem.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace coddlab {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Core value formats

inline json distribution_to_json(const Distribution& d)
{
    json masses = json::array();
    for (const Rat& m : d.masses()) {
        masses.push_back(rat_to_string(m));
    }
    return json{{"n", d.space().bits()}, {"mass", masses}};
}

inline Distribution distribution_from_json(const json& j)
{
    InputSpace space(j.at("n").get<int>());
    std::vector<Rat> masses;
    for (const auto& m : j.at("mass")) {
        masses.push_back(rat_from_string(m.get<std::string>()));
    }
    return Distribution(space, std::move(masses));
}

inline json partition_to_json(const Partition& p)
{
    return json{{"n", p.space().bits()}, {"cell", p.cells()}};
}

inline Partition partition_from_json(const json& j)
{
    InputSpace space(j.at("n").get<int>());
    return Partition(space, j.at("cell").get<std::vector<int>>());
}

inline json labeling_to_json(const Labeling& lab)
{
    return json{{"n", lab.space().bits()}, {"label", lab.labels()}};
}

inline Labeling labeling_from_json(const json& j)
{
    InputSpace space(j.at("n").get<int>());
    return Labeling(space, j.at("label").get<std::vector<int>>());
}

inline json tree_to_json(const DecisionTree::Node& node)
{
    if (node.is_leaf()) {
        return json{{"leaf", node.label}};
    }
    return json{{"bit", node.bit_index},
                {"zero", tree_to_json(*node.zero)},
                {"one", tree_to_json(*node.one)}};
}

inline json tree_to_json(const DecisionTree& t)
{
    return tree_to_json(t.root());
}

inline DecisionTree tree_from_json(const json& j)
{
    if (j.contains("leaf")) {
        return DecisionTree::leaf(j.at("leaf").get<int>());
    }
    return DecisionTree::node_allow_requery(j.at("bit").get<int>(),
                                            tree_from_json(j.at("zero")),
                                            tree_from_json(j.at("one")));
}

inline json relevance_to_json(const RelevanceFn& rho)
{
    json overrides = json::array();
    for (const auto& [pair, w] : rho.overrides()) {
        overrides.push_back(json::array({pair.first, pair.second, rat_to_string(w)}));
    }
    return json{{"n", rho.space().bits()},
                {"default_weight", rat_to_string(rho.default_weight())},
                {"overrides", overrides}};
}

inline RelevanceFn relevance_from_json(const json& j)
{
    InputSpace space(j.at("n").get<int>());
    RelevanceFn rho(space, rat_from_string(j.at("default_weight").get<std::string>()));
    if (j.contains("overrides")) {
        for (const auto& o : j.at("overrides")) {
            rho.set_weight(o.at(0).get<Input>(), o.at(1).get<Input>(),
                           rat_from_string(o.at(2).get<std::string>()));
        }
    }
    return rho;
}

// ---------------------------------------------------------------------------
// Reports

inline json verdict_to_json(const PatternVerdict& v)
{
    json j{{"is_pattern", v.is_pattern},
           {"dits_f", v.dits_f},
           {"dits_p", v.dits_p},
           {"missed_relevant", v.missed_relevant}};
    j["intensity"] = v.intensity ? json(rat_to_string(*v.intensity)) : json(nullptr);
    j["runtime_refines"] = v.runtime_refines ? json(*v.runtime_refines) : json(nullptr);
    j["runtime_factor"] =
        v.runtime_factor ? json(rat_to_string(*v.runtime_factor)) : json(nullptr);
    return j;
}

inline json correlation_report_to_json(const CorrelationReport& r)
{
    json config{{"n", r.config.n},
                {"pairs", r.config.pairs},
                {"seed", r.config.seed},
                {"scheme_entropy", r.config.scheme_entropy},
                {"scheme_depth", r.config.scheme_depth},
                {"depth_decay", rat_to_string(r.config.depth_decay)}};
    json records = json::array();
    for (const PairRecord& rec : r.records) {
        json jr{{"pair_id", rec.pair_id}, {"semantic", rat_to_string(rec.semantic)}};
        jr["syn_entropy"] = rec.syn_entropy ? json(rat_to_string(*rec.syn_entropy)) : json(nullptr);
        jr["syn_depth"] = rec.syn_depth ? json(rat_to_string(*rec.syn_depth)) : json(nullptr);
        records.push_back(std::move(jr));
    }
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return json{{"config", config},
                {"records", records},
                {"spearman_entropy", opt(r.spearman_entropy)},
                {"pearson_entropy", opt(r.pearson_entropy)},
                {"spearman_depth", opt(r.spearman_depth)},
                {"pearson_depth", opt(r.pearson_depth)}};
}

inline std::string correlation_report_to_csv(const CorrelationReport& r)
{
    std::ostringstream out;
    out << "pair_id,semantic,syn_entropy,syn_depth\n";
    for (const PairRecord& rec : r.records) {
        out << rec.pair_id << ',' << rat_to_string(rec.semantic) << ','
            << (rec.syn_entropy ? rat_to_string(*rec.syn_entropy) : "") << ','
            << (rec.syn_depth ? rat_to_string(*rec.syn_depth) : "") << '\n';
    }
    return out.str();
}

inline std::string trace_to_csv(const GrowthTrace& trace)
{
    std::ostringstream out;
    out << "step,size,entropy_num,entropy_den\n";
    for (const TracePoint& p : trace.points) {
        out << p.step << ',' << p.size << ',' << numerator(p.entropy).str() << ','
            << denominator(p.entropy).str() << '\n';
    }
    return out.str();
}

inline std::string ensemble_to_csv(const SizeEntropyTable& table)
{
    std::ostringstream out;
    out << "size,mean,min,q25,median,q75,max\n";
    for (const SizeEntropyRow& row : table.rows) {
        out << row.size << ',' << rat_to_string(row.mean) << ',' << rat_to_string(row.min)
            << ',' << rat_to_string(row.q25) << ',' << rat_to_string(row.median) << ','
            << rat_to_string(row.q75) << ',' << rat_to_string(row.max) << '\n';
    }
    return out.str();
}

inline json profile_to_json(const ConcentrationProfile& p)
{
    json entropies = json::array();
    for (const Rat& e : p.entropies) {
        entropies.push_back(rat_to_string(e));
    }
    return json{{"config",
                 {{"size", p.config.size},
                  {"samples", p.config.samples},
                  {"n", p.config.n},
                  {"seed", p.config.seed},
                  {"alphabet", p.config.alphabet},
                  {"delta", rat_to_string(p.config.delta)},
                  {"bins", p.config.bins}}},
                {"entropies", entropies},
                {"max_entropy", rat_to_string(p.max_entropy)},
                {"histogram", p.histogram},
                {"fraction_near_max", rat_to_string(p.fraction_near_max)}};
}

// ---------------------------------------------------------------------------
// File helpers

/// Writes via a temp file in the same directory, then renames into place.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

} // namespace coddlab
