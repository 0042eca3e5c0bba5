#include "coddlab/pattern.hpp"

#include <stdexcept>

namespace coddlab {

RelevanceFn::RelevanceFn(InputSpace space, Rat default_weight)
    : space_(space)
    , default_weight_(std::move(default_weight))
{
    if (default_weight_ < 0) {
        throw std::invalid_argument("RelevanceFn: negative default weight");
    }
}

void RelevanceFn::set_weight(Input x, Input y, Rat w)
{
    if (x == y) {
        throw std::invalid_argument("RelevanceFn: a pair must be two distinct inputs");
    }
    if (x >= space_.size() || y >= space_.size()) {
        throw std::invalid_argument("RelevanceFn: input out of range");
    }
    if (w < 0) {
        throw std::invalid_argument("RelevanceFn: negative weight");
    }
    overrides_[make_pair_sorted(x, y)] = std::move(w);
}

Rat RelevanceFn::weight(Input x, Input y) const
{
    auto it = overrides_.find(make_pair_sorted(x, y));
    return it != overrides_.end() ? it->second : default_weight_;
}

Rat RelevanceFn::total_weight() const
{
    auto size = space_.size();
    std::size_t total_pairs = size * (size - 1) / 2;
    Rat total = default_weight_ * Rat(static_cast<long long>(total_pairs - overrides_.size()));
    for (const auto& [pair, w] : overrides_) {
        total += w;
    }
    return total;
}

ProgramView::ProgramView(Labeling lab)
    : lab_(std::move(lab))
    , dits_(dit_set(lab_.partition()))
{
}

ProgramView::ProgramView(const DecisionTree& t, const InputSpace& space)
    : ProgramView(tree_labeling(t, space))
{
}

namespace {

Labeling codd_labeling(const CoddExpr& e, const InputSpace& space, std::uint64_t fuel)
{
    std::vector<int> labels(space.size());
    std::map<Bits, int> output_ids;
    for (Input x = 0; x < space.size(); ++x) {
        EvalOutcome out = eval_codd(e, {CoddExpr::leaf(BitString{x, space.bits()})}, fuel);
        if (out.fuel_exhausted) {
            throw std::runtime_error("ProgramView: fuel exhausted evaluating CoDD on input " +
                                     BitString{x, space.bits()}.str());
        }
        Bits key = encode(out.result);
        labels[x] =
            output_ids.try_emplace(std::move(key), static_cast<int>(output_ids.size()))
                .first->second;
    }
    return Labeling(space, std::move(labels));
}

} // namespace

ProgramView::ProgramView(const CoddExpr& e, const InputSpace& space, std::uint64_t fuel)
    : ProgramView(codd_labeling(e, space, fuel))
{
}

DitSet program_dits(const ProgramView& f)
{
    return f.dits();
}

namespace {

void check_same_space(const ProgramView& p, const ProgramView& f, const RelevanceFn& rho)
{
    if (p.space() != f.space() || p.space() != rho.space()) {
        throw std::invalid_argument("pattern predicate: input space mismatch");
    }
}

/// Relevant dits of F that P fails to make.
std::size_t count_missed_relevant(const ProgramView& p, const ProgramView& f,
                                  const RelevanceFn& rho)
{
    std::size_t missed = 0;
    for (const InputPair& d : f.dits()) {
        if (rho.relevant(d.first, d.second) && !p.dits().contains(d)) {
            ++missed;
        }
    }
    return missed;
}

Rat missed_relevant_weight(const ProgramView& p, const ProgramView& f, const RelevanceFn& rho)
{
    Rat w = 0;
    for (const InputPair& d : f.dits()) {
        if (rho.relevant(d.first, d.second) && !p.dits().contains(d)) {
            w += rho.weight(d);
        }
    }
    return w;
}

PatternVerdict base_verdict(const ProgramView& p, const ProgramView& f, const RelevanceFn& rho)
{
    PatternVerdict v;
    v.dits_f = f.dits().size();
    v.dits_p = p.dits().size();
    v.missed_relevant = count_missed_relevant(p, f, rho);
    if (v.dits_f > 0 && rho.total_weight() > 0) {
        v.intensity = pattern_intensity(p, f, rho);
    }
    return v;
}

} // namespace

PatternVerdict is_pattern(const ProgramView& p, const ProgramView& f, const RelevanceFn& rho)
{
    check_same_space(p, f, rho);
    PatternVerdict v = base_verdict(p, f, rho);
    v.is_pattern = v.missed_relevant == 0 && v.dits_p < v.dits_f;
    return v;
}

PatternVerdict is_approx_pattern(const ProgramView& p, const ProgramView& f,
                                 const RelevanceFn& rho, int slack)
{
    check_same_space(p, f, rho);
    if (slack < 1) {
        throw std::invalid_argument("is_approx_pattern: slack must be >= 1");
    }
    PatternVerdict v = base_verdict(p, f, rho);
    auto fewer = static_cast<long long>(v.dits_f) - static_cast<long long>(v.dits_p);
    v.is_pattern = fewer >= slack && v.missed_relevant < static_cast<std::size_t>(slack);
    return v;
}

Rat pattern_intensity(const ProgramView& p, const ProgramView& f, const RelevanceFn& rho)
{
    check_same_space(p, f, rho);
    Rat dits_f(static_cast<long long>(f.dits().size()));
    if (dits_f == 0) {
        throw std::domain_error("pattern_intensity: undefined for a constant F (no dits)");
    }
    Rat rho_total = rho.total_weight();
    if (rho_total == 0) {
        throw std::domain_error("pattern_intensity: undefined for an all-zero relevance fn");
    }
    Rat dits_p(static_cast<long long>(p.dits().size()));
    Rat first = (dits_f - dits_p) / dits_f;
    if (first < 0) {
        first = 0;
    }
    Rat second = (rho_total - missed_relevant_weight(p, f, rho)) / rho_total;
    return first * second;
}

RuntimeComparison runtime_refines(const ProgramView& p, const ProgramView& f,
                                  const Distribution& d)
{
    if (p.space() != f.space() || p.space() != d.space()) {
        throw std::invalid_argument("runtime_refines: input space mismatch");
    }
    RuntimeComparison r;
    r.depth_p = optimal_tree(p.labeling(), d).min_average_depth;
    r.depth_f = optimal_tree(f.labeling(), d).min_average_depth;
    r.refines = r.depth_p < r.depth_f;
    Rat floor(1, static_cast<long long>(p.space().size()));
    r.factor = r.depth_f / std::max(r.depth_p, floor);
    return r;
}

PatternVerdict pattern_check(const ProgramView& p, const ProgramView& f, const RelevanceFn& rho,
                             const std::optional<Distribution>& d)
{
    PatternVerdict v = is_pattern(p, f, rho);
    if (d) {
        RuntimeComparison r = runtime_refines(p, f, *d);
        v.runtime_refines = r.refines;
        v.runtime_factor = r.factor;
    }
    return v;
}

} // namespace coddlab
