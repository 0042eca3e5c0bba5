#pragma once

#include "coddlab/codd.hpp"
#include "coddlab/dtree.hpp"
#include "coddlab/partition.hpp"

#include <map>
#include <optional>

namespace coddlab {

/// Nonnegative weight per unordered input pair; weight > 0 marks the
/// distinction as relevant.
class RelevanceFn {
public:
    RelevanceFn(InputSpace space, Rat default_weight);

    void set_weight(Input x, Input y, Rat w);

    const InputSpace& space() const { return space_; }
    const Rat& default_weight() const { return default_weight_; }
    const std::map<InputPair, Rat>& overrides() const { return overrides_; }

    Rat weight(Input x, Input y) const;
    Rat weight(const InputPair& p) const { return weight(p.first, p.second); }
    bool relevant(Input x, Input y) const { return weight(x, y) > 0; }

    /// Total weight over all unordered pairs of the space.
    Rat total_weight() const;

    static RelevanceFn all_relevant(InputSpace space) { return RelevanceFn(space, Rat(1)); }
    static RelevanceFn none_relevant(InputSpace space) { return RelevanceFn(space, Rat(0)); }

private:
    InputSpace space_;
    Rat default_weight_;
    std::map<InputPair, Rat> overrides_;
};

/// Extensional view of a program at fixed input length: its labeling plus
/// the distinctions it makes.
class ProgramView {
public:
    explicit ProgramView(Labeling lab);
    ProgramView(const DecisionTree& t, const InputSpace& space);

    /// Views a CoDD expression through its action on length-n inputs: each
    /// input x is fed as a leaf bit string; distinct normal forms get
    /// distinct output identifiers. Fuel exhaustion throws std::runtime_error.
    ProgramView(const CoddExpr& e, const InputSpace& space, std::uint64_t fuel);

    const InputSpace& space() const { return lab_.space(); }
    const Labeling& labeling() const { return lab_; }
    const DitSet& dits() const { return dits_; }

private:
    Labeling lab_;
    DitSet dits_;
};

DitSet program_dits(const ProgramView& f);

struct PatternVerdict {
    bool is_pattern = false;
    std::size_t dits_f = 0;
    std::size_t dits_p = 0;
    std::size_t missed_relevant = 0;
    std::optional<Rat> intensity; // absent when undefined (F constant / rho zero)
    std::optional<bool> runtime_refines;
    std::optional<Rat> runtime_factor;
};

/// Exact pattern predicate: P covers every relevant distinction of F and
/// makes strictly fewer distinctions overall.
PatternVerdict is_pattern(const ProgramView& p, const ProgramView& f, const RelevanceFn& rho);

/// Approximate variant: at least K fewer distinctions overall, and fewer
/// than K relevant distinctions of F missed. K >= 1.
PatternVerdict is_approx_pattern(const ProgramView& p, const ProgramView& f,
                                 const RelevanceFn& rho, int slack);

/// max(0, (|dits F| - |dits P|) / |dits F|)
///   * (w(rho) - w(relevant dits of F missed by P)) / w(rho)
/// Throws std::domain_error when F is constant or rho is all-zero.
Rat pattern_intensity(const ProgramView& p, const ProgramView& f, const RelevanceFn& rho);

struct RuntimeComparison {
    bool refines = false;
    Rat factor; // depth(F) / max(depth(P), 1/2^n)
    Rat depth_p;
    Rat depth_f;
};

/// Compares minimal average decision-tree depths of P and F under d.
RuntimeComparison runtime_refines(const ProgramView& p, const ProgramView& f,
                                  const Distribution& d);

/// Fills every PatternVerdict field, including the runtime comparison when a
/// distribution is supplied.
PatternVerdict pattern_check(const ProgramView& p, const ProgramView& f, const RelevanceFn& rho,
                             const std::optional<Distribution>& d);

} // namespace coddlab
