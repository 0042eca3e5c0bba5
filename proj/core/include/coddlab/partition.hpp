#pragma once

#include "coddlab/space.hpp"

#include <set>
#include <utility>
#include <vector>

namespace coddlab {

/// Unordered pair of distinct inputs, stored with first < second.
using InputPair = std::pair<Input, Input>;

inline InputPair make_pair_sorted(Input x, Input y)
{
    return x < y ? InputPair{x, y} : InputPair{y, x};
}

/// Set of distinctions: unordered pairs of inputs lying in different cells.
using DitSet = std::set<InputPair>;

/// Total assignment of inputs to cells 0..k-1. Cell ids are canonicalized by
/// first occurrence in numeric input order, so equal partitions compare equal.
class Partition {
public:
    Partition(InputSpace space, const std::vector<int>& cell_of);

    static Partition indiscrete(InputSpace space);
    static Partition discrete(InputSpace space);

    const InputSpace& space() const { return space_; }
    int cell(Input x) const { return cell_of_.at(x); }
    int cell_count() const { return cell_count_; }
    const std::vector<int>& cells() const { return cell_of_; }

    bool operator==(const Partition& o) const
    {
        return space_ == o.space_ && cell_of_ == o.cell_of_;
    }

private:
    InputSpace space_;
    std::vector<int> cell_of_;
    int cell_count_;
};

DitSet dit_set(const Partition& p);

/// 1 - sum of squared cell masses, exact.
Rat logical_entropy(const Partition& p, const Distribution& d);

/// -sum m log2 m over cells with positive mass, in bits.
double shannon_entropy(const Partition& p, const Distribution& d);

/// True iff every cell of p1 is contained in some cell of p2.
bool refines(const Partition& p1, const Partition& p2);

} // namespace coddlab
