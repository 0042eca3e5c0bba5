#include "coddlab/partition.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace coddlab {

Partition::Partition(InputSpace space, const std::vector<int>& cell_of)
    : space_(space)
    , cell_of_(space.size())
    , cell_count_(0)
{
    if (cell_of.size() != space_.size()) {
        throw std::invalid_argument("Partition: cell vector size mismatch");
    }
    // Canonicalize: relabel cells by first occurrence in numeric input order.
    std::unordered_map<int, int> relabel;
    for (std::size_t x = 0; x < cell_of.size(); ++x) {
        auto [it, inserted] = relabel.try_emplace(cell_of[x], cell_count_);
        if (inserted) {
            ++cell_count_;
        }
        cell_of_[x] = it->second;
    }
}

Partition Partition::indiscrete(InputSpace space)
{
    return Partition(space, std::vector<int>(space.size(), 0));
}

Partition Partition::discrete(InputSpace space)
{
    std::vector<int> c(space.size());
    for (std::size_t x = 0; x < c.size(); ++x) {
        c[x] = static_cast<int>(x);
    }
    return Partition(space, c);
}

DitSet dit_set(const Partition& p)
{
    DitSet dits;
    const auto size = p.space().size();
    for (Input x = 0; x < size; ++x) {
        for (Input y = x + 1; y < size; ++y) {
            if (p.cell(x) != p.cell(y)) {
                dits.insert({x, y});
            }
        }
    }
    return dits;
}

static void check_same_space(const InputSpace& a, const InputSpace& b, const char* what)
{
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": input space mismatch");
    }
}

Rat logical_entropy(const Partition& p, const Distribution& d)
{
    check_same_space(p.space(), d.space(), "logical_entropy");
    std::vector<Rat> cell_mass(p.cell_count(), Rat(0));
    for (Input x = 0; x < p.space().size(); ++x) {
        cell_mass[p.cell(x)] += d.mass(x);
    }
    Rat sum_sq = 0;
    for (const Rat& m : cell_mass) {
        sum_sq += m * m;
    }
    return Rat(1) - sum_sq;
}

double shannon_entropy(const Partition& p, const Distribution& d)
{
    check_same_space(p.space(), d.space(), "shannon_entropy");
    std::vector<Rat> cell_mass(p.cell_count(), Rat(0));
    for (Input x = 0; x < p.space().size(); ++x) {
        cell_mass[p.cell(x)] += d.mass(x);
    }
    double h = 0.0;
    for (const Rat& m : cell_mass) {
        if (m > 0) {
            double md = rat_to_double(m);
            h -= md * std::log2(md);
        }
    }
    return h;
}

bool refines(const Partition& p1, const Partition& p2)
{
    check_same_space(p1.space(), p2.space(), "refines");
    // Each p1 cell must map into a single p2 cell.
    std::vector<int> image(p1.cell_count(), -1);
    for (Input x = 0; x < p1.space().size(); ++x) {
        int c1 = p1.cell(x);
        int c2 = p2.cell(x);
        if (image[c1] == -1) {
            image[c1] = c2;
        } else if (image[c1] != c2) {
            return false;
        }
    }
    return true;
}

} // namespace coddlab
