#pragma once

#include "coddlab/rational.hpp"

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace coddlab {

/// Input value: the numeric reading of a fixed-length bit string.
using Input = std::uint32_t;

constexpr int kMaxSpaceBits = 16;

/// The complete set of bit strings of a fixed length n, enumerated in
/// numeric ascending order (0 .. 2^n - 1).
class InputSpace {
public:
    explicit InputSpace(int n)
        : n_(n)
    {
        if (n < 1 || n > kMaxSpaceBits) {
            throw std::invalid_argument("InputSpace: bit length must be in [1, " +
                                        std::to_string(kMaxSpaceBits) + "], got " +
                                        std::to_string(n));
        }
    }

    int bits() const { return n_; }
    std::size_t size() const { return std::size_t{1} << n_; }

    /// Bit at position i, positions indexed 0..n-1 from most significant.
    int bit(Input x, int i) const { return (x >> (n_ - 1 - i)) & 1u; }

    bool operator==(const InputSpace& o) const { return n_ == o.n_; }
    bool operator!=(const InputSpace& o) const { return n_ != o.n_; }

private:
    int n_;
};

/// Fixed-length binary string. Thin value wrapper used where the bit-string
/// reading matters more than the numeric one.
struct BitString {
    Input value = 0;
    int length = 0;

    static BitString parse(const std::string& s)
    {
        if (s.empty() || s.size() > kMaxSpaceBits) {
            throw std::invalid_argument("BitString: bad length " + std::to_string(s.size()));
        }
        BitString b;
        b.length = static_cast<int>(s.size());
        for (char c : s) {
            if (c != '0' && c != '1') {
                throw std::invalid_argument("BitString: invalid character in \"" + s + "\"");
            }
            b.value = (b.value << 1) | static_cast<Input>(c - '0');
        }
        return b;
    }

    int bit(int i) const { return (value >> (length - 1 - i)) & 1u; }

    std::string str() const
    {
        std::string s(length, '0');
        for (int i = 0; i < length; ++i) {
            s[i] = bit(i) ? '1' : '0';
        }
        return s;
    }

    bool operator==(const BitString& o) const = default;
};

/// Exact probability distribution over an InputSpace.
class Distribution {
public:
    Distribution(InputSpace space, std::vector<Rat> mass)
        : space_(space)
        , mass_(std::move(mass))
    {
        if (mass_.size() != space_.size()) {
            throw std::invalid_argument("Distribution: mass vector size mismatch");
        }
        Rat total = 0;
        for (const Rat& m : mass_) {
            if (m < 0) {
                throw std::invalid_argument("Distribution: negative mass");
            }
            total += m;
        }
        if (total != 1) {
            throw std::invalid_argument("Distribution: masses sum to " + rat_to_string(total) +
                                        ", expected 1");
        }
    }

    static Distribution uniform(InputSpace space)
    {
        std::vector<Rat> m(space.size(), Rat(1, static_cast<long>(space.size())));
        return Distribution(space, std::move(m));
    }

    const InputSpace& space() const { return space_; }
    const Rat& mass(Input x) const { return mass_.at(x); }
    const std::vector<Rat>& masses() const { return mass_; }

private:
    InputSpace space_;
    std::vector<Rat> mass_;
};

} // namespace coddlab
